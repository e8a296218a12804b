use rayon::prelude::*;
use serde::Serialize;

use super::config::SimConfig;
use super::engine::{simulate_duel, simulate_indifference, simulate_symmetric, StoppingRule};
use crate::equilibrium::EquilibriumSolution;
use crate::error::Result;
use crate::strategy::{ConstantGap, GapRule};

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: usize,
    pub truncation_budget: f64,
}

impl PayoffEstimate {
    pub fn from_samples(samples: &[f64], truncation_budget: f64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            std_err: (var / n as f64).sqrt(),
            n,
            truncation_budget,
        }
    }
}

/// Per-path outcomes in index order, whatever the thread count.
fn per_path<T, F>(cfg: &SimConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..cfg.n_paths as u64).into_par_iter().map(f).collect()
}

fn budget(cfg: &SimConfig, eq: &EquilibriumSolution) -> f64 {
    cfg.truncation_budget(eq.a_hat())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymmetricEstimate {
    pub leader: PayoffEstimate,
    pub follower: PayoffEstimate,
    /// Paths on which the follower defaulted no later than the leader.
    pub follower_first: usize,
}

/// Equilibrium of the asymmetric game from `(cfg.x0, cfg.y0)`.
pub fn estimate_asymmetric(cfg: &SimConfig, eq: &EquilibriumSolution) -> Result<AsymmetricEstimate> {
    estimate_duel(cfg, eq, eq.a0(), &eq.boundary)
}

/// Asymmetric game with an arbitrary leader barrier and follower rule.
pub fn estimate_duel<R: GapRule + Sync>(
    cfg: &SimConfig,
    eq: &EquilibriumSolution,
    barrier: f64,
    rule: &R,
) -> Result<AsymmetricEstimate> {
    cfg.validate()?;
    let paths = per_path(cfg, |i| simulate_duel(cfg, eq, barrier, rule, i));
    let b = budget(cfg, eq);
    let leader: Vec<f64> = paths.iter().map(|p| p.leader).collect();
    let follower: Vec<f64> = paths.iter().map(|p| p.follower).collect();
    Ok(AsymmetricEstimate {
        leader: PayoffEstimate::from_samples(&leader, b),
        follower: PayoffEstimate::from_samples(&follower, b),
        follower_first: paths.iter().filter(|p| p.follower_first).count(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricEstimate {
    pub j1: PayoffEstimate,
    pub j2: PayoffEstimate,
    /// Role values at the first move, averaged over the same paths.
    pub closed1: PayoffEstimate,
    pub closed2: PayoffEstimate,
    /// Path-wise `j - closed`, whose mean is the discretisation error of the
    /// controlled simulation.
    pub diff1: PayoffEstimate,
    pub diff2: PayoffEstimate,
    pub activated: usize,
}

/// Symmetric randomised game from `x0 = y0 = cfg.x0`.
pub fn estimate_symmetric(cfg: &SimConfig, eq: &EquilibriumSolution) -> Result<SymmetricEstimate> {
    cfg.validate()?;
    let paths = per_path(cfg, |i| simulate_symmetric(cfg, eq, i));
    let b = budget(cfg, eq);
    let col = |f: &dyn Fn(&super::engine::SymmetricPath) -> f64| -> PayoffEstimate {
        let v: Vec<f64> = paths.iter().map(f).collect();
        PayoffEstimate::from_samples(&v, b)
    };
    Ok(SymmetricEstimate {
        j1: col(&|p| p.j1),
        j2: col(&|p| p.j2),
        closed1: col(&|p| p.closed1),
        closed2: col(&|p| p.closed2),
        diff1: col(&|p| p.j1 - p.closed1),
        diff2: col(&|p| p.j2 - p.closed2),
        activated: paths.iter().filter(|p| p.activation.is_some()).count(),
    })
}

/// Which firm deviates and how.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Deviation {
    /// Firm 1 reflects at the given barrier instead of `a0`.
    LeaderBarrier(f64),
    /// Firm 2 pays whenever the gap exceeds the given level.
    FollowerGap(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationRow {
    pub deviation: Deviation,
    pub estimate: PayoffEstimate,
    /// Deviation payoff minus the equilibrium payoff of the same firm,
    /// on common random numbers.
    pub gain: PayoffEstimate,
}

/// Payoff of each deviation next to the equilibrium payoff of the same firm.
pub fn deviation_scan(cfg: &SimConfig, eq: &EquilibriumSolution, deviations: &[Deviation]) -> Result<Vec<DeviationRow>> {
    cfg.validate()?;
    let b = budget(cfg, eq);
    let base = per_path(cfg, |i| simulate_duel(cfg, eq, eq.a0(), &eq.boundary, i));
    let mut rows = Vec::with_capacity(deviations.len());
    for &dev in deviations {
        let (own, eq_own): (Vec<f64>, Vec<f64>) = match dev {
            Deviation::LeaderBarrier(a) => {
                let v = per_path(cfg, |i| simulate_duel(cfg, eq, a, &eq.boundary, i).leader);
                (v, base.iter().map(|p| p.leader).collect())
            }
            Deviation::FollowerGap(g) => {
                let v = per_path(cfg, |i| simulate_duel(cfg, eq, eq.a0(), &ConstantGap(g), i).follower);
                (v, base.iter().map(|p| p.follower).collect())
            }
        };
        let gain: Vec<f64> = own.iter().zip(&eq_own).map(|(a, b)| a - b).collect();
        rows.push(DeviationRow {
            deviation: dev,
            estimate: PayoffEstimate::from_samples(&own, b),
            gain: PayoffEstimate::from_samples(&gain, 2.0 * b),
        });
    }
    Ok(rows)
}

/// Expected payoff of moving by `rule` against the equilibrium randomisation.
pub fn indifference_check(cfg: &SimConfig, eq: &EquilibriumSolution, rule: StoppingRule) -> Result<PayoffEstimate> {
    cfg.validate()?;
    let v = per_path(cfg, |i| simulate_indifference(cfg, eq, rule, i));
    Ok(PayoffEstimate::from_samples(&v, budget(cfg, eq)))
}
