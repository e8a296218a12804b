//! Grid versions of the equilibrium controls.
//!
//! Running suprema are taken over grid values only; see the Monte Carlo
//! engine for the bridge-monitored variant.

use serde::Serialize;

use super::hazard::{cumulative_hazard, randomized_time};
use super::path::SamplePath;
use crate::equilibrium::{EquilibriumBoundary, EquilibriumSolution};
use crate::params::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Player {
    One,
    Two,
}

/// Gap level at which the follower pays dividends, as a function of the
/// leader's cash. Negative cash means the leader has defaulted and the rule
/// must return `+inf`.
pub trait GapRule {
    fn level(&self, x: f64) -> f64;
}

impl GapRule for EquilibriumBoundary {
    fn level(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

/// Threshold deviation: pay whenever the gap exceeds a fixed level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantGap(pub f64);

impl GapRule for ConstantGap {
    fn level(&self, x: f64) -> f64 {
        if x < 0.0 {
            f64::INFINITY
        } else {
            self.0
        }
    }
}

/// One controlled realisation of both firms on the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlledTrajectory {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub l: Vec<f64>,
    pub d: Vec<f64>,
    pub gamma_x: Option<usize>,
    pub gamma_y: Option<usize>,
    pub leader_tag: Option<Player>,
}

impl ControlledTrajectory {
    /// `min(gamma_x, gamma_y)`, if either defaulted.
    pub fn first_default(&self) -> Option<usize> {
        match (self.gamma_x, self.gamma_y) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn assemble(
        path: &SamplePath,
        uncontrolled_x: Vec<f64>,
        uncontrolled_y: Vec<f64>,
        mut l: Vec<f64>,
        mut d: Vec<f64>,
        leader_tag: Option<Player>,
    ) -> Self {
        let n = path.n_steps;
        let first_nonpositive = |v: &[f64]| v.iter().position(|&c| c <= 0.0);
        let x: Vec<f64> = uncontrolled_x.iter().zip(&l).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = uncontrolled_y.iter().zip(&d).map(|(a, b)| a - b).collect();
        let gamma_x = first_nonpositive(&x);
        let gamma_y = first_nonpositive(&y);
        let stop = match (gamma_x, gamma_y) {
            (Some(a), Some(b)) => a.min(b),
            (a, b) => a.or(b).unwrap_or(n),
        };
        for k in stop + 1..=n {
            l[k] = l[stop];
            d[k] = d[stop];
        }
        let x = uncontrolled_x.iter().zip(&l).map(|(a, b)| a - b).collect();
        let y = uncontrolled_y.iter().zip(&d).map(|(a, b)| a - b).collect();
        Self {
            times: (0..=n).map(|k| path.time(k)).collect(),
            x,
            y,
            l,
            d,
            gamma_x,
            gamma_y,
            leader_tag,
        }
    }
}

/// Running-maximum reflection below `barrier`, starting from cash `x`.
pub fn reflect_leader(path: &SamplePath, params: &ModelParams, x: f64, barrier: f64) -> Vec<f64> {
    reflect_from(&path.uncontrolled(x, params.mu0, params.sigma), barrier, 0)
}

/// Reflection that starts at index `from`; zero before.
fn reflect_from(uncontrolled: &[f64], barrier: f64, from: usize) -> Vec<f64> {
    let mut out = vec![0.0; uncontrolled.len()];
    let mut l: f64 = 0.0;
    for k in from..uncontrolled.len() {
        l = l.max(uncontrolled[k] - barrier);
        out[k] = l;
    }
    out
}

/// `D_k = max_{j <= k} (y - x + L_j - rule(X_j))^+` with `X = X0 - L`.
pub fn respond_follower<R: GapRule + ?Sized>(
    path: &SamplePath,
    params: &ModelParams,
    x: f64,
    y: f64,
    l: &[f64],
    rule: &R,
) -> Vec<f64> {
    let xu = path.uncontrolled(x, params.mu0, params.sigma);
    respond_on(&xu, y - x, l, rule)
}

fn respond_on<R: GapRule + ?Sized>(xu: &[f64], gap0: f64, l: &[f64], rule: &R) -> Vec<f64> {
    let mut d: f64 = 0.0;
    xu.iter()
        .zip(l)
        .map(|(&x0, &lk)| {
            d = d.max(gap0 + lk - rule.level(x0 - lk));
            d
        })
        .collect()
}

/// Equilibrium pair of the asymmetric game from the path's endowments
/// (`y0 >= x0`): the leader reflects at `a0`, the follower tracks `b`.
pub fn build_controlled(path: &SamplePath, params: &ModelParams, boundary: &EquilibriumBoundary) -> ControlledTrajectory {
    build_with(path, params, boundary.a0, boundary)
}

/// Asymmetric game with an arbitrary leader barrier and follower rule.
pub fn build_with<R: GapRule + ?Sized>(
    path: &SamplePath,
    params: &ModelParams,
    barrier: f64,
    rule: &R,
) -> ControlledTrajectory {
    let xu = path.uncontrolled(path.x0, params.mu0, params.sigma);
    let yu = path.uncontrolled(path.y0, params.mu0, params.sigma);
    let l = reflect_from(&xu, barrier, 0);
    let d = respond_on(&xu, path.y0 - path.x0, &l, rule);
    ControlledTrajectory::assemble(path, xu, yu, l, d, Some(Player::One))
}

/// Order of the two randomised times; ties on the grid go to the smaller draw.
pub(crate) fn first_mover(
    g1: Option<usize>,
    g2: Option<usize>,
    u1: f64,
    u2: f64,
) -> Option<(usize, Option<Player>)> {
    let key = |g: Option<usize>| g.unwrap_or(usize::MAX);
    let (k1, k2) = (key(g1), key(g2));
    let first = k1.min(k2);
    if first == usize::MAX {
        return None;
    }
    let who = if k1 < k2 || (k1 == k2 && u1 < u2) {
        Some(Player::One)
    } else if k2 < k1 || u2 < u1 {
        Some(Player::Two)
    } else {
        None
    };
    Some((first, who))
}

/// Controls of the symmetric randomised equilibrium from `x0 = y0 = x`.
///
/// `leader_tag` is `None` when nobody moves before default or when both
/// draws coincide, in which case both firms reflect.
pub fn symmetric_controls(path: &SamplePath, x: f64, u1: f64, u2: f64, eq: &EquilibriumSolution) -> ControlledTrajectory {
    let p = &eq.params;
    let xu = path.uncontrolled(x, p.mu0, p.sigma);
    let gamma0 = xu.iter().position(|&c| c <= 0.0).unwrap_or(usize::MAX);
    let track = cumulative_hazard(path, x, p.mu0, p.sigma, |c| eq.intensity(c));
    let g1 = randomized_time(&track, u1);
    let g2 = randomized_time(&track, u2);
    let n = path.n_steps;
    let zeros = vec![0.0; n + 1];
    let (l, d, tag) = match first_mover(g1, g2, u1, u2) {
        Some((g, who)) if g < gamma0 => {
            let lead = reflect_from(&xu, eq.a0(), g);
            match who {
                None => (lead.clone(), lead, None),
                Some(w) => {
                    let follow = respond_on(&xu, 0.0, &lead, &eq.boundary);
                    match w {
                        Player::One => (lead, follow, Some(Player::One)),
                        Player::Two => (follow, lead, Some(Player::Two)),
                    }
                }
            }
        }
        _ => (zeros.clone(), zeros, None),
    };
    ControlledTrajectory::assemble(path, xu.clone(), xu, l, d, tag)
}
