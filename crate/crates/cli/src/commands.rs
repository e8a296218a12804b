use divgame_core::montecarlo::{
    deviation_scan, estimate_asymmetric, estimate_symmetric, indifference_check, Deviation, PayoffEstimate,
};
use divgame_core::{EquilibriumSolution, SimConfig, StoppingRule};
use serde::Serialize;

use crate::args::{Format, Game, Role};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{json, Cell, Table};

const SE_MULT: f64 = 3.0;

pub struct Outcome {
    pub bytes: Vec<u8>,
    pub pass: bool,
}

fn done(bytes: Vec<u8>, pass: bool) -> Result<Outcome, CliError> {
    Ok(Outcome { bytes, pass })
}

pub fn solve(cfg: &RunConfig, eq: &EquilibriumSolution) -> Result<Outcome, CliError> {
    let s = eq.summary();
    if cfg.format == Some(Format::Csv) {
        let mut t = Table::new(&["beta1", "beta2", "a0", "a_hat", "alpha", "C0", "C_hat", "A0"]);
        t.row(&[s.beta1, s.beta2, s.a0, s.a_hat, s.alpha, s.C0, s.C_hat, s.A0].map(Cell::Num));
        return done(t.into_bytes(), true);
    }
    done(json(&s), true)
}

#[derive(Serialize)]
struct BoundaryRow {
    x: f64,
    b: f64,
}

pub fn boundary(cfg: &RunConfig, eq: &EquilibriumSolution, points: usize, margin: f64) -> Result<Outcome, CliError> {
    if points < 2 {
        return Err(CliError::Input("boundary needs at least 2 points".into()));
    }
    if !(margin >= 0.0) || !margin.is_finite() {
        return Err(CliError::Input(format!("margin must be non-negative, got {margin}")));
    }
    let top = eq.a0() + margin;
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let x = top * i as f64 / (points - 1) as f64;
        rows.push(BoundaryRow { x, b: eq.boundary_b(x)? });
    }
    if cfg.format == Some(Format::Json) {
        return done(json(&rows), true);
    }
    let mut t = Table::new(&["x", "b"]);
    for r in &rows {
        t.row(&[Cell::Num(r.x), Cell::Num(r.b)]);
    }
    done(t.into_bytes(), true)
}

#[derive(Serialize)]
struct SurfaceRow {
    x: f64,
    z: f64,
    y: f64,
    u2: f64,
    region: &'static str,
}

pub fn surface(cfg: &RunConfig, eq: &EquilibriumSolution, nx: usize, nz: usize) -> Result<Outcome, CliError> {
    if nx < 2 || nz < 2 {
        return Err(CliError::Input("surface needs at least 2 points per axis".into()));
    }
    let (a0, a_hat) = (eq.a0(), eq.a_hat());
    let mut rows = Vec::new();
    for i in 0..nx {
        let x = a0 * i as f64 / (nx - 1) as f64;
        for j in 0..nz {
            let z = -a0 + (a_hat + 1.0 + a0) * j as f64 / (nz - 1) as f64;
            if z < -x {
                continue;
            }
            rows.push(SurfaceRow {
                x,
                z,
                y: x + z,
                u2: eq.u2_eval(x, z)?,
                region: eq.region(x, z)?.name(),
            });
        }
    }
    if cfg.format == Some(Format::Json) {
        return done(json(&rows), true);
    }
    let mut t = Table::new(&["x", "z", "y", "u2", "region"]);
    for r in &rows {
        t.row(&[Cell::Num(r.x), Cell::Num(r.z), Cell::Num(r.y), Cell::Num(r.u2), Cell::Text(r.region.into())]);
    }
    done(t.into_bytes(), true)
}

/// An estimate checked against its exact value, with the dt-halving shift as
/// bias budget.
#[derive(Serialize)]
struct Check {
    label: String,
    estimate: PayoffEstimate,
    refined_mean: f64,
    budget: f64,
    target: f64,
    error: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn new(label: impl Into<String>, est: PayoffEstimate, fine: &PayoffEstimate, target: f64) -> Self {
        let budget = (est.mean - fine.mean).abs() + est.truncation_budget;
        let tolerance = SE_MULT * est.std_err + budget;
        let error = est.mean - target;
        Self {
            label: label.into(),
            estimate: est,
            refined_mean: fine.mean,
            budget,
            target,
            error,
            tolerance,
            pass: error.abs() <= tolerance,
        }
    }
}

fn checks_csv(checks: &[Check]) -> Vec<u8> {
    let mut t = Table::new(&[
        "label", "mean", "std_err", "n", "refined_mean", "budget", "target", "error", "tolerance", "pass",
    ]);
    for c in checks {
        t.row(&[
            Cell::Text(c.label.clone()),
            Cell::Num(c.estimate.mean),
            Cell::Num(c.estimate.std_err),
            Cell::Int(c.estimate.n as u64),
            Cell::Num(c.refined_mean),
            Cell::Num(c.budget),
            Cell::Num(c.target),
            Cell::Num(c.error),
            Cell::Num(c.tolerance),
            Cell::Bool(c.pass),
        ]);
    }
    t.into_bytes()
}

#[derive(Serialize)]
struct Agreement {
    player: u8,
    mean_difference: f64,
    std_err: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SimulateReport {
    game: &'static str,
    config: SimConfig,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    follower_defaults_first: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    agreement: Vec<Agreement>,
    pass: bool,
}

pub fn simulate(cfg: &RunConfig, eq: &EquilibriumSolution, game: Option<Game>) -> Result<Outcome, CliError> {
    let x0 = cfg.require_x0("simulate")?;
    let y0 = cfg.y0.unwrap_or(x0);
    let game = game.unwrap_or(if x0 == y0 { Game::Symmetric } else { Game::Asymmetric });
    let report = match game {
        Game::Asymmetric => {
            if !(y0 > x0) {
                return Err(CliError::Input(format!(
                    "the asymmetric game needs y0 > x0 (got x0 = {x0}, y0 = {y0})"
                )));
            }
            let (coarse, fine) = cfg.sim(x0, y0)?.refinement_pair();
            let a = estimate_asymmetric(&coarse, eq)?;
            let b = estimate_asymmetric(&fine, eq)?;
            let checks = vec![
                Check::new("player1", a.leader, &b.leader, eq.v0(x0)),
                Check::new("player2", a.follower, &b.follower, eq.v2_eval(x0, y0)?),
            ];
            let first = a.follower_first;
            SimulateReport {
                game: "asymmetric",
                config: coarse,
                pass: checks.iter().all(|c| c.pass) && first == 0,
                checks,
                follower_defaults_first: Some(first),
                agreement: Vec::new(),
            }
        }
        Game::Symmetric => {
            if x0 != y0 {
                return Err(CliError::Input(format!(
                    "the symmetric game needs x0 = y0 (got x0 = {x0}, y0 = {y0})"
                )));
            }
            let (coarse, fine) = cfg.sim(x0, y0)?.refinement_pair();
            let a = estimate_symmetric(&coarse, eq)?;
            let b = estimate_symmetric(&fine, eq)?;
            let v = eq.v0(x0);
            let checks = vec![
                Check::new("player1", a.j1, &b.j1, v),
                Check::new("player2", a.j2, &b.j2, v),
            ];
            let agreement: Vec<Agreement> = [(1, a.diff1), (2, a.diff2)]
                .into_iter()
                .map(|(player, d)| Agreement {
                    player,
                    mean_difference: d.mean,
                    std_err: d.std_err,
                    pass: d.mean.abs() <= SE_MULT * d.std_err,
                })
                .collect();
            SimulateReport {
                game: "symmetric",
                config: coarse,
                pass: checks.iter().all(|c| c.pass) && agreement.iter().all(|a| a.pass),
                checks,
                follower_defaults_first: None,
                agreement,
            }
        }
    };
    let pass = report.pass;
    if cfg.format == Some(Format::Csv) {
        return done(checks_csv(&report.checks), pass);
    }
    done(json(&report), pass)
}

#[derive(Serialize)]
struct DeviationLine {
    value: f64,
    payoff: PayoffEstimate,
    gain: f64,
    gain_std_err: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct DeviationReport {
    role: &'static str,
    config: SimConfig,
    equilibrium: PayoffEstimate,
    budget: f64,
    rows: Vec<DeviationLine>,
    pass: bool,
}

pub fn deviate(cfg: &RunConfig, eq: &EquilibriumSolution, role: Role, values: &[f64]) -> Result<Outcome, CliError> {
    let x0 = cfg.require_x0("deviate")?;
    let y0 = cfg
        .y0
        .ok_or_else(|| CliError::Input("deviate needs --y0".into()))?;
    if !(y0 > x0) {
        return Err(CliError::Input(format!("deviate needs y0 > x0 (got x0 = {x0}, y0 = {y0})")));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(CliError::Input(format!("trial values must be positive, got {v}")));
    }
    let values: Vec<f64> = if values.is_empty() {
        match role {
            Role::Leader => [0.5, 0.75, 1.0, 1.25, 1.5].iter().map(|k| k * eq.a0()).collect(),
            Role::Follower => {
                let b = eq.boundary_b(x0)?;
                vec![eq.alpha / 2.0, eq.alpha, b, 2.0 * b]
            }
        }
    } else {
        values.to_vec()
    };
    let (coarse, fine) = cfg.sim(x0, y0)?.refinement_pair();
    let a = estimate_asymmetric(&coarse, eq)?;
    let b = estimate_asymmetric(&fine, eq)?;
    let (equilibrium, refined) = match role {
        Role::Leader => (a.leader, b.leader),
        Role::Follower => (a.follower, b.follower),
    };
    let budget = (equilibrium.mean - refined.mean).abs() + equilibrium.truncation_budget;
    let devs: Vec<Deviation> = values
        .iter()
        .map(|&v| match role {
            Role::Leader => Deviation::LeaderBarrier(v),
            Role::Follower => Deviation::FollowerGap(v),
        })
        .collect();
    let rows: Vec<DeviationLine> = deviation_scan(&coarse, eq, &devs)?
        .into_iter()
        .zip(&values)
        .map(|(row, &value)| {
            let tolerance = SE_MULT * row.gain.std_err + budget;
            DeviationLine {
                value,
                payoff: row.estimate,
                gain: row.gain.mean,
                gain_std_err: row.gain.std_err,
                tolerance,
                pass: row.gain.mean <= tolerance,
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    if cfg.format == Some(Format::Json) {
        let report = DeviationReport {
            role: match role {
                Role::Leader => "leader",
                Role::Follower => "follower",
            },
            config: coarse,
            equilibrium,
            budget,
            rows,
            pass,
        };
        return done(json(&report), pass);
    }
    let mut t = Table::new(&["value", "payoff", "std_err", "gain", "gain_std_err", "tolerance", "pass"]);
    for r in &rows {
        t.row(&[
            Cell::Num(r.value),
            Cell::Num(r.payoff.mean),
            Cell::Num(r.payoff.std_err),
            Cell::Num(r.gain),
            Cell::Num(r.gain_std_err),
            Cell::Num(r.tolerance),
            Cell::Bool(r.pass),
        ]);
    }
    done(t.into_bytes(), pass)
}

pub fn verify(cfg: &RunConfig, eq: &EquilibriumSolution, nx: usize, nz: usize) -> Result<Outcome, CliError> {
    let report = eq.verify_variational(nx, nz)?;
    if cfg.format == Some(Format::Csv) {
        let mut t = Table::new(&["condition", "max_violation", "tolerance", "points", "pass"]);
        for c in &report.conditions {
            t.row(&[
                Cell::Text(c.name.into()),
                Cell::Num(c.max_violation),
                Cell::Num(c.tolerance),
                Cell::Int(c.points as u64),
                Cell::Bool(c.pass),
            ]);
        }
        return done(t.into_bytes(), report.pass);
    }
    done(json(&report), report.pass)
}

fn rule_label(rule: StoppingRule) -> String {
    match rule {
        StoppingRule::Zero => "zero".into(),
        StoppingRule::Horizon => "horizon".into(),
        StoppingRule::FirstHitting(level) => format!("hit:{level}"),
    }
}

#[derive(Serialize)]
struct IndifferenceReport {
    config: SimConfig,
    checks: Vec<Check>,
    pass: bool,
}

pub fn indiff(cfg: &RunConfig, eq: &EquilibriumSolution, rules: &[StoppingRule]) -> Result<Outcome, CliError> {
    let x0 = cfg.require_x0("indiff")?;
    if let Some(y0) = cfg.y0 {
        if y0 != x0 {
            return Err(CliError::Input(format!("indiff needs x0 = y0 (got x0 = {x0}, y0 = {y0})")));
        }
    }
    let rules: Vec<StoppingRule> = if rules.is_empty() {
        vec![StoppingRule::Zero, StoppingRule::Horizon, StoppingRule::FirstHitting(eq.a0() + 0.2)]
    } else {
        rules.to_vec()
    };
    let (coarse, fine) = cfg.sim(x0, x0)?.refinement_pair();
    let target = eq.v0(x0);
    let mut checks = Vec::with_capacity(rules.len());
    for &rule in &rules {
        let a = indifference_check(&coarse, eq, rule)?;
        let b = indifference_check(&fine, eq, rule)?;
        checks.push(Check::new(rule_label(rule), a, &b, target));
    }
    let pass = checks.iter().all(|c| c.pass);
    if cfg.format == Some(Format::Csv) {
        return done(checks_csv(&checks), pass);
    }
    done(json(&IndifferenceReport { config: coarse, checks, pass }), pass)
}
