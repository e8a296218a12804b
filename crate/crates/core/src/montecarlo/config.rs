use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// How defaults and running maxima are detected between grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monitoring {
    /// Grid values only.
    Grid,
    /// Brownian-bridge maxima and barrier-crossing probabilities within each
    /// grid step.
    Bridge,
}

/// Simulation settings shared by every estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt: f64,
    pub horizon: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub x0: f64,
    pub y0: f64,
    pub params: ModelParams,
    /// Normal draws per grid step. A run with `(dt, 2m)` sees the same
    /// Brownian path as `(dt / 2, m)` at the coarse grid points.
    pub refine: usize,
    pub monitoring: Monitoring,
}

impl SimConfig {
    pub fn new(params: ModelParams, x0: f64, y0: f64) -> Self {
        Self {
            dt: 1e-3,
            horizon: 30.0,
            n_paths: 100_000,
            seed: 0,
            x0,
            y0,
            params,
            refine: 1,
            monitoring: Monitoring::Bridge,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let bad = |name, value, constraint| Err(Error::InvalidParameter { name, value, constraint });
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad("dt", self.dt, "time step must be positive");
        }
        if !(self.horizon >= 10.0 * self.dt) || !self.horizon.is_finite() {
            return bad("horizon", self.horizon, "horizon must cover at least 10 steps");
        }
        if self.n_paths == 0 {
            return bad("n_paths", 0.0, "at least one path");
        }
        if self.refine == 0 {
            return bad("refine", 0.0, "at least one draw per step");
        }
        if !(self.x0 >= 0.0) || !self.x0.is_finite() {
            return bad("x0", self.x0, "initial cash must be non-negative");
        }
        if !(self.y0 >= 0.0) || !self.y0.is_finite() {
            return bad("y0", self.y0, "initial cash must be non-negative");
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    /// Bound on the discounted payoff lost by stopping at the horizon.
    pub fn truncation_budget(&self, a_hat: f64) -> f64 {
        let p = &self.params;
        (-p.r * self.horizon).exp() * (self.y0 + self.x0 + 2.0 * (p.mu_hat / p.r + a_hat))
    }

    /// The same Brownian paths on this grid and on the grid with half the step.
    pub fn refinement_pair(&self) -> (SimConfig, SimConfig) {
        let coarse = SimConfig {
            refine: 2 * self.refine,
            ..*self
        };
        let fine = SimConfig {
            dt: 0.5 * self.dt,
            ..*self
        };
        (coarse, fine)
    }
}
