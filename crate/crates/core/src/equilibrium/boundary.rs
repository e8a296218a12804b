//! The follower's free boundary `b`, its inverse `c` and the level `alpha`.
//!
//! Everything is phrased through `DividendSolution::excess`, i.e. through
//! distances below the two barriers, so the flat double roots at `x = 0`
//! (where `b = a_hat`) keep full relative precision.

use crate::dividend::DividendSolution;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::roots::invert_increasing;
use crate::table::HermiteTable;

/// Argument tolerance for the inversions behind `b` and `c`.
pub(crate) const INV_TOL: f64 = 1e-15;

/// Below this distance from the corner the slope ratio is replaced by its limit.
const CORNER: f64 = 1e-9;

/// `phi(l) - 1 = v0'(a0 - l) - 1`.
pub(crate) fn phi_excess(d0: &DividendSolution, ell: f64) -> f64 {
    d0.excess(ell)
}

/// `phi'(l) = -v0''(a0 - l)`.
pub(crate) fn phi_prime(d0: &DividendSolution, ell: f64) -> f64 {
    -d0.curvature_below(ell)
}

/// Root of `v_hat'(alpha) = v0'(0)`.
pub fn solve_alpha(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    let d0 = DividendSolution::new(params.mu0, params.sigma, params.r)?;
    let dh = DividendSolution::new(params.mu_hat, params.sigma, params.r)?;
    alpha_from(&d0, &dh)
}

pub(crate) fn alpha_from(d0: &DividendSolution, dh: &DividendSolution) -> Result<f64> {
    let target = phi_excess(d0, d0.a_star);
    let a_hat = dh.a_star;
    // v_hat'(0) >= v0'(0) is what makes the bracket valid.
    if dh.excess(a_hat) < target {
        return Err(Error::Invariant(format!(
            "v_hat'(0) - 1 = {} below v0'(0) - 1 = {target}",
            dh.excess(a_hat)
        )));
    }
    let d = invert_increasing(|d| dh.excess(d), target, 0.0, a_hat, INV_TOL);
    let alpha = a_hat - d;
    if !(alpha > 0.0 && alpha < a_hat) {
        return Err(Error::Invariant(format!("alpha = {alpha} outside (0, {a_hat})")));
    }
    Ok(alpha)
}

/// `b(x)` on `[0, a0]` by inversion; `alpha` beyond.
pub(crate) fn b_exact(d0: &DividendSolution, dh: &DividendSolution, alpha: f64, x: f64) -> f64 {
    if x >= d0.a_star {
        return alpha;
    }
    let target = phi_excess(d0, x.max(0.0));
    dh.a_star - invert_increasing(|d| dh.excess(d), target, 0.0, dh.a_star - alpha, INV_TOL)
}

/// `c(z)` on `[alpha, a_hat]`.
pub(crate) fn c_exact(d0: &DividendSolution, dh: &DividendSolution, z: f64) -> f64 {
    let target = dh.excess((dh.a_star - z).max(0.0));
    invert_increasing(|l| phi_excess(d0, l), target, 0.0, d0.a_star, INV_TOL)
}

/// `b'(x) = phi'(x) / v_hat''(b(x))`, with the corner limit `-1` at `x = 0`.
pub(crate) fn b_slope(d0: &DividendSolution, dh: &DividendSolution, x: f64, b: f64) -> f64 {
    if x < CORNER {
        return -1.0;
    }
    phi_prime(d0, x) / dh.curvature_below(dh.a_star - b)
}

/// Tabulated free boundary, for use inside simulation loops.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumBoundary {
    pub alpha: f64,
    pub a0: f64,
    pub a_hat: f64,
    pub x_grid: Vec<f64>,
    pub b_values: Vec<f64>,
    table: HermiteTable,
}

impl EquilibriumBoundary {
    pub(crate) fn build(
        d0: &DividendSolution,
        dh: &DividendSolution,
        alpha: f64,
        n_intervals: usize,
    ) -> Result<Self> {
        let a0 = d0.a_star;
        let x_grid: Vec<f64> = (0..=n_intervals)
            .map(|i| a0 * i as f64 / n_intervals as f64)
            .collect();
        let mut b_values: Vec<f64> = x_grid.iter().map(|&x| b_exact(d0, dh, alpha, x)).collect();
        b_values[0] = dh.a_star;
        b_values[n_intervals] = alpha;
        let slopes = x_grid
            .iter()
            .zip(&b_values)
            .map(|(&x, &b)| b_slope(d0, dh, x, b))
            .collect();
        for w in b_values.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::Invariant(format!(
                    "boundary not strictly decreasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let table = HermiteTable::new(0.0, a0, b_values.clone(), slopes);
        Ok(Self {
            alpha,
            a0,
            a_hat: dh.a_star,
            x_grid,
            b_values,
            table,
        })
    }

    /// Interpolated `b(x)`; `alpha` for `x >= a0` and `+inf` for `x < 0`,
    /// where the follower never pays from the boundary term.
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            f64::INFINITY
        } else if x >= self.a0 {
            self.alpha
        } else {
            self.table.eval(x)
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        if x < 0.0 || x >= self.a0 {
            0.0
        } else {
            self.table.deriv(x)
        }
    }
}
