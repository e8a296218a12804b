//! Closed-form solution of the single-firm dividend problem with constant drift.
//!
//! For drift `mu` the value of paying dividends optimally from a cash reserve
//! `x` is `w(x) = C (e^{beta1 x} - e^{beta2 x})` below the barrier `a_star` and
//! grows linearly above it.

use serde::Serialize;

use crate::error::{Error, Result};

/// Overshoot below zero that is silently clamped.
pub const NEGATIVE_CLAMP: f64 = 1e-12;

/// Roots `beta2 < 0 < beta1` of `(sigma^2/2) b^2 + mu b - r = 0`.
///
/// The larger-magnitude root comes first from the sign-aware form and the
/// other from the product `-2r/sigma^2`.
pub fn characteristic_roots(mu: f64, sigma: f64, r: f64) -> Result<(f64, f64)> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
            constraint: "volatility must be positive",
        });
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            constraint: "discount rate must be positive",
        });
    }
    if !mu.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
            constraint: "must be finite",
        });
    }
    let a = 0.5 * sigma * sigma;
    let disc = (mu * mu + 4.0 * a * r).sqrt();
    let q = -0.5 * (mu + mu.signum() * disc);
    // For mu == 0 signum() is 1, so q is never zero.
    let (p, s) = (q / a, -r / q);
    Ok(if p > s { (p, s) } else { (s, p) })
}

/// Optimal barrier `2/(beta1 - beta2) * ln(-beta2/beta1)`.
pub fn optimal_barrier(beta1: f64, beta2: f64) -> f64 {
    2.0 / (beta1 - beta2) * (-beta2 / beta1).ln()
}

/// The solved single-agent problem for one drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DividendSolution {
    pub mu: f64,
    pub sigma: f64,
    pub r: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub a_star: f64,
    pub c_coeff: f64,
    // e^{beta_i a_star}
    #[serde(skip)]
    e1: f64,
    #[serde(skip)]
    e2: f64,
}

impl DividendSolution {
    pub fn new(mu: f64, sigma: f64, r: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: mu,
                constraint: "drift must be positive for an interior barrier",
            });
        }
        let (beta1, beta2) = characteristic_roots(mu, sigma, r)?;
        let a_star = optimal_barrier(beta1, beta2);
        let e1 = (beta1 * a_star).exp();
        let e2 = (beta2 * a_star).exp();
        let c_coeff = 1.0 / (beta1 * e1 - beta2 * e2);
        Ok(Self {
            mu,
            sigma,
            r,
            beta1,
            beta2,
            a_star,
            c_coeff,
            e1,
            e2,
        })
    }

    fn checked(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < -NEGATIVE_CLAMP {
            return Err(Error::Domain {
                what: "dividend value",
                value: x,
                domain: "[0, inf)".into(),
            });
        }
        Ok(x.max(0.0))
    }

    /// `(w, w', w'')` at `x`.
    pub fn value_w(&self, x: f64) -> Result<(f64, f64, f64)> {
        let x = self.checked(x)?;
        Ok((self.w(x), self.slope(x), self.curvature(x)))
    }

    /// `(sigma^2/2) w'' + mu w' - r w`, which is `-r (x - a_star)^+`.
    pub fn generator_residual(&self, x: f64) -> Result<f64> {
        let (w, w1, w2) = self.value_w(x)?;
        Ok(0.5 * self.sigma * self.sigma * w2 + self.mu * w1 - self.r * w)
    }

    /// Value `w(x)`; negative arguments are treated as 0.
    pub fn w(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        if x <= self.a_star {
            self.c_coeff * ((self.beta1 * x).exp() - (self.beta2 * x).exp())
        } else {
            x - self.a_star + self.mu / self.r
        }
    }

    pub fn slope(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        if x < self.a_star {
            1.0 + self.excess(self.a_star - x)
        } else {
            1.0
        }
    }

    pub fn curvature(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        if x < self.a_star {
            self.curvature_below(self.a_star - x)
        } else {
            0.0
        }
    }

    /// `w'''` from the left, including at the barrier; zero above it.
    pub fn third(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        if x <= self.a_star {
            let (b1, b2) = (self.beta1, self.beta2);
            self.c_coeff * (b1 * b1 * b1 * (b1 * x).exp() - b2 * b2 * b2 * (b2 * x).exp())
        } else {
            0.0
        }
    }

    /// `w'(a_star - d) - 1` for `d >= 0`, free of cancellation near the barrier.
    pub fn excess(&self, d: f64) -> f64 {
        let (b1, b2) = (self.beta1, self.beta2);
        self.c_coeff * (b1 * self.e1 * (-b1 * d).exp_m1() - b2 * self.e2 * (-b2 * d).exp_m1())
    }

    /// `w''(a_star - d)`, using `beta1^2 e1 = beta2^2 e2` to drop the constant term.
    pub fn curvature_below(&self, d: f64) -> f64 {
        let (b1, b2) = (self.beta1, self.beta2);
        self.c_coeff
            * (b1 * b1 * self.e1 * (-b1 * d).exp_m1() - b2 * b2 * self.e2 * (-b2 * d).exp_m1())
    }

    /// Payoff of reflecting at an arbitrary barrier `a` from `x <= a`.
    pub fn barrier_value(&self, x: f64, a: f64) -> f64 {
        let (b1, b2) = (self.beta1, self.beta2);
        let x = x.max(0.0);
        if x > a {
            return x - a + self.barrier_value(a, a);
        }
        ((b1 * x).exp() - (b2 * x).exp()) / (b1 * (b1 * a).exp() - b2 * (b2 * a).exp())
    }
}
