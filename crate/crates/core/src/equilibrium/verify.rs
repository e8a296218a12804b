//! Finite-difference check of the follower's variational system.
//!
//! `u` is only piecewise smooth: the second x-derivative jumps across the free
//! boundary and the z-derivatives jump at `0`, `alpha` and `b(x)`. Derivatives
//! in x are therefore taken on the representation valid on the point's own
//! side of the boundary (the one-sided limit), and derivatives in z use
//! stencils confined to the smooth cell containing the point.

use serde::Serialize;

use super::boundary::b_exact;
use super::EquilibriumSolution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub name: &'static str,
    pub max_violation: f64,
    pub tolerance: f64,
    pub points: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VariationalReport {
    pub nx: usize,
    pub nz: usize,
    pub step: f64,
    pub conditions: Vec<ConditionReport>,
    pub pass: bool,
}

impl VariationalReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

pub const TOL_PDE: f64 = 1e-4;
pub const TOL_STOP: f64 = 1e-4;
pub const TOL_GRADIENT: f64 = 1e-5;
pub const TOL_PASTING: f64 = 1e-4;
pub const TOL_ORIGIN: f64 = 1e-6;
pub const TOL_DIAGONAL: f64 = 1e-8;
pub const TOL_REFLECTION: f64 = 1e-4;

struct Acc {
    name: &'static str,
    tol: f64,
    worst: f64,
    points: usize,
}

impl Acc {
    fn new(name: &'static str, tol: f64) -> Self {
        Self {
            name,
            tol,
            worst: 0.0,
            points: 0,
        }
    }

    fn push(&mut self, v: f64) {
        self.points += 1;
        // NaN must fail the check.
        if !(v <= self.worst) {
            self.worst = if v.is_nan() { f64::INFINITY } else { v };
        }
    }

    fn finish(self) -> ConditionReport {
        ConditionReport {
            name: self.name,
            max_violation: self.worst,
            tolerance: self.tol,
            points: self.points,
            pass: self.worst <= self.tol,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Continuation,
    Stopping,
}

/// `u` on one side of the boundary, continued analytically past it.
fn branch(eq: &EquilibriumSolution, side: Side, x: f64, z: f64) -> f64 {
    let (b1, b2) = (eq.d0.beta1, eq.d0.beta2);
    let a_zero = eq.coeffs.a_zero;
    match side {
        Side::Continuation if z <= 0.0 => a_zero * ((b1 * (x + z)).exp() - (b2 * (x + z)).exp()),
        Side::Continuation => {
            let (e1, e2) = ((b1 * x).exp(), (b2 * x).exp());
            let p = eq.coeffs.primitive(z);
            a_zero * (e1 - e2) + e1 * p + e2 * (eq.dh.w(z) - p)
        }
        Side::Stopping => {
            let b = b_exact(&eq.d0, &eq.dh, eq.alpha, x);
            eq.u_given_b(x, b, b) + (z - b)
        }
    }
}

/// First and second derivative at `t`; central unless `[lo, hi]` forbids it.
fn diff2<F: Fn(f64) -> f64>(f: F, t: f64, lo: f64, hi: f64, h: f64) -> (f64, f64) {
    if t - h >= lo && t + h <= hi {
        let (fm, f0, fp) = (f(t - h), f(t), f(t + h));
        return ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h));
    }
    let s = if hi - t >= t - lo { h } else { -h };
    let (f0, f1, f2, f3) = (f(t), f(t + s), f(t + 2.0 * s), f(t + 3.0 * s));
    (
        (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * s),
        (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (s * s),
    )
}

/// First derivative at `t` using only points of `[lo, hi]`.
fn diff1<F: Fn(f64) -> f64>(f: F, t: f64, lo: f64, hi: f64, h: f64) -> f64 {
    if t - h >= lo && t + h <= hi {
        return (f(t + h) - f(t - h)) / (2.0 * h);
    }
    let (room, dir) = if hi - t >= t - lo { (hi - t, 1.0) } else { (t - lo, -1.0) };
    let s = dir * h.min(0.5 * room).max(1e-9);
    (-3.0 * f(t) + 4.0 * f(t + s) - f(t + 2.0 * s)) / (2.0 * s)
}

/// Smooth cell in z containing `z` for fixed `x`.
fn z_cell(x: f64, z: f64, alpha: f64, b: f64) -> (f64, f64) {
    let mut kinks = vec![-x, 0.0, alpha, b, f64::INFINITY];
    kinks.sort_by(|a, b| a.total_cmp(b));
    kinks.dedup();
    let i = kinks.iter().rposition(|&k| k <= z).unwrap_or(0);
    (kinks[i], kinks[(i + 1).min(kinks.len() - 1)])
}

pub(crate) fn verify(eq: &EquilibriumSolution, nx: usize, nz: usize) -> Result<VariationalReport> {
    if nx < 50 || nz < 50 {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: nx.min(nz) as f64,
            constraint: "at least 50 points per axis",
        });
    }
    let (a0, a_hat, alpha) = (eq.a0(), eq.a_hat(), eq.alpha);
    let p = eq.params;
    let h = a0.min(a_hat) / 2000.0;
    let half_s2 = 0.5 * p.sigma * p.sigma;
    let (z_lo, z_hi) = (-a0, a_hat + 1.0);

    let mut pde = Acc::new("pde_continuation", TOL_PDE);
    let mut stop = Acc::new("pde_stopping", TOL_STOP);
    let mut grad = Acc::new("gradient", TOL_GRADIENT);
    let mut paste = Acc::new("smooth_pasting", TOL_PASTING);
    let mut origin = Acc::new("dirichlet_origin", TOL_ORIGIN);
    let mut diag = Acc::new("dirichlet_diagonal", TOL_DIAGONAL);
    let mut refl = Acc::new("reflection", TOL_REFLECTION);

    for i in 0..nx {
        let x = a0 * i as f64 / (nx - 1) as f64;
        let b = b_exact(&eq.d0, &eq.dh, alpha, x);
        let u_at_x = |z: f64| eq.u_given_b(x, z, b);
        for j in 0..nz {
            let z = z_lo + (z_hi - z_lo) * j as f64 / (nz - 1) as f64;
            if z < -x {
                continue;
            }
            let side = if z >= b { Side::Stopping } else { Side::Continuation };
            let u = u_at_x(z);
            let (x_lo, x_hi) = match side {
                Side::Continuation => (f64::NEG_INFINITY, f64::INFINITY),
                Side::Stopping => (0.0, a0),
            };
            let (ux, uxx) = diff2(|s| branch(eq, side, s, z), x, x_lo, x_hi, h);
            let residual = half_s2 * uxx + p.mu0 * ux - p.r * u;
            let (cz_lo, cz_hi) = z_cell(x, z, alpha, b);
            let uz = diff1(u_at_x, z, cz_lo, cz_hi, h);
            match side {
                Side::Continuation => {
                    pde.push(residual.abs());
                    grad.push((1.0 - uz).max(0.0));
                }
                Side::Stopping => {
                    stop.push((residual + p.r * (z - b)).abs());
                    grad.push((uz - 1.0).abs());
                }
            }
            if i == nx - 1 {
                refl.push((uz - ux).abs());
            }
            if i == 0 && z >= 0.0 {
                origin.push((u - eq.v_hat(z)).abs());
            }
        }

        if x > 0.0 {
            diag.push(u_at_x(-x).abs());
        }

        // Mixed derivative at the boundary, from the continuation side.
        let (seg_lo, seg_hi) = if b > alpha { (alpha, a_hat) } else { (0.0, alpha) };
        let q = |s: f64| diff1(|zz| branch(eq, Side::Continuation, s, zz), b, seg_lo, seg_hi, h);
        paste.push(((q(x + h) - q(x - h)) / (2.0 * h)).abs());
    }

    let conditions = vec![
        pde.finish(),
        stop.finish(),
        grad.finish(),
        paste.finish(),
        origin.finish(),
        diag.finish(),
        refl.finish(),
    ];
    let pass = conditions.iter().all(|c| c.pass);
    Ok(VariationalReport {
        nx,
        nz,
        step: h,
        conditions,
        pass,
    })
}
