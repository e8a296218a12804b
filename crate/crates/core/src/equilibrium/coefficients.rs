//! Coefficients `A'`, `B' = v_hat' - A'` of the follower's value in the
//! continuation region, and the constant `A(0)`.
//!
//! Above `alpha` they follow from smooth pasting at `c(z)` in closed form.
//! Below `alpha` `A'` solves a linear first-order ODE integrated backwards by
//! classical RK4 from the closed-form value at `alpha`.

use serde::Serialize;

use super::boundary::{c_exact, phi_prime};
use crate::dividend::DividendSolution;
use crate::error::{Error, Result};
use crate::table::HermiteTable;

/// `g(c) = -beta2 e^{beta2 c} / (beta1 e^{beta1 c} - beta2 e^{beta2 c})` and `g'(c)`.
fn pasting_weight(d0: &DividendSolution, c: f64) -> (f64, f64) {
    let (b1, b2) = (d0.beta1, d0.beta2);
    let (e1, e2) = ((b1 * c).exp(), (b2 * c).exp());
    let num = -b2 * e2;
    let den = b1 * e1 - b2 * e2;
    let dnum = -b2 * b2 * e2;
    let dden = b1 * b1 * e1 - b2 * b2 * e2;
    (num / den, (dnum * den - num * dden) / (den * den))
}

/// `(A'(z), B'(z))` on `[alpha, a_hat]` given `c = c(z)`.
pub(crate) fn coeff_upper_at(d0: &DividendSolution, dh: &DividendSolution, z: f64, c: f64) -> (f64, f64) {
    let vp = dh.slope(z);
    let a = pasting_weight(d0, c).0 * vp;
    (a, vp - a)
}

/// `A''(z)` on `[alpha, a_hat]`, through `c'(z) = v_hat''(z) / phi'(c(z))`.
pub(crate) fn a_second_upper(d0: &DividendSolution, dh: &DividendSolution, z: f64, c: f64) -> f64 {
    let d = dh.a_star - z;
    let vpp = dh.curvature_below(d.max(0.0));
    let c_prime = if d < 1e-9 { -1.0 } else { vpp / phi_prime(d0, c) };
    let (g, dg) = pasting_weight(d0, c);
    dg * c_prime * dh.slope(z) + g * vpp
}

/// Right-hand side of `A'' = k A' + f(z)` on `[0, alpha]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LowerOde {
    pub k: f64,
    scale: f64,
    beta2: f64,
}

impl LowerOde {
    pub(crate) fn new(d0: &DividendSolution) -> Self {
        let (b1, b2, a0) = (d0.beta1, d0.beta2, d0.a_star);
        let (e1, e2) = ((b1 * a0).exp(), (b2 * a0).exp());
        Self {
            k: (b1 * e1 - b2 * e2) / (e1 - e2),
            scale: e2 / (e1 - e2),
            beta2: b2,
        }
    }

    pub(crate) fn forcing(&self, dh: &DividendSolution, z: f64) -> f64 {
        self.scale * (self.beta2 * dh.slope(z) - dh.curvature(z))
    }

    pub(crate) fn rhs(&self, dh: &DividendSolution, z: f64, a: f64) -> f64 {
        self.k * a + self.forcing(dh, z)
    }
}

/// Terminal value `A'(alpha) = -beta2 e^{-beta1 a0} / (beta1 - beta2)`.
pub(crate) fn a_prime_at_alpha(d0: &DividendSolution) -> f64 {
    -d0.beta2 * (-d0.beta1 * d0.a_star).exp() / (d0.beta1 - d0.beta2)
}

/// RK4 from `alpha` down to 0 with `n_steps` uniform steps.
///
/// Returns `A'` at `z_i = alpha * i / n_steps`, in increasing `z`.
pub fn coeff_ode_solve(
    d0: &DividendSolution,
    dh: &DividendSolution,
    alpha: f64,
    n_steps: usize,
) -> Result<Vec<f64>> {
    if n_steps < 100 {
        return Err(Error::InvalidParameter {
            name: "n_steps",
            value: n_steps as f64,
            constraint: "at least 100 integration steps",
        });
    }
    let ode = LowerOde::new(d0);
    let h = -alpha / n_steps as f64;
    let mut out = vec![0.0; n_steps + 1];
    let mut a = a_prime_at_alpha(d0);
    out[n_steps] = a;
    for i in (0..n_steps).rev() {
        let z = alpha * (i + 1) as f64 / n_steps as f64;
        let k1 = ode.rhs(dh, z, a);
        let k2 = ode.rhs(dh, z + 0.5 * h, a + 0.5 * h * k1);
        let k3 = ode.rhs(dh, z + 0.5 * h, a + 0.5 * h * k2);
        let k4 = ode.rhs(dh, z + h, a + h * k3);
        a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out[i] = a;
    }
    Ok(out)
}

/// Coefficient samples on `[0, a_hat]`, with `alpha` as a node.
///
/// The grid is uniform on each of `[0, alpha]` and `[alpha, a_hat]`.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientTables {
    pub z_grid: Vec<f64>,
    pub a_prime: Vec<f64>,
    pub b_prime: Vec<f64>,
    pub a_zero: f64,
    #[serde(skip)]
    lower: HermiteTable,
    #[serde(skip)]
    upper: HermiteTable,
}

impl CoefficientTables {
    pub(crate) fn build(
        d0: &DividendSolution,
        dh: &DividendSolution,
        alpha: f64,
        n_lower: usize,
        n_upper: usize,
    ) -> Result<Self> {
        let ode = LowerOde::new(d0);
        let lower_a = coeff_ode_solve(d0, dh, alpha, n_lower)?;
        let lower_z: Vec<f64> = (0..=n_lower).map(|i| alpha * i as f64 / n_lower as f64).collect();
        let lower_d: Vec<f64> = lower_z
            .iter()
            .zip(&lower_a)
            .map(|(&z, &a)| ode.rhs(dh, z, a))
            .collect();

        let a_hat = dh.a_star;
        let upper_z: Vec<f64> = (0..=n_upper)
            .map(|j| alpha + (a_hat - alpha) * j as f64 / n_upper as f64)
            .collect();
        let mut upper_a = Vec::with_capacity(n_upper + 1);
        let mut upper_d = Vec::with_capacity(n_upper + 1);
        for (j, &z) in upper_z.iter().enumerate() {
            let c = match j {
                0 => d0.a_star,
                _ if j == n_upper => 0.0,
                _ => c_exact(d0, dh, z),
            };
            upper_a.push(coeff_upper_at(d0, dh, z, c).0);
            upper_d.push(a_second_upper(d0, dh, z, c));
        }

        let mut z_grid = lower_z.clone();
        z_grid.extend_from_slice(&upper_z[1..]);
        let mut a_prime = lower_a.clone();
        a_prime.extend_from_slice(&upper_a[1..]);
        let b_prime = z_grid
            .iter()
            .zip(&a_prime)
            .map(|(&z, &a)| dh.slope(z) - a)
            .collect();

        let a_zero = a_zero(d0, dh, lower_a[0])?;
        Ok(Self {
            z_grid,
            a_prime,
            b_prime,
            a_zero,
            lower: HermiteTable::new(0.0, alpha, lower_a, lower_d),
            upper: HermiteTable::new(alpha, a_hat, upper_a, upper_d),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.lower.end()
    }

    /// `A'(z)` for `z` in `[0, a_hat]`.
    pub fn a_prime_at(&self, z: f64) -> f64 {
        if z <= self.alpha() {
            self.lower.eval(z)
        } else {
            self.upper.eval(z)
        }
    }

    /// One-sided `A''(z)`, taken from the segment containing `z`.
    pub fn a_second_at(&self, z: f64) -> f64 {
        if z < self.alpha() {
            self.lower.deriv(z)
        } else {
            self.upper.deriv(z)
        }
    }

    /// `A(z) - A(0) = int_0^z A'`.
    pub fn primitive(&self, z: f64) -> f64 {
        if z <= self.alpha() {
            self.lower.integral(z)
        } else {
            self.lower.total() + self.upper.integral(z)
        }
    }

    #[cfg(test)]
    pub(crate) fn lower_table(&self) -> &HermiteTable {
        &self.lower
    }
}

/// `A(0) = Q2(a0, 0+) / (beta1 e^{beta1 a0} - beta2 e^{beta2 a0}) = C0 Q2(a0, 0+)`.
pub fn a_zero(d0: &DividendSolution, dh: &DividendSolution, a_prime_0: f64) -> Result<f64> {
    let a0 = d0.a_star;
    let (e1, e2) = ((d0.beta1 * a0).exp(), (d0.beta2 * a0).exp());
    let q2 = a_prime_0 * e1 + (dh.slope(0.0) - a_prime_0) * e2;
    let value = q2 * d0.c_coeff;
    if !(value > d0.c_coeff) {
        return Err(Error::Invariant(format!(
            "A(0) = {value} not above C0 = {}",
            d0.c_coeff
        )));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::super::boundary::alpha_from;
    use super::*;
    use crate::params::ModelParams;

    fn setup() -> (DividendSolution, DividendSolution, f64) {
        let p = ModelParams::reference();
        let d0 = DividendSolution::new(p.mu0, p.sigma, p.r).unwrap();
        let dh = DividendSolution::new(p.mu_hat, p.sigma, p.r).unwrap();
        let alpha = alpha_from(&d0, &dh).unwrap();
        (d0, dh, alpha)
    }

    /// Variation of constants: the forcing is a sum of two exponentials.
    fn analytic_a_prime(d0: &DividendSolution, dh: &DividendSolution, alpha: f64, z: f64) -> f64 {
        let ode = LowerOde::new(d0);
        let (b2, a0) = (d0.beta2, d0.a_star);
        let (e1, e2) = ((d0.beta1 * a0).exp(), (b2 * a0).exp());
        let s = e2 / (e1 - e2);
        let (h1, h2, ch) = (dh.beta1, dh.beta2, dh.c_coeff);
        let f1 = s * ch * h1 * (b2 - h1);
        let f2 = s * ch * h2 * (h2 - b2);
        let part = |z: f64| f1 / (h1 - ode.k) * (h1 * z).exp() + f2 / (h2 - ode.k) * (h2 * z).exp();
        let kk = a_prime_at_alpha(d0) - part(alpha);
        kk * (ode.k * (z - alpha)).exp() + part(z)
    }

    #[test]
    fn terminal_value_matches_upper_formula() {
        let (d0, dh, alpha) = setup();
        let (a, b) = coeff_upper_at(&d0, &dh, alpha, d0.a_star);
        assert!((a - a_prime_at_alpha(&d0)).abs() < 1e-12);
        assert!((a + b - dh.slope(alpha)).abs() < 1e-14);
    }

    #[test]
    fn upper_pasting_and_signs() {
        let (d0, dh, alpha) = setup();
        for i in 0..=100 {
            let z = alpha + (dh.a_star - alpha) * i as f64 / 100.0;
            let c = c_exact(&d0, &dh, z);
            let (a, b) = coeff_upper_at(&d0, &dh, z, c);
            let paste = a * d0.beta1 * (d0.beta1 * c).exp() + b * d0.beta2 * (d0.beta2 * c).exp();
            assert!(paste.abs() < 1e-9, "z = {z}: {paste}");
            if i < 100 {
                assert!(a > 0.0 && b > 0.0);
            }
        }
        let (a, b) = coeff_upper_at(&d0, &dh, dh.a_star, 0.0);
        assert!((a + b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_second_derivative_matches_differences() {
        let (d0, dh, alpha) = setup();
        let h = 1e-6;
        for z in [alpha + 0.01, 0.2, dh.a_star - 0.01] {
            let ap = |z: f64| coeff_upper_at(&d0, &dh, z, c_exact(&d0, &dh, z)).0;
            let fd = (ap(z + h) - ap(z - h)) / (2.0 * h);
            let exact = a_second_upper(&d0, &dh, z, c_exact(&d0, &dh, z));
            assert!((fd - exact).abs() < 1e-5, "z = {z}: {fd} vs {exact}");
        }
    }

    #[test]
    fn rk4_matches_variation_of_constants() {
        let (d0, dh, alpha) = setup();
        let n = 2000;
        let a = coeff_ode_solve(&d0, &dh, alpha, n).unwrap();
        for (i, v) in a.iter().enumerate() {
            let z = alpha * i as f64 / n as f64;
            let exact = analytic_a_prime(&d0, &dh, alpha, z);
            assert!((v - exact).abs() < 1e-12 * exact.abs().max(1.0), "z = {z}");
        }
    }

    #[test]
    fn rk4_self_convergence() {
        let (d0, dh, alpha) = setup();
        let coarse = coeff_ode_solve(&d0, &dh, alpha, 2000).unwrap()[0];
        let fine = coeff_ode_solve(&d0, &dh, alpha, 4000).unwrap()[0];
        assert!(((coarse - fine) / fine).abs() < 1e-10);
        assert!(coeff_ode_solve(&d0, &dh, alpha, 99).is_err());
    }

    #[test]
    fn terminal_slope_is_positive() {
        let (d0, dh, alpha) = setup();
        let ode = LowerOde::new(&d0);
        let a = a_prime_at_alpha(&d0);
        let (e1, e2) = ((d0.beta1 * d0.a_star).exp(), (d0.beta2 * d0.a_star).exp());
        let closed = -dh.curvature(alpha) * e2 / (e1 - e2);
        assert!((ode.rhs(&dh, alpha, a) - closed).abs() < 1e-12);
        assert!(closed > 0.0);
    }

    #[test]
    fn table_invariants() {
        let (d0, dh, alpha) = setup();
        let t = CoefficientTables::build(&d0, &dh, alpha, 2000, 2000).unwrap();
        for ((&z, &a), &b) in t.z_grid.iter().zip(&t.a_prime).zip(&t.b_prime) {
            assert!((a + b - dh.slope(z)).abs() < 1e-8);
            if z >= alpha && z < dh.a_star {
                assert!(a > 0.0 && b > 0.0);
            }
        }
        let lower = t.lower_table().values();
        for w in lower.windows(2) {
            assert!(w[1] > w[0], "A'' <= 0 below alpha");
        }
        assert!(t.a_zero > d0.c_coeff);
    }

    #[test]
    fn a_zero_pastes_across_zero() {
        let (d0, dh, alpha) = setup();
        let t = CoefficientTables::build(&d0, &dh, alpha, 2000, 2000).unwrap();
        let a0 = d0.a_star;
        let (b1, b2) = (d0.beta1, d0.beta2);
        let below = t.a_zero * (b1 * (b1 * a0).exp() - b2 * (b2 * a0).exp());
        let q2 = t.a_prime[0] * (b1 * a0).exp() + t.b_prime[0] * (b2 * a0).exp();
        assert!((below - q2).abs() < 1e-9);
        assert!(q2 > 1.0);
    }

    #[test]
    fn primitive_matches_quadrature_of_exact_pieces() {
        let (d0, dh, alpha) = setup();
        let t = CoefficientTables::build(&d0, &dh, alpha, 2000, 2000).unwrap();
        // Lower piece against the analytic primitive by fine Simpson.
        let n = 20000;
        let h = alpha / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * analytic_a_prime(&d0, &dh, alpha, h * i as f64);
        }
        s *= h / 3.0;
        assert!((t.primitive(alpha) - s).abs() < 1e-11);
        let z = 0.25;
        let m = 2000;
        let hu = (z - alpha) / m as f64;
        let mut su = 0.0;
        for i in 0..=m {
            let w = if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let zz = alpha + hu * i as f64;
            su += w * coeff_upper_at(&d0, &dh, zz, c_exact(&d0, &dh, zz)).0;
        }
        su *= hu / 3.0;
        assert!((t.primitive(z) - t.primitive(alpha) - su).abs() < 1e-10);
    }
}
