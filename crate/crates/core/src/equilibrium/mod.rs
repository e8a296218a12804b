//! The asymmetric equilibrium (free boundary, coefficients, follower value)
//! and the intensity of the symmetric randomised equilibrium.
//!
//! Coordinates are `(x, z)` with `x` the leader's cash and `z = y - x` the gap
//! to the follower. The follower pays dividends once `z >= b(x)`.

mod boundary;
mod coefficients;
mod verify;

pub use boundary::{solve_alpha, EquilibriumBoundary};
pub use coefficients::{a_zero, coeff_ode_solve, CoefficientTables};
pub use verify::{ConditionReport, VariationalReport};

use serde::Serialize;

use crate::dividend::DividendSolution;
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Grid resolutions used by [`EquilibriumSolution::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    /// Intervals of the tabulated boundary on `[0, a0]`.
    pub boundary: usize,
    /// RK4 steps on `[0, alpha]`.
    pub ode_steps: usize,
    /// Intervals of the coefficient table on `[alpha, a_hat]`.
    pub upper: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Self {
            boundary: 2000,
            ode_steps: 2000,
            upper: 2000,
        }
    }
}

/// Which piece of the state space a point `(x, z)` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    /// `-x <= z <= 0`: the follower is behind or level.
    HLe,
    /// `0 < z <= alpha`.
    H0Alpha,
    /// `alpha < z < b(x)`.
    HAlphaB,
    /// `z >= b(x)`: the follower pays dividends.
    Stop,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::HLe => "H_LE",
            Region::H0Alpha => "H_0_ALPHA",
            Region::HAlphaB => "H_ALPHA_B",
            Region::Stop => "STOP",
        }
    }
}

/// Summary constants, as printed by the command line `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct Summary {
    pub beta1: f64,
    pub beta2: f64,
    pub a0: f64,
    pub a_hat: f64,
    pub alpha: f64,
    pub C0: f64,
    pub C_hat: f64,
    pub A0: f64,
}

/// Everything needed to evaluate and simulate both equilibria.
#[derive(Debug, Clone)]
pub struct EquilibriumSolution {
    pub params: ModelParams,
    /// Duopoly problem, value `v0`.
    pub d0: DividendSolution,
    /// Monopoly problem, value `v_hat`.
    pub dh: DividendSolution,
    pub alpha: f64,
    pub boundary: EquilibriumBoundary,
    pub coeffs: CoefficientTables,
}

impl EquilibriumSolution {
    pub fn new(params: ModelParams) -> Result<Self> {
        Self::with_resolution(params, Resolution::default())
    }

    pub fn with_resolution(params: ModelParams, res: Resolution) -> Result<Self> {
        params.validate()?;
        let d0 = DividendSolution::new(params.mu0, params.sigma, params.r)?;
        let dh = DividendSolution::new(params.mu_hat, params.sigma, params.r)?;
        let alpha = boundary::alpha_from(&d0, &dh)?;
        let boundary = EquilibriumBoundary::build(&d0, &dh, alpha, res.boundary)?;
        let coeffs = CoefficientTables::build(&d0, &dh, alpha, res.ode_steps, res.upper)?;
        Ok(Self {
            params,
            d0,
            dh,
            alpha,
            boundary,
            coeffs,
        })
    }

    pub fn a0(&self) -> f64 {
        self.d0.a_star
    }

    pub fn a_hat(&self) -> f64 {
        self.dh.a_star
    }

    pub fn summary(&self) -> Summary {
        Summary {
            beta1: self.d0.beta1,
            beta2: self.d0.beta2,
            a0: self.a0(),
            a_hat: self.a_hat(),
            alpha: self.alpha,
            C0: self.d0.c_coeff,
            C_hat: self.dh.c_coeff,
            A0: self.coeffs.a_zero,
        }
    }

    pub fn v0(&self, x: f64) -> f64 {
        self.d0.w(x)
    }

    pub fn v_hat(&self, x: f64) -> f64 {
        self.dh.w(x)
    }

    /// `phi(l) = v0'(a0 - l)` on `[0, a0]`.
    pub fn phi(&self, ell: f64) -> Result<f64> {
        if !(0.0..=self.a0()).contains(&ell) {
            return Err(Error::domain("phi", ell, 0.0, self.a0()));
        }
        Ok(1.0 + boundary::phi_excess(&self.d0, ell))
    }

    pub fn phi_prime(&self, ell: f64) -> Result<f64> {
        if !(0.0..=self.a0()).contains(&ell) {
            return Err(Error::domain("phi'", ell, 0.0, self.a0()));
        }
        Ok(boundary::phi_prime(&self.d0, ell))
    }

    /// `b(x)` by inversion; `alpha` for `x > a0`.
    pub fn boundary_b(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain("boundary b", x, 0.0, f64::INFINITY));
        }
        Ok(boundary::b_exact(&self.d0, &self.dh, self.alpha, x))
    }

    /// `b'(x)` on `[0, a0)`, zero beyond.
    pub fn boundary_slope(&self, x: f64) -> Result<f64> {
        let b = self.boundary_b(x)?;
        if x >= self.a0() {
            return Ok(0.0);
        }
        Ok(boundary::b_slope(&self.d0, &self.dh, x, b))
    }

    /// `c(z) = phi^{-1}(v_hat'(z))` on `[alpha, a_hat]`.
    pub fn boundary_inverse_c(&self, z: f64) -> Result<f64> {
        if !(self.alpha..=self.a_hat()).contains(&z) {
            return Err(Error::domain("boundary inverse c", z, self.alpha, self.a_hat()));
        }
        Ok(boundary::c_exact(&self.d0, &self.dh, z))
    }

    /// `(A'(z), B'(z))` on `[alpha, a_hat]` from the closed form.
    pub fn coeff_upper(&self, z: f64) -> Result<(f64, f64)> {
        let c = self.boundary_inverse_c(z)?;
        Ok(coefficients::coeff_upper_at(&self.d0, &self.dh, z, c))
    }

    pub fn region(&self, x: f64, z: f64) -> Result<Region> {
        self.check_h(x, z)?;
        let b = self.boundary_b(x)?;
        Ok(if z >= b {
            Region::Stop
        } else if z <= 0.0 {
            Region::HLe
        } else if z <= self.alpha {
            Region::H0Alpha
        } else {
            Region::HAlphaB
        })
    }

    fn check_h(&self, x: f64, z: f64) -> Result<()> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain("leader cash", x, 0.0, f64::INFINITY));
        }
        if z.is_nan() || z < -x - crate::dividend::NEGATIVE_CLAMP {
            return Err(Error::domain("gap", z, -x, f64::INFINITY));
        }
        Ok(())
    }

    /// Follower value `u2(x, z)` in gap coordinates.
    ///
    /// Above `a0` the leader pays the excess at once, so the state moves to
    /// `(a0, z + x - a0)`.
    pub fn u2_eval(&self, x: f64, z: f64) -> Result<f64> {
        self.check_h(x, z)?;
        let (x, z) = if x > self.a0() {
            (self.a0(), z + x - self.a0())
        } else {
            (x, z)
        };
        let b = boundary::b_exact(&self.d0, &self.dh, self.alpha, x);
        Ok(self.u_given_b(x, z, b))
    }

    /// `u2` for `x` in `[0, a0]` with the boundary height supplied.
    pub(crate) fn u_given_b(&self, x: f64, z: f64, b: f64) -> f64 {
        let (b1, b2) = (self.d0.beta1, self.d0.beta2);
        let a_zero = self.coeffs.a_zero;
        if z <= 0.0 {
            let s = (x + z).max(0.0);
            return a_zero * ((b1 * s).exp() - (b2 * s).exp());
        }
        let (e1, e2) = ((b1 * x).exp(), (b2 * x).exp());
        let zc = z.min(b);
        let prim = self.coeffs.primitive(zc);
        a_zero * (e1 - e2) + e1 * prim + e2 * (self.dh.w(zc) - prim) + (z - zc)
    }

    /// Follower value `v2(x, y)` in cash coordinates.
    pub fn v2_eval(&self, x: f64, y: f64) -> Result<f64> {
        if y.is_nan() || y < -crate::dividend::NEGATIVE_CLAMP {
            return Err(Error::domain("follower cash", y, 0.0, f64::INFINITY));
        }
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain("leader cash", x, 0.0, f64::INFINITY));
        }
        let xa = x.min(self.a0());
        self.u2_eval(xa, y - xa)
    }

    /// `v2(a0, y)`, the follower's value right after the leader starts paying.
    pub(crate) fn v2_at_a0(&self, y: f64) -> f64 {
        let a0 = self.a0();
        self.u_given_b(a0, y.max(0.0) - a0, self.alpha)
    }

    /// Randomisation intensity `l*(x)` of the symmetric equilibrium.
    pub fn ell_star(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::domain("intensity", x, 0.0, f64::INFINITY));
        }
        if x <= self.a0() {
            return Ok(0.0);
        }
        let num = (self.params.r * self.v0(x) - self.params.mu0).max(0.0);
        let den = self.v2_at_a0(x) - self.v0(x);
        if !(den > 0.0) {
            return Err(Error::Invariant(format!(
                "v2(a0, {x}) - v0({x}) = {den} is not positive"
            )));
        }
        Ok(num / den)
    }

    /// `l*(x)` without argument checks; zero for `x <= a0` and for non-finite input.
    pub fn intensity(&self, x: f64) -> f64 {
        if !(x > self.a0()) || !x.is_finite() {
            return 0.0;
        }
        let num = self.params.r * (x - self.a0());
        num / (self.v2_at_a0(x) - self.v0(x))
    }

    /// Finite-difference check of the variational system on an `nx` by `nz` grid.
    pub fn verify_variational(&self, nx: usize, nz: usize) -> Result<VariationalReport> {
        verify::verify(self, nx, nz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq() -> EquilibriumSolution {
        EquilibriumSolution::new(ModelParams::reference()).unwrap()
    }

    #[test]
    fn reference_constants() {
        let e = eq();
        assert!((e.a0() - 0.419).abs() < 1e-3);
        assert!((e.a_hat() - 0.339).abs() < 1e-3);
        assert!((e.alpha - 0.079).abs() < 1e-3);
        assert!(e.summary().A0 > e.summary().C0);
    }

    #[test]
    fn phi_identities() {
        let e = eq();
        assert!((e.phi(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((e.phi(e.a0()).unwrap() - e.d0.slope(0.0)).abs() < 1e-12);
        let mut prev = e.phi(0.0).unwrap();
        for i in 1..=100 {
            let l = e.a0() * i as f64 / 100.0;
            let v = e.phi(l).unwrap();
            assert!(v > prev);
            assert!(((v - e.d0.slope(e.a0() - l)) / v).abs() < 1e-10);
            prev = v;
        }
        assert!(e.phi(-0.1).is_err());
        assert!(e.phi(e.a0() + 0.1).is_err());
    }

    #[test]
    fn phi_second_derivative_at_origin() {
        // phi''(0) = v0'''(a0) = -beta1 beta2.
        let e = eq();
        let h = 1e-5;
        let fd = (e.phi_prime(h).unwrap() - e.phi_prime(0.0).unwrap()) / h;
        assert!((fd + e.d0.beta1 * e.d0.beta2).abs() < 1e-3);
    }

    #[test]
    fn boundary_api() {
        let e = eq();
        assert!((e.boundary_b(0.0).unwrap() - e.a_hat()).abs() < 1e-10);
        assert!((e.boundary_b(e.a0()).unwrap() - e.alpha).abs() < 1e-10);
        assert_eq!(e.boundary_b(2.0 * e.a0()).unwrap(), e.alpha);
        assert!(e.boundary_b(-0.01).is_err());
        assert!(e.boundary_inverse_c(e.a_hat()).unwrap().abs() < 1e-10);
        assert!((e.boundary_inverse_c(e.alpha).unwrap() - e.a0()).abs() < 1e-10);
        assert!(e.boundary_inverse_c(e.alpha - 0.01).is_err());
        assert!((e.boundary_slope(0.0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn surface_dirichlet_rows() {
        let e = eq();
        for i in 1..=100 {
            let x = e.a0() * i as f64 / 100.0;
            assert!(e.u2_eval(x, -x).unwrap().abs() < 1e-8);
        }
        for i in 0..=100 {
            let z = 1.5 * i as f64 / 100.0;
            assert!((e.u2_eval(0.0, z).unwrap() - e.v_hat(z)).abs() < 1e-6);
        }
        assert!(e.u2_eval(0.1, -0.2).is_err());
    }

    #[test]
    fn linear_in_stopping_region() {
        let e = eq();
        for x in [0.0, 0.1, 0.3, e.a0()] {
            let b = e.boundary_b(x).unwrap();
            let u = e.u2_eval(x, b + 0.2).unwrap();
            let v = e.u2_eval(x, b + 0.7).unwrap();
            assert!((v - u - 0.5).abs() < 1e-12);
            assert_eq!(e.region(x, b).unwrap(), Region::Stop);
        }
        assert_eq!(e.region(0.1, -0.05).unwrap(), Region::HLe);
        assert_eq!(e.region(0.1, 0.05).unwrap(), Region::H0Alpha);
        assert_eq!(e.region(0.1, 0.2).unwrap(), Region::HAlphaB);
    }

    #[test]
    fn gap_continuity_at_alpha() {
        // Q2(x, alpha) = Q1(x, alpha): the z-slope has no jump at alpha.
        let e = eq();
        let h = 1e-5;
        for i in 0..20 {
            let x = e.a0() * i as f64 / 20.0;
            let u = |z: f64| e.u2_eval(x, z).unwrap();
            let a = e.alpha;
            let l = (3.0 * u(a) - 4.0 * u(a - h) + u(a - 2.0 * h)) / (2.0 * h);
            let r = (-3.0 * u(a) + 4.0 * u(a + h) - u(a + 2.0 * h)) / (2.0 * h);
            assert!((l - r).abs() < 1e-5, "x = {x}: {l} vs {r}");
        }
    }

    #[test]
    fn follower_value_dominates_classical() {
        let e = eq();
        for i in 0..=200 {
            let y = e.a0() + 2.0 * i as f64 / 200.0;
            assert!(e.v2_eval(e.a0(), y).unwrap() > e.v0(y));
        }
        for i in 0..=100 {
            let x = 2.0 * i as f64 / 100.0;
            assert!(e.v_hat(x) >= e.v0(x));
        }
    }

    #[test]
    fn cash_coordinates() {
        let e = eq();
        assert_eq!(e.v2_eval(0.0, 0.0).unwrap(), 0.0);
        let x = 2.0 * e.a0();
        let direct = e.u2_eval(e.a0(), 0.9 - e.a0()).unwrap();
        assert_eq!(e.v2_eval(x, 0.9).unwrap(), direct);
        assert!(e.v2_eval(0.1, -0.1).is_err());
        assert_eq!(e.v2_at_a0(0.9), direct);
    }

    #[test]
    fn intensity_support() {
        let e = eq();
        for i in 0..=50 {
            let x = e.a0() * i as f64 / 50.0;
            assert_eq!(e.ell_star(x).unwrap(), 0.0);
        }
        assert!(e.ell_star(e.a0() + 0.1).unwrap() > 0.0);
        let x = e.a0() + 0.37;
        assert!((e.intensity(x) - e.ell_star(x).unwrap()).abs() < 1e-14);
        assert_eq!(e.intensity(f64::NAN), 0.0);
    }
}
