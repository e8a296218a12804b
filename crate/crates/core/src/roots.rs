//! Bracketing root finder used by every inversion in the crate.

use crate::error::{Error, Result};

/// Default argument tolerance for all inversions.
pub const ARG_TOL: f64 = 1e-12;

/// Bisection for a root of `f` in `[lo, hi]`, stopping once the bracket is
/// narrower than `tol`.
///
/// An exact zero at either end is returned as is; otherwise the end values must
/// differ in sign.
pub fn bisect<F>(what: &'static str, mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = f(hi);
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { what, lo, hi });
    }
    // 200 halvings exhaust any f64 interval.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves `f(x) = target` for a continuous non-decreasing `f` on `[lo, hi]`.
///
/// Targets outside `[f(lo), f(hi)]` saturate at the nearer end, which absorbs
/// the last-ulp disagreements that arise when the target is itself an end value.
pub fn invert_increasing<F>(mut f: F, target: f64, lo: f64, hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    if target <= f(lo) {
        return lo;
    }
    if target >= f(hi) {
        return hi;
    }
    // The bracket is valid by the two checks above.
    bisect("monotone inverse", |x| f(x) - target, lo, hi, tol).unwrap_or(0.5 * (lo + hi))
}
