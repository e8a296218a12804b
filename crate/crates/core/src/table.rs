//! Uniform piecewise-cubic Hermite tables with exact running integrals.

/// Samples of a function and its derivative on a uniform grid.
///
/// Between nodes the function is the Hermite cubic through the two end values
/// and slopes, so the table is C^1 and its running integral is C^2.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteTable {
    x0: f64,
    h: f64,
    f: Vec<f64>,
    d: Vec<f64>,
    cum: Vec<f64>,
}

impl HermiteTable {
    /// Panics unless `f` and `d` have the same length of at least 2.
    pub fn new(x0: f64, x1: f64, f: Vec<f64>, d: Vec<f64>) -> Self {
        assert!(f.len() >= 2 && f.len() == d.len(), "table needs matching samples");
        let h = (x1 - x0) / (f.len() - 1) as f64;
        let mut cum = Vec::with_capacity(f.len());
        cum.push(0.0);
        for i in 1..f.len() {
            let step = 0.5 * h * (f[i - 1] + f[i]) + h * h * (d[i - 1] - d[i]) / 12.0;
            cum.push(cum[i - 1] + step);
        }
        Self { x0, h, f, d, cum }
    }

    pub fn start(&self) -> f64 {
        self.x0
    }

    pub fn end(&self) -> f64 {
        self.x0 + self.h * (self.f.len() - 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.f.len()).map(move |i| self.x0 + self.h * i as f64)
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn slopes(&self) -> &[f64] {
        &self.d
    }

    /// Cell index and local coordinate in `[0, 1]`, clamped to the table.
    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.f.len() - 1;
        let s = ((x - self.x0) / self.h).clamp(0.0, n as f64);
        let i = (s.floor() as usize).min(n - 1);
        (i, s - i as f64)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.f[i]
            + (t3 - 2.0 * t2 + t) * self.h * self.d[i]
            + (3.0 * t2 - 2.0 * t3) * self.f[i + 1]
            + (t3 - t2) * self.h * self.d[i + 1]
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let t2 = t * t;
        (6.0 * t2 - 6.0 * t) * self.f[i] / self.h
            + (3.0 * t2 - 4.0 * t + 1.0) * self.d[i]
            + (6.0 * t - 6.0 * t2) * self.f[i + 1] / self.h
            + (3.0 * t2 - 2.0 * t) * self.d[i + 1]
    }

    /// `int_{start}^{x}` of the interpolant.
    pub fn integral(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let (t2, t3, t4) = (t * t, t * t * t, t * t * t * t);
        let h = self.h;
        self.cum[i]
            + h * ((t - t3 + 0.5 * t4) * self.f[i]
                + (0.5 * t2 - 2.0 * t3 / 3.0 + 0.25 * t4) * h * self.d[i]
                + (t3 - 0.5 * t4) * self.f[i + 1]
                + (0.25 * t4 - t3 / 3.0) * h * self.d[i + 1])
    }

    pub fn total(&self) -> f64 {
        self.cum[self.cum.len() - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampled<F: Fn(f64) -> f64, G: Fn(f64) -> f64>(f: F, g: G, a: f64, b: f64, n: usize) -> HermiteTable {
        let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
        HermiteTable::new(a, b, xs.iter().map(|&x| f(x)).collect(), xs.iter().map(|&x| g(x)).collect())
    }

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |x: f64| 2.0 - x + 3.0 * x * x - 0.5 * x * x * x;
        let g = |x: f64| -1.0 + 6.0 * x - 1.5 * x * x;
        let prim = |x: f64| 2.0 * x - 0.5 * x * x + x * x * x - 0.125 * x.powi(4);
        let t = sampled(f, g, 0.0, 2.0, 7);
        for i in 0..=40 {
            let x = 2.0 * i as f64 / 40.0;
            assert!((t.eval(x) - f(x)).abs() < 1e-12);
            assert!((t.deriv(x) - g(x)).abs() < 1e-12);
            assert!((t.integral(x) - prim(x)).abs() < 1e-12);
        }
        assert!((t.total() - prim(2.0)).abs() < 1e-12);
    }

    #[test]
    fn fourth_order_on_exponential() {
        let t = sampled(f64::exp, f64::exp, 0.0, 1.0, 100);
        assert!((t.eval(0.123) - 0.123f64.exp()).abs() < 1e-9);
        assert!((t.total() - (1f64.exp() - 1.0)).abs() < 1e-10);
        assert_eq!(t.eval(-1.0), 1.0);
        assert!((t.end() - 1.0).abs() < 1e-15);
    }
}
