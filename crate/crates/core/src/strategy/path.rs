use crate::error::{Error, Result};

/// One Brownian path sampled on a uniform grid, with both initial endowments.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub dt: f64,
    pub n_steps: usize,
    /// `B` at `t_k = k dt`, starting from 0.
    pub brownian: Vec<f64>,
    pub x0: f64,
    pub y0: f64,
}

impl SamplePath {
    pub fn new(dt: f64, brownian: Vec<f64>, x0: f64, y0: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
                constraint: "time step must be positive",
            });
        }
        match brownian.first() {
            Some(&b) if b == 0.0 && brownian.len() >= 2 => {}
            _ => {
                return Err(Error::InvalidParameter {
                    name: "brownian",
                    value: brownian.first().copied().unwrap_or(f64::NAN),
                    constraint: "at least two samples starting at 0",
                })
            }
        }
        Ok(Self {
            dt,
            n_steps: brownian.len() - 1,
            brownian,
            x0,
            y0,
        })
    }

    /// `B = 0` throughout.
    pub fn zero_noise(dt: f64, n_steps: usize, x0: f64, y0: f64) -> Self {
        Self {
            dt,
            n_steps,
            brownian: vec![0.0; n_steps + 1],
            x0,
            y0,
        }
    }

    pub fn time(&self, k: usize) -> f64 {
        self.dt * k as f64
    }

    /// Uncontrolled cash `x + mu0 t_k + sigma B_k`.
    pub fn uncontrolled(&self, x: f64, mu0: f64, sigma: f64) -> Vec<f64> {
        self.brownian
            .iter()
            .enumerate()
            .map(|(k, &b)| x + mu0 * self.time(k) + sigma * b)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SamplePath::new(0.0, vec![0.0, 1.0], 0.1, 0.2).is_err());
        assert!(SamplePath::new(0.1, vec![0.5, 1.0], 0.1, 0.2).is_err());
        assert!(SamplePath::new(0.1, vec![0.0], 0.1, 0.2).is_err());
        let p = SamplePath::new(0.1, vec![0.0, 1.0, -1.0], 0.1, 0.2).unwrap();
        assert_eq!(p.n_steps, 2);
        let x = p.uncontrolled(0.3, 0.8, 0.4);
        assert!((x[2] - (0.3 + 0.16 - 0.4)).abs() < 1e-15);
    }
}
