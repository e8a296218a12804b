use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Market constants shared by every computation.
///
/// `mu0` is the cash drift while both firms are active, `mu_hat` the drift of
/// a surviving monopolist, `sigma` the common volatility and `r` the discount
/// rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mu0: f64,
    pub mu_hat: f64,
    pub sigma: f64,
    pub r: f64,
}

impl ModelParams {
    pub fn new(mu0: f64, mu_hat: f64, sigma: f64, r: f64) -> Result<Self> {
        let p = Self {
            mu0,
            mu_hat,
            sigma,
            r,
        };
        p.validate()?;
        Ok(p)
    }

    /// The parameter set used for the reference boundary plot:
    /// `mu_hat = 1.8`, `mu0 = 0.8`, `r = 0.8`, `sigma = 0.4`.
    pub fn reference() -> Self {
        Self {
            mu0: 0.8,
            mu_hat: 1.8,
            sigma: 0.4,
            r: 0.8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name, value: f64| {
            if value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value,
                    constraint: "must be finite",
                })
            }
        };
        finite("mu0", self.mu0)?;
        finite("mu_hat", self.mu_hat)?;
        finite("sigma", self.sigma)?;
        finite("r", self.r)?;
        if self.mu0 <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "mu0",
                value: self.mu0,
                constraint: "duopoly drift must be positive",
            });
        }
        if self.mu_hat <= self.mu0 {
            return Err(Error::InvalidParameter {
                name: "mu_hat",
                value: self.mu_hat,
                constraint: "monopoly drift must exceed the duopoly drift mu0",
            });
        }
        if self.sigma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: self.sigma,
                constraint: "volatility must be positive",
            });
        }
        if self.r <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "r",
                value: self.r,
                constraint: "discount rate must be positive",
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_each_violated_invariant() {
        assert!(ModelParams::new(0.8, 1.8, 0.4, 0.8).is_ok());
        let bad = [
            (0.0, 1.8, 0.4, 0.8, "mu0"),
            (0.8, 0.8, 0.4, 0.8, "mu_hat"),
            (0.8, 0.5, 0.4, 0.8, "mu_hat"),
            (0.8, 1.8, 0.0, 0.8, "sigma"),
            (0.8, 1.8, 0.4, -1.0, "r"),
            (f64::NAN, 1.8, 0.4, 0.8, "mu0"),
        ];
        for (mu0, mu_hat, sigma, r, field) in bad {
            match ModelParams::new(mu0, mu_hat, sigma, r) {
                Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, field),
                other => panic!("expected rejection of {field}, got {other:?}"),
            }
        }
    }
}
