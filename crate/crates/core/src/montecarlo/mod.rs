//! Monte Carlo estimation of equilibrium payoffs, deviations and the
//! indifference property of the symmetric game.

mod config;
mod engine;
mod estimate;
mod payoff;
mod rng;

pub use config::{Monitoring, SimConfig};
pub use engine::{simulate_duel, simulate_indifference, simulate_symmetric, DuelPath, StoppingRule, SymmetricPath};
pub use estimate::{
    deviation_scan, estimate_asymmetric, estimate_duel, estimate_symmetric, indifference_check, AsymmetricEstimate,
    Deviation, DeviationRow, PayoffEstimate, SymmetricEstimate,
};
pub use payoff::payoff_pair;
pub use rng::{gen_path, gen_paths, path_rng, randomisation_draws};
