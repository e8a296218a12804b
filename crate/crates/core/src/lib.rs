//! Equilibria of a two-firm stochastic dividend game with default.
//!
//! Both firms hold Brownian cash reserves and pay dividends; the first to hit
//! zero defaults and the survivor continues as a monopolist with a higher
//! drift. The crate builds the asymmetric equilibrium (moving free boundary
//! for the follower) and the symmetric randomised equilibrium, verifies them
//! against closed forms and finite differences, and simulates them.

pub mod dividend;
pub mod equilibrium;
pub mod error;
pub mod montecarlo;
pub mod params;
pub mod roots;
pub mod strategy;
pub mod table;

pub use dividend::{characteristic_roots, optimal_barrier, DividendSolution};
pub use error::{Error, Result};
pub use params::ModelParams;
pub use equilibrium::{
    CoefficientTables, EquilibriumBoundary, EquilibriumSolution, Region, VariationalReport,
};
pub use montecarlo::{
    deviation_scan, estimate_asymmetric, estimate_symmetric, indifference_check, Deviation, Monitoring,
    PayoffEstimate, SimConfig, StoppingRule,
};
pub use strategy::{ConstantGap, ControlledTrajectory, GapRule, Player, SamplePath};
