//! Pathwise equilibrium strategies on a time grid.

mod controls;
mod hazard;
mod path;

pub use controls::{
    build_controlled, build_with, reflect_leader, respond_follower, symmetric_controls, ConstantGap,
    ControlledTrajectory, GapRule, Player,
};
pub(crate) use controls::first_mover;
pub use hazard::{cumulative_hazard, randomized_time, HazardTrack};
pub use path::SamplePath;
