use crate::equilibrium::EquilibriumSolution;
use crate::strategy::ControlledTrajectory;

/// Discounted dividends of both firms along a grid trajectory, plus the
/// monopoly value of the survivor at the first default. Simultaneous
/// defaults leave nothing.
pub fn payoff_pair(traj: &ControlledTrajectory, eq: &EquilibriumSolution) -> (f64, f64) {
    let r = eq.params.r;
    let last = traj.first_default().unwrap_or(traj.times.len() - 1);
    let mut j1 = 0.0;
    let mut j2 = 0.0;
    for k in 0..=last {
        let disc = (-r * traj.times[k]).exp();
        let (dl, dd) = if k == 0 {
            (traj.l[0], traj.d[0])
        } else {
            (traj.l[k] - traj.l[k - 1], traj.d[k] - traj.d[k - 1])
        };
        j1 += disc * dl;
        j2 += disc * dd;
    }
    let disc = (-r * traj.times[last]).exp();
    match (traj.gamma_x, traj.gamma_y) {
        (Some(gx), gy) if gy.map_or(true, |g| gx < g) => j2 += disc * eq.v_hat(traj.y[gx].max(0.0)),
        (gx, Some(gy)) if gx.map_or(true, |g| gy < g) => j1 += disc * eq.v_hat(traj.x[gy].max(0.0)),
        _ => {}
    }
    (j1, j2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use crate::strategy::{build_controlled, SamplePath};

    #[test]
    fn deterministic_ramp() {
        let eq = EquilibriumSolution::new(ModelParams::reference()).unwrap();
        let (dt, n) = (1e-3, 20_000);
        let path = SamplePath::zero_noise(dt, n, 0.2, 0.5);
        let traj = build_controlled(&path, &eq.params, &eq.boundary);
        let (j1, j2) = payoff_pair(&traj, &eq);
        // Leader pays mu0 dt per step once X reaches a0.
        let r = eq.params.r;
        let hit = (eq.a0() - 0.2) / eq.params.mu0;
        let expect = eq.params.mu0 / r * (-r * hit).exp();
        assert!((j1 - expect).abs() < 2e-3, "{j1} vs {expect}");
        assert!(j2 > 0.0);
        assert_eq!(traj.first_default(), None);
    }
}
