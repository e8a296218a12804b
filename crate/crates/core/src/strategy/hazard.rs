use serde::Serialize;

use super::path::SamplePath;

/// Integrated intensity along the uncontrolled path and the induced
/// distribution function `Gamma = 1 - e^{-I}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HazardTrack {
    pub integral: Vec<f64>,
    pub gamma: Vec<f64>,
}

/// Trapezoid rule in time on `intensity(X0_k)`.
pub fn cumulative_hazard<F>(path: &SamplePath, x: f64, mu0: f64, sigma: f64, intensity: F) -> HazardTrack
where
    F: Fn(f64) -> f64,
{
    let xu = path.uncontrolled(x, mu0, sigma);
    let mut integral = Vec::with_capacity(xu.len());
    let mut acc = 0.0;
    let mut prev = intensity(xu[0]);
    integral.push(0.0);
    for &c in &xu[1..] {
        let cur = intensity(c);
        acc += 0.5 * path.dt * (prev + cur);
        integral.push(acc);
        prev = cur;
    }
    let gamma = integral.iter().map(|&i| -(-i).exp_m1()).collect();
    HazardTrack { integral, gamma }
}

/// First grid index with `Gamma_k >= u`.
pub fn randomized_time(track: &HazardTrack, u: f64) -> Option<usize> {
    if u >= 1.0 {
        return None;
    }
    track.gamma.iter().position(|&g| g >= u)
}
