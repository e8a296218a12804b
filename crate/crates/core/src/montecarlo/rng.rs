//! Counter-keyed random streams: path `i` and purpose `p` always read the
//! ChaCha stream `4 i + p` of the run seed, whatever thread simulates it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::config::{Monitoring, SimConfig};
use crate::strategy::SamplePath;

const NORMALS: u64 = 0;
const MAXIMA: u64 = 1;
const CROSSINGS: u64 = 2;
const DRAWS: u64 = 3;

pub fn path_rng(seed: u64, index: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_mul(4).wrapping_add(purpose));
    rng
}

/// The pair of uniforms used by the symmetric game's randomisation.
pub fn randomisation_draws(seed: u64, index: u64) -> (f64, f64) {
    let mut rng = path_rng(seed, index, DRAWS);
    (rng.random::<f64>(), rng.random::<f64>())
}

/// One grid step of the driver.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Step {
    /// Time at the end of the step.
    pub t: f64,
    /// `B` at the end of the step.
    pub b: f64,
    /// Maximum of `mu0 t + sigma B` over the step minus its start value.
    /// In grid mode this is simply the increment.
    pub rise: f64,
    /// Uniform for the barrier-crossing test; 1 disables it.
    pub u_cross: f64,
}

/// Brownian driver for one path. The grid increment is the sum of `refine`
/// normal draws, so a run with `(dt, 2m)` and one with `(dt / 2, m)` agree
/// at the coarse grid points; monitoring between grid points is always over
/// the whole step.
pub(crate) struct Noise {
    normals: ChaCha8Rng,
    maxima: ChaCha8Rng,
    crossings: ChaCha8Rng,
    refine: usize,
    dt: f64,
    sub_sd: f64,
    mu0: f64,
    sigma: f64,
    bridge: bool,
    k: usize,
    b: f64,
}

impl Noise {
    pub(crate) fn new(cfg: &SimConfig, index: u64) -> Self {
        Self {
            normals: path_rng(cfg.seed, index, NORMALS),
            maxima: path_rng(cfg.seed, index, MAXIMA),
            crossings: path_rng(cfg.seed, index, CROSSINGS),
            refine: cfg.refine,
            dt: cfg.dt,
            sub_sd: (cfg.dt / cfg.refine as f64).sqrt(),
            mu0: cfg.params.mu0,
            sigma: cfg.params.sigma,
            bridge: cfg.monitoring == Monitoring::Bridge,
            k: 0,
            b: 0.0,
        }
    }

    pub(crate) fn step(&mut self) -> Step {
        self.k += 1;
        let mut sum = 0.0;
        for _ in 0..self.refine {
            let z: f64 = self.normals.sample(StandardNormal);
            sum += z;
        }
        let db = self.sub_sd * sum;
        self.b += db;
        let dw = self.mu0 * self.dt + self.sigma * db;
        let (rise, u_cross) = if self.bridge {
            // Maximum of a Brownian bridge from 0 to dw by inversion.
            let u: f64 = self.maxima.random::<f64>();
            let v = 2.0 * self.sigma * self.sigma * self.dt;
            let rise = 0.5 * (dw + (dw * dw - v * (1.0 - u).ln()).sqrt());
            (rise, self.crossings.random::<f64>())
        } else {
            (dw, 1.0)
        };
        Step {
            t: self.dt * self.k as f64,
            b: self.b,
            rise,
            u_cross,
        }
    }
}

/// The path with index `index` of the run, as grid values of `B`.
pub fn gen_path(cfg: &SimConfig, index: u64) -> SamplePath {
    let n = cfg.n_steps();
    let mut noise = Noise::new(&SimConfig { monitoring: Monitoring::Grid, ..*cfg }, index);
    let mut b = Vec::with_capacity(n + 1);
    b.push(0.0);
    for _ in 0..n {
        b.push(noise.step().b);
    }
    SamplePath {
        dt: cfg.dt,
        n_steps: n,
        brownian: b,
        x0: cfg.x0,
        y0: cfg.y0,
    }
}

/// All paths of the run, in index order.
pub fn gen_paths(cfg: &SimConfig) -> impl Iterator<Item = SamplePath> + '_ {
    (0..cfg.n_paths as u64).map(move |i| gen_path(cfg, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;

    fn cfg() -> SimConfig {
        SimConfig {
            horizon: 1.0,
            n_paths: 4,
            seed: 11,
            ..SimConfig::new(ModelParams::reference(), 0.2, 0.5)
        }
    }

    #[test]
    fn paths_are_keyed_by_index() {
        let c = cfg();
        let all: Vec<SamplePath> = gen_paths(&c).collect();
        assert_eq!(gen_path(&c, 2), all[2]);
        assert_ne!(all[1], all[2]);
        assert!(all.iter().all(|p| p.brownian[0] == 0.0 && p.brownian.len() == 1001));
        assert_ne!(gen_path(&SimConfig { seed: 12, ..c }, 2), all[2]);
    }

    #[test]
    fn refinement_couples_grids() {
        let (coarse, fine) = SimConfig { refine: 1, ..cfg() }.refinement_pair();
        let a = gen_path(&coarse, 3);
        let b = gen_path(&fine, 3);
        for k in 0..=a.n_steps {
            assert!((a.brownian[k] - b.brownian[2 * k]).abs() < 1e-12);
        }
    }

    #[test]
    fn bridge_and_grid_share_the_path() {
        let c = SimConfig { refine: 3, ..cfg() };
        let mut g = Noise::new(&SimConfig { monitoring: Monitoring::Grid, ..c }, 1);
        let mut br = Noise::new(&c, 1);
        for _ in 0..100 {
            let (a, b) = (g.step(), br.step());
            assert_eq!(a.b, b.b);
            assert_eq!(a.t, b.t);
            assert!(b.rise >= 0.0 && b.rise >= a.rise - 1e-15);
            assert_eq!(a.u_cross, 1.0);
        }
    }

    #[test]
    fn increment_variance() {
        let c = SimConfig { horizon: 1e6 * 1e-3, ..cfg() };
        let p = gen_path(&c, 0);
        let n = p.n_steps as f64;
        let incs: Vec<f64> = p.brownian.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = incs.iter().sum::<f64>() / n;
        let var = incs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var / c.dt - 1.0).abs() < 0.01, "variance ratio {}", var / c.dt);
    }

    #[test]
    fn bridge_maximum_distribution() {
        // Driftless unit-variance steps of length 1: P(max > m) = 2 (1 - Phi(m)).
        let c = SimConfig {
            dt: 1.0,
            horizon: 40_000.0,
            params: ModelParams { mu0: 0.0, sigma: 1.0, ..ModelParams::reference() },
            ..cfg()
        };
        let mut noise = Noise::new(&c, 0);
        let n = 40_000;
        let mut above = 0;
        for _ in 0..n {
            if noise.step().rise > 0.5 {
                above += 1;
            }
        }
        let p = above as f64 / n as f64;
        let expected = 2.0 * (1.0 - 0.691_462_461_274_013);
        assert!((p - expected).abs() < 4.0 * (expected * (1.0 - expected) / n as f64).sqrt(), "{p}");
    }
}
