use divgame_core::montecarlo::{
    deviation_scan, estimate_asymmetric, estimate_duel, estimate_symmetric, gen_path, gen_paths, payoff_pair,
    simulate_duel,
};
use divgame_core::strategy::{build_controlled, symmetric_controls};
use divgame_core::{ConstantGap, Deviation, EquilibriumSolution, ModelParams, Monitoring, SamplePath, SimConfig};

fn eq() -> EquilibriumSolution {
    EquilibriumSolution::new(ModelParams::reference()).unwrap()
}

fn small(x0: f64, y0: f64) -> SimConfig {
    SimConfig {
        n_paths: 400,
        horizon: 6.0,
        seed: 21,
        ..SimConfig::new(ModelParams::reference(), x0, y0)
    }
}

#[test]
fn paths_reproduce_by_index() {
    let cfg = small(0.2, 0.5);
    let a: Vec<SamplePath> = gen_paths(&cfg).take(5).collect();
    for (i, p) in a.iter().enumerate() {
        assert_eq!(*p, gen_path(&cfg, i as u64));
        assert_eq!(p.brownian[0], 0.0);
    }
}

#[test]
fn payoff_examples() {
    let e = eq();
    // Both default at once with nothing paid.
    let mut b = vec![0.0; 11];
    b[10] = -10.0;
    let path = SamplePath::new(1e-3, b, 0.1, 0.1).unwrap();
    let t = symmetric_controls(&path, 0.1, 1.0, 1.0, &e);
    assert_eq!(payoff_pair(&t, &e), (0.0, 0.0));

    // Initial jump of the leader above the barrier.
    let path = SamplePath::zero_noise(1e-3, 10, 0.7, 0.9);
    let t = build_controlled(&path, &e.params, &e.boundary);
    assert!((t.l[0] - (0.7 - e.a0())).abs() < 1e-15);

    // Leader defaults first: the follower collects the monopoly value.
    let mut b = vec![0.0; 6];
    b[5] = -1.0;
    let path = SamplePath::new(1e-3, b, 0.2, 0.5).unwrap();
    let t = build_controlled(&path, &e.params, &e.boundary);
    assert_eq!(t.gamma_x, Some(5));
    let (j1, j2) = payoff_pair(&t, &e);
    assert_eq!(j1, 0.0);
    let disc = |k: usize| (-e.params.r * 1e-3 * k as f64).exp();
    let paid: f64 = t.d[0] + (1..=5).map(|k| disc(k) * (t.d[k] - t.d[k - 1])).sum::<f64>();
    let expect = paid + disc(5) * e.v_hat(t.y[5]);
    assert!((j2 - expect).abs() < 1e-12);
}

#[test]
fn deep_follower_pays_at_once() {
    let e = eq();
    let cfg = SimConfig { n_paths: 50, ..small(0.2, 10.2) };
    let b = e.boundary_b(0.2).unwrap();
    let d0 = 10.0 - b;
    let s = simulate_duel(&cfg, &e, e.a0(), &e.boundary, 0);
    assert!(s.follower >= d0);
    let est = estimate_asymmetric(&cfg, &e).unwrap();
    assert!((est.follower.mean - (d0 + e.v2_eval(0.2, 0.2 + b).unwrap())).abs() < 0.1);
}

#[test]
fn dividends_bounded_pathwise() {
    let e = eq();
    let cfg = small(0.2, 0.5);
    let p = e.params;
    for i in 0..100 {
        let path = gen_path(&cfg, i);
        let t = build_controlled(&path, &p, &e.boundary);
        let (j1, _) = payoff_pair(&t, &e);
        let max_b = path.brownian.iter().cloned().fold(0.0, f64::max);
        let bound = cfg.x0 + p.mu0 / p.r + p.sigma * max_b + e.v_hat(10.0);
        assert!(j1 <= bound, "path {i}: {j1} > {bound}");
    }
}

#[test]
fn zero_cash_symmetric_game_pays_nothing() {
    let e = eq();
    let s = estimate_symmetric(&small(0.0, 0.0), &e).unwrap();
    assert_eq!((s.j1.mean, s.j2.mean, s.activated), (0.0, 0.0, 0));
}

#[test]
fn equilibrium_row_of_a_scan_reproduces_the_estimate() {
    let e = eq();
    let cfg = small(0.2, 0.5);
    let base = estimate_asymmetric(&cfg, &e).unwrap();
    let rows = deviation_scan(&cfg, &e, &[Deviation::LeaderBarrier(e.a0())]).unwrap();
    assert_eq!(rows[0].estimate.mean, base.leader.mean);
    assert_eq!(rows[0].gain.mean, 0.0);
    let alt = estimate_duel(&cfg, &e, e.a0(), &ConstantGap(e.alpha)).unwrap();
    assert_eq!(alt.leader.n, cfg.n_paths);
}

#[test]
fn monitoring_modes_share_paths() {
    let e = eq();
    // With no defaults possible the two modes differ only through the
    // running maximum, which the bridge can only raise.
    let cfg = SimConfig { n_paths: 50, horizon: 1.0, ..small(0.35, 2.0) };
    for i in 0..50 {
        let g = simulate_duel(&SimConfig { monitoring: Monitoring::Grid, ..cfg }, &e, e.a0(), &e.boundary, i);
        let b = simulate_duel(&cfg, &e, e.a0(), &e.boundary, i);
        assert!((g.leader - b.leader).abs() < 0.05);
    }
}
