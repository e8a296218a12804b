use divgame_core::{characteristic_roots, DividendSolution, EquilibriumSolution, ModelParams, Region};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (0.3f64..1.2, 0.2f64..1.5, 0.25f64..0.6, 0.4f64..1.2)
        .prop_map(|(mu0, lift, sigma, r)| ModelParams::new(mu0, mu0 + lift, sigma, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solver_structure_across_parameters(p in params()) {
        let eq = EquilibriumSolution::new(p).unwrap();
        let (a0, a_hat, alpha) = (eq.a0(), eq.a_hat(), eq.alpha);
        prop_assert!(alpha > 0.0 && alpha < a_hat);
        prop_assert!((eq.boundary_b(0.0).unwrap() - a_hat).abs() < 1e-10);
        prop_assert!((eq.boundary_b(a0).unwrap() - alpha).abs() < 1e-10);
        let mut prev = f64::INFINITY;
        for i in 0..=50 {
            let b = eq.boundary_b(a0 * i as f64 / 50.0).unwrap();
            prop_assert!(b <= prev);
            prev = b;
        }
        let h = 1e-5;
        let slope = (eq.boundary_b(h).unwrap() - a_hat) / h;
        prop_assert!((slope + 1.0).abs() < 0.02, "slope {}", slope);
        for i in 0..=20 {
            let z = (alpha + (a_hat - alpha) * i as f64 / 20.0).min(a_hat);
            let c = eq.boundary_inverse_c(z).unwrap();
            prop_assert!((eq.boundary_b(c).unwrap() - z).abs() < 1e-8);
        }
        prop_assert!(eq.summary().A0 > eq.summary().C0);
    }

    #[test]
    fn follower_value_continuous_across_the_boundary(p in params(), s in 0.05f64..0.95) {
        let eq = EquilibriumSolution::new(p).unwrap();
        let x = s * eq.a0();
        let b = eq.boundary_b(x).unwrap();
        let below = eq.u2_eval(x, b - 1e-7).unwrap();
        let above = eq.u2_eval(x, b + 1e-7).unwrap();
        prop_assert!((above - below - 2e-7).abs() < 1e-9);
        prop_assert_eq!(eq.region(x, b + 1e-7).unwrap(), Region::Stop);
    }

    #[test]
    fn third_derivative_identity(mu in 0.1f64..3.0, sigma in 0.1f64..1.0, r in 0.1f64..2.0) {
        let d = DividendSolution::new(mu, sigma, r).unwrap();
        let (b1, b2) = characteristic_roots(mu, sigma, r).unwrap();
        prop_assert!((d.third(d.a_star) + b1 * b2).abs() <= 1e-9 * (b1 * b2).abs());
    }
}

#[test]
fn variational_check_beyond_the_reference_point() {
    for p in [
        ModelParams::new(0.5, 1.0, 0.3, 0.6).unwrap(),
        ModelParams::new(1.0, 2.5, 0.5, 1.0).unwrap(),
    ] {
        let eq = EquilibriumSolution::new(p).unwrap();
        let report = eq.verify_variational(100, 100).unwrap();
        for c in &report.conditions {
            assert!(c.pass, "{:?}: {} = {:e}", p, c.name, c.max_violation);
        }
    }
}

#[test]
fn cash_coordinates_past_the_leader_barrier() {
    let eq = EquilibriumSolution::new(ModelParams::reference()).unwrap();
    let a0 = eq.a0();
    // The leader pays its excess at once, the follower keeps its cash.
    for y in [0.1, 0.5, 1.2] {
        let v = eq.v2_eval(a0 + 0.3, y).unwrap();
        assert!((v - eq.v2_eval(a0, y).unwrap()).abs() < 1e-14);
    }
    assert_eq!(eq.v2_eval(0.2, 0.0).unwrap(), 0.0);
    assert!((eq.v2_eval(0.0, 0.4).unwrap() - eq.v_hat(0.4)).abs() < 1e-12);
    assert!(eq.v2_eval(-0.1, 0.4).is_err());
    assert!(eq.u2_eval(0.2, -0.3).is_err());
}
