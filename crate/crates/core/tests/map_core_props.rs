use proptest::prelude::*;
use proptest::strategy::ValueTree;
use renormlab::map_core::{c0_distance, eval_map, fit_diffeo, normalize, GeneralUnimodal, UnimodalMap};
use renormlab::quad_family::quadratic;
use renormlab::Config;

fn cfg() -> Config {
    Config::default()
}

/// `phi(y) = 1 - c y + e y^2 (1 - y)`, monotone for the sampled ranges.
fn cubicish(c: f64, e: f64) -> UnimodalMap<f64> {
    let phi = fit_diffeo(|y: f64| 1.0 - c * y + e * y * y * (1.0 - y), 32, true, &cfg()).unwrap();
    UnimodalMap::new(phi, "cubicish")
}

fn map_strategy() -> impl Strategy<Value = UnimodalMap<f64>> {
    (1.0f64..2.0, -0.2f64..0.2).prop_map(|(c, e)| cubicish(c, e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_even_bit_exact(f in map_strategy(), x in -1.0f64..1.0) {
        let a = eval_map(&f, x, 0).unwrap();
        let b = eval_map(&f, -x, 0).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn refit_is_idempotent(c in 1.0f64..2.0, e in -0.2f64..0.2, degree in 16usize..96) {
        let phi = fit_diffeo(|y: f64| 1.0 - c * y + e * y * y * (1.0 - y), degree, true, &cfg()).unwrap();
        let again = fit_diffeo(|y| phi.value(y), degree, true, &cfg()).unwrap();
        for (p, q) in phi.coeffs().iter().zip(again.coeffs()) {
            prop_assert!((p - q).abs() <= 1e-14, "{p} vs {q}");
        }
    }

    #[test]
    fn normalize_fixes_normalized_maps(f in map_strategy()) {
        let once = normalize(&GeneralUnimodal::from_map(&f), 32, &cfg()).unwrap();
        let twice = normalize(&GeneralUnimodal::from_map(&once), 32, &cfg()).unwrap();
        prop_assert!(c0_distance(&once, &f, &cfg()) < 1e-12);
        prop_assert!(c0_distance(&twice, &once, &cfg()) < 1e-12);
    }
}

#[test]
fn metric_axioms_on_fifty_pairs() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = (map_strategy(), map_strategy(), map_strategy());
    let cfg = cfg();
    for _ in 0..50 {
        let (f, g, h) = strategy.new_tree(&mut runner).unwrap().current();
        let fg = c0_distance(&f, &g, &cfg);
        assert_eq!(fg, c0_distance(&g, &f, &cfg));
        assert!(fg >= 0.0);
        assert_eq!(c0_distance(&f, &f, &cfg), 0.0);
        assert!(fg <= c0_distance(&f, &h, &cfg) + c0_distance(&h, &g, &cfg) + 1e-12);
    }
}

/// `g(x) = P_c(x / 2)` written as `phi_f(psi_f(x)^2)` with `psi_f(x) = 2x`, so
/// `phi_f(u) = 1 - c u / 16`. By hand, `Phi = psi_f o phi_f` gives `s = 2` and
/// `phi_F(u) = Phi(4u) / 2 = 1 - c u / 4`, i.e. the quadratic at `c / 4`.
#[test]
fn normalize_undoes_affine_conjugacy() {
    let c = 1.4;
    let g = GeneralUnimodal::new(move |u: f64| 1.0 - c * u / 16.0, (0.0, 4.0), |x| 2.0 * x, (-1.0, 1.0));
    let f = normalize(&g, 32, &cfg()).unwrap();
    let expected = quadratic::<f64>(c / 4.0, &cfg()).unwrap();
    assert!(c0_distance(&f, &expected, &cfg()) < 1e-14);
    assert!((f.apply(0.0) - 1.0).abs() < 1e-12);
}
