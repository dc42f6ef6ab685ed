use std::sync::OnceLock;

use renormlab::experiments::{
    bump, composition_probe, constants, convergence, cylinders, feigenbaum_pair, flip_threshold, gap_ratios,
    lipschitz_estimate, predicted_shadow_depth, rigidity_scaling, separation, shadow_depth, window_decay,
    FeigenbaumPair, ToCsv,
};
use renormlab::quad_family::{accumulation_point, quadratic, FnFamily, ParamFamily, PolynomialFamily, TypePattern};
use renormlab::renorm::iterate;
use renormlab::{Config, Error};

fn cfg() -> Config {
    Config::default()
}

fn pair() -> &'static FeigenbaumPair {
    static PAIR: OnceLock<FeigenbaumPair> = OnceLock::new();
    PAIR.get_or_init(|| feigenbaum_pair(&cfg()).unwrap())
}

#[test]
fn bumps_vanish_at_the_ends_and_peak_at_one() {
    for k in 0..6 {
        assert_eq!(bump(k, 0.0), 0.0);
        assert_eq!(bump(k, 1.0), 0.0);
        let peak = (0..=10_000).map(|i| bump(k, i as f64 / 10_000.0)).fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-6, "k = {k}: {peak}");
    }
}

#[test]
fn convergence_of_a_map_with_itself_is_degenerate() {
    let f = &pair().quadratic;
    let r = convergence(f, f, 6, &cfg()).unwrap();
    assert!(r.distances.iter().all(|&d| d == 0.0));
    assert!(r.degenerate);
    assert!(r.fitted_rate.is_none() && r.fit_r2.is_none());
}

#[test]
fn convergence_rejects_mismatched_types() {
    let f = &pair().quadratic;
    let g = quadratic::<f64>(1.3, &cfg()).unwrap();
    let err = convergence(f, &g, 4, &cfg()).unwrap_err();
    assert!(matches!(err, Error::CombinatorialMismatch { level: 1, .. }), "{err:?}");
}

#[test]
fn convergence_distances_nonnegative_and_shrinking() {
    let p = pair();
    let r = convergence(&p.quadratic, &p.partner, 8, &cfg()).unwrap();
    assert_eq!(r.distances.len(), 9);
    assert!(r.distances.iter().all(|&d| d >= 0.0));
    assert!(r.fitted_rate.unwrap() < 0.0);
    assert!(r.distances[8] < r.distances[1]);
}

#[test]
fn lipschitz_zero_delta_skips_every_trial() {
    let r = lipschitz_estimate(&pair().quadratic, 3, 4, 0.0, &cfg()).unwrap();
    assert_eq!(r.skipped, 12);
    assert_eq!(r.l_hat, 0.0);
}

#[test]
fn lipschitz_bounds_one_step_of_the_orbit_distance() {
    let p = pair();
    let cfg = cfg();
    let lip = lipschitz_estimate(&p.quadratic, 8, 20, 1e-5, &cfg).unwrap();
    let conv = convergence(&p.quadratic, &p.partner, 8, &cfg).unwrap();
    assert!(lip.l_hat > 1.0);
    for n in conv.fit_levels.windows(2) {
        let (d0, d1) = (conv.distances[n[0]], conv.distances[n[1]]);
        assert!(d1 <= lip.l_hat * d0, "level {}: {d1:e} > {} * {d0:e}", n[1], lip.l_hat);
    }
}

#[test]
fn composition_inequality_holds_on_random_pairs() {
    let r = composition_probe(30, 1e-4, &cfg()).unwrap();
    assert_eq!(r.pairs, 30);
    assert_eq!(r.violations, 0);
    assert!(r.worst_ratio > 0.0 && r.worst_ratio <= 1.0);
}

#[test]
fn zero_direction_never_flips() {
    let f = quadratic::<f64>(1.3, &cfg()).unwrap();
    assert_eq!(flip_threshold(&f, &vec![0.0; cfg().bump_count], &cfg()).unwrap(), None);
}

#[test]
fn separation_positive_along_the_orbit() {
    let cfg = cfg();
    let r = separation(&pair().quadratic, 3, 4, &cfg).unwrap();
    assert_eq!(r.level, 3);
    assert_eq!(r.directions.len(), 8);
    assert!(r.eps_hat.unwrap() > 0.0);
    let min = r.directions.iter().filter_map(|d| d.threshold).fold(f64::INFINITY, f64::min);
    assert_eq!(r.eps_hat.unwrap(), min);
}

#[test]
fn shadow_depth_extremes() {
    let cfg = cfg();
    let f = &pair().quadratic;
    let exact = shadow_depth(f, 0.0, 2, &cfg).unwrap();
    assert_eq!(exact.depth, cfg.depth_cap);
    assert_eq!(exact.reference_depth, cfg.depth_cap);
    let huge = shadow_depth(f, 0.5, 5, &cfg).unwrap();
    assert!(huge.depth < exact.depth);
    assert_eq!(huge.per_trial.len(), 5);
}

#[test]
fn predicted_shadow_depth_by_hand() {
    // 1 * 4^n * 1e-6 < 1e-2 holds for n <= 6
    assert_eq!(predicted_shadow_depth(1.0, 4.0, 1e-2, 1e-6, 12), Some(6));
    assert_eq!(predicted_shadow_depth(1.0, 4.0, 1e-2, 1e-6, 3), Some(3));
    assert_eq!(predicted_shadow_depth(1.0, 4.0, 1e-2, 1.0, 12), None);
}

#[test]
fn gap_ratios_by_hand() {
    let r = gap_ratios(&[0.0, 1.0, 1.5, 1.75]);
    assert_eq!(r.len(), 2);
    assert_eq!((r[0].n, r[0].value), (2, 2.0));
    assert_eq!((r[1].n, r[1].value), (3, 2.0));
}

#[test]
fn constants_shapes_and_values() {
    let r = constants(6, pair().c_star, &cfg()).unwrap();
    assert_eq!(r.superstable.len(), 7);
    assert_eq!(r.delta_estimates.first().unwrap().n, 2);
    assert_eq!(r.delta_estimates.last().unwrap().n, 6);
    assert_eq!(r.alpha_estimates.len(), 6);
    assert_eq!(r.nl_track.len(), 7);
    assert!((r.delta_limit.unwrap() - 4.6692).abs() < 1e-2);
    assert!((r.alpha_estimates[5].value - 2.5029).abs() < 1e-3);
    assert!(constants(11, pair().c_star, &cfg()).is_err());
}

#[test]
fn window_decay_nested_and_shrinking() {
    let r = window_decay(6, &cfg()).unwrap();
    assert!(r.truncated.is_none());
    assert_eq!(r.lengths.len(), 6);
    assert!(r.lengths.windows(2).all(|p| p[1] < p[0]));
    assert!(r.windows.windows(2).all(|p| p[0].lo <= p[1].lo && p[1].hi <= p[0].hi));
    assert!(window_decay(9, &cfg()).is_err());
}

#[test]
fn rigidity_of_a_map_with_itself_is_exact() {
    let f = &pair().quadratic;
    let r = rigidity_scaling(f, f, 5, &cfg()).unwrap();
    for level in &r.per_depth {
        assert_eq!(level.max_log_ratio_spread, 0.0);
        assert_eq!(level.raw_spread, 0.0);
        assert_eq!(level.lengths_f.len(), 1 << level.depth);
    }
}

#[test]
fn doubling_cylinders_are_disjoint() {
    let cfg = cfg();
    let f = &pair().quadratic;
    let orbit = iterate(f, 6, &cfg);
    let mut half = 1.0;
    for n in 1..=6 {
        half *= orbit.data[n - 1].a.abs();
        let mut ivs = cylinders(f, half, 1 << n);
        assert_eq!(ivs.len(), 1 << n);
        ivs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        assert!(ivs.windows(2).all(|p| p[0].hi < p[1].lo), "level {n}");
    }
}

#[test]
fn rigidity_invariant_under_affine_reparametrization() {
    let cfg = cfg();
    let p = pair();
    let cubic = PolynomialFamily::cubic(0.05);
    // s in [0, 2] with t = 1 + s / 2
    let moved = FnFamily(move |s: f64, cfg: &Config| cubic.map_at(1.0 + 0.5 * s, cfg));
    let depth = cfg.feigenbaum_depth;
    let s_star = accumulation_point(&moved, (0.0, 2.0), &TypePattern::doubling(depth), depth, &cfg).unwrap().c_star;
    assert!((1.0 + 0.5 * s_star - p.t_star).abs() < 1e-12);
    let g = moved.map_at(s_star, &cfg).unwrap();
    let a = rigidity_scaling(&p.quadratic, &p.partner, 6, &cfg).unwrap();
    let b = rigidity_scaling(&p.quadratic, &g, 6, &cfg).unwrap();
    for (x, y) in a.per_depth.iter().zip(&b.per_depth) {
        assert!((x.max_log_ratio_spread - y.max_log_ratio_spread).abs() < 1e-6, "depth {}", x.depth);
    }
}

#[test]
fn csv_headers() {
    let cfg = cfg();
    let p = pair();
    let conv = convergence(&p.quadratic, &p.partner, 3, &cfg).unwrap().to_csv().unwrap();
    assert!(conv.starts_with("n,d_n,rate,r2\n"));
    assert_eq!(conv.lines().count(), 5);
    let k = constants(3, p.c_star, &cfg).unwrap().to_csv().unwrap();
    assert!(k.starts_with("n,gap_ratio,a_ratio,nl\n"));
    let w = window_decay(3, &cfg).unwrap().to_csv().unwrap();
    assert!(w.starts_with("n,lo,hi,len,ratio\n"));
    let s = rigidity_scaling(&p.quadratic, &p.partner, 3, &cfg).unwrap().to_csv().unwrap();
    assert!(s.starts_with("n,spread\n"));
}
