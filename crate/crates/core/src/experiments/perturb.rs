use crate::config::Config;
use crate::error::Result;
use crate::map_core::{fit_diffeo, UnimodalMap};
use crate::numerics::grid_max;
use crate::rng::Lcg64;

/// `k`-th even bump `(1 - x^2) x^{2(k+1)}`, written in `y = x^2` and scaled to unit
/// sup norm. Bumps vanish at the critical point and at `x = +-1`, so adding them
/// keeps `f(0) = 1`.
pub fn bump(k: usize, y: f64) -> f64 {
    let p = (k + 1) as f64;
    let peak = (p / (p + 1.0)).powf(p) / (p + 1.0);
    y.powi(k as i32 + 1) * (1.0 - y) / peak
}

/// `sum_k weights[k] * bump(k, y)`.
pub fn combination(weights: &[f64], y: f64) -> f64 {
    weights.iter().enumerate().map(|(k, w)| w * bump(k, y)).sum()
}

/// Sup norm of a bump combination over `[0, 1]`, equal to its C^0 norm on `[-1, 1]`.
pub fn combination_norm(weights: &[f64], cfg: &Config) -> f64 {
    grid_max(|y| combination(weights, y).abs(), 0.0, 1.0, cfg.grid_points(cfg.degree)).1
}

/// `f + sum_k weights[k] * bump_k`, refit at the configured degree.
pub fn perturb(f: &UnimodalMap<f64>, weights: &[f64], cfg: &Config) -> Result<UnimodalMap<f64>> {
    let phi = fit_diffeo(|y| f.phi.value(y) + combination(weights, y), cfg.degree, true, cfg)?;
    Ok(UnimodalMap::new(phi, format!("{}+bump", f.label)))
}

/// Uniform random weights on `bump_count` bumps, rescaled so the combination has
/// C^0 norm `size`.
pub fn random_weights(rng: &mut Lcg64, size: f64, cfg: &Config) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..cfg.bump_count.max(1)).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let norm = combination_norm(&w, cfg);
        if norm > 1e-3 {
            return w.into_iter().map(|x| x * size / norm).collect();
        }
    }
}

/// The per-trial generator: seed plus trial index.
pub fn trial_rng(cfg: &Config, trial: usize) -> Lcg64 {
    Lcg64::new(cfg.seed.wrapping_add(trial as u64))
}
