use serde::Serialize;

use super::perturb::{perturb, random_weights, trial_rng};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::map_core::{c0_distance, UnimodalMap};
use crate::numerics::{bisect_predicate, grid_max};
use crate::quad_family::quadratic;
use crate::renorm::{detect, iterate, renormalize, DetectParams, Detection, Permutation, RenormData};

/// Resampling budget per trial when a perturbation leaves the renormalization type.
const MAX_RESAMPLES: usize = 20;

/// Largest observed ratio `|R^n f - R g| / |R^{n-1} f - g|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub l_hat: f64,
    /// Largest ratio at each level `n = 1..=depth`.
    pub per_level: Vec<f64>,
    pub delta: f64,
    pub trials: usize,
    pub depth: usize,
    /// Perturbations redrawn because they changed the type.
    pub resamples: usize,
    /// Trials whose perturbation had zero size (0/0 guard).
    pub skipped: usize,
}

fn same_type(f: &UnimodalMap<f64>, l: usize, sigma: &Permutation, cfg: &Config) -> Option<RenormData<f64>> {
    match detect(f, DetectParams::from(cfg)) {
        Ok(Detection::Renormalizable(d)) if d.l == l && &d.sigma == sigma => Some(d),
        _ => None,
    }
}

/// Ratio of `|R f_1 - R g|` to `|f_1 - g|` for the perturbation `g` of `f_1`, or
/// `None` when `g = f_1`.
fn contraction_ratio(
    f1: &UnimodalMap<f64>,
    rf1: &UnimodalMap<f64>,
    g: &UnimodalMap<f64>,
    data: &RenormData<f64>,
    cfg: &Config,
) -> Result<Option<f64>> {
    let base = c0_distance(f1, g, cfg);
    if base == 0.0 {
        return Ok(None);
    }
    let rg = renormalize(g, data, cfg.degree, cfg)?;
    Ok(Some(c0_distance(rf1, &rg, cfg) / base))
}

/// Empirical Lipschitz constant of the renormalization operator along the orbit of
/// `f`: for each level `n <= depth`, `trials` random perturbations `g` of
/// `R^{n-1} f` of size `delta` with the same period and permutation.
pub fn lipschitz_estimate(
    f: &UnimodalMap<f64>,
    depth: usize,
    trials: usize,
    delta: f64,
    cfg: &Config,
) -> Result<LipschitzReport> {
    if depth == 0 || trials == 0 {
        return Err(Error::InvalidInput("lipschitz_estimate needs depth >= 1 and trials >= 1".into()));
    }
    let orbit = iterate(f, depth, cfg);
    if orbit.maps.len() <= depth {
        return Err(Error::InvalidInput(format!(
            "map is renormalizable to depth {} only ({})",
            orbit.depth(),
            orbit.truncated.as_ref().map_or("ill-resolved".into(), |t| t.to_string())
        )));
    }
    let mut per_level = Vec::with_capacity(depth);
    let mut resamples = 0;
    let mut skipped = 0;
    for n in 1..=depth {
        let (f1, rf1, reference) = (&orbit.maps[n - 1], &orbit.maps[n], &orbit.data[n - 1]);
        let mut worst = 0.0f64;
        for trial in 0..trials {
            let mut rng = trial_rng(cfg, trial);
            let mut attempt = 0;
            loop {
                let g = if delta == 0.0 {
                    Some(f1.clone())
                } else {
                    perturb(f1, &random_weights(&mut rng, delta, cfg), cfg).ok()
                };
                let data = g.as_ref().and_then(|g| same_type(g, reference.l, &reference.sigma, cfg));
                if let (Some(g), Some(data)) = (g, data) {
                    match contraction_ratio(f1, rf1, &g, &data, cfg)? {
                        Some(r) => worst = worst.max(r),
                        None => skipped += 1,
                    }
                    break;
                }
                attempt += 1;
                resamples += 1;
                if attempt > MAX_RESAMPLES {
                    return Err(Error::InvalidInput(format!(
                        "no type-preserving perturbation of size {delta} at level {n}"
                    )));
                }
            }
        }
        per_level.push(worst);
    }
    Ok(LipschitzReport {
        l_hat: per_level.iter().copied().fold(0.0, f64::max),
        per_level,
        delta,
        trials,
        depth,
        resamples,
        skipped,
    })
}

/// Outcome of the composition inequality probe
/// `|f_1 o f_2 - g_1 o g_2| <= c (max |f_i - g_i|)` with `c = 1 + sup |g_1'|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositionReport {
    pub pairs: usize,
    pub violations: usize,
    /// Largest `lhs / (c * max |f_i - g_i|)`.
    pub worst_ratio: f64,
}

/// Random smooth pairs: quadratics with `c` in `[1, 2]` carrying a bump combination
/// of size 0.05, each compared with a further perturbation of size `delta`.
pub fn composition_probe(pairs: usize, delta: f64, cfg: &Config) -> Result<CompositionReport> {
    let points = cfg.grid_points(cfg.degree);
    let mut violations = 0;
    let mut worst_ratio = 0.0f64;
    for trial in 0..pairs {
        let mut rng = trial_rng(cfg, trial);
        let mut random_map = |size: f64, base: Option<&UnimodalMap<f64>>| -> Result<UnimodalMap<f64>> {
            let base = match base {
                Some(b) => b.clone(),
                None => quadratic(rng.uniform(1.0, 2.0), cfg)?,
            };
            let w = random_weights(&mut rng, size, cfg);
            perturb(&base, &w, cfg)
        };
        let f1 = random_map(0.05, None)?;
        let f2 = random_map(0.05, None)?;
        let g1 = random_map(delta, Some(&f1))?;
        let g2 = random_map(delta, Some(&f2))?;
        let lhs = grid_max(|x: f64| (f1.apply(f2.apply(x)) - g1.apply(g2.apply(x))).abs(), -1.0, 1.0, 2 * points).1;
        let lip = grid_max(|x: f64| g1.slope(x).abs(), -1.0, 1.0, 2 * points).1;
        let rhs = (1.0 + lip) * c0_distance(&f1, &g1, cfg).max(c0_distance(&f2, &g2, cfg));
        let ratio = lhs / rhs;
        if ratio > 1.0 {
            violations += 1;
        }
        worst_ratio = worst_ratio.max(ratio);
    }
    Ok(CompositionReport { pairs, violations, worst_ratio })
}

/// Flip threshold of one bump direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionThreshold {
    pub bump: usize,
    pub sign: i8,
    /// `None` when the type did not change up to `separation_t_max`.
    pub threshold: Option<f64>,
}

/// Smallest perturbation size that changes the first-level renormalization type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub level: usize,
    /// Minimum over the bounded directions.
    pub eps_hat: Option<f64>,
    pub directions: Vec<DirectionThreshold>,
}

/// True when `base + t * weights` is no longer a normalized map with first-level
/// period `l` and permutation `sigma`.
fn flips(base: &UnimodalMap<f64>, weights: &[f64], t: f64, l: usize, sigma: &Permutation, cfg: &Config) -> bool {
    let scaled: Vec<f64> = weights.iter().map(|w| w * t).collect();
    match perturb(base, &scaled, cfg) {
        Ok(g) => same_type(&g, l, sigma, cfg).is_none(),
        Err(_) => true,
    }
}

/// Smallest `t` in `(0, separation_t_max]` at which `base + t * weights` changes
/// type: a geometric scan with ratio `2^{1/4}` from `1e-8 * t_max`, then bisection
/// to relative accuracy `1e-6`. `None` when no flip is found.
pub fn flip_threshold(base: &UnimodalMap<f64>, weights: &[f64], cfg: &Config) -> Result<Option<f64>> {
    let reference = match detect(base, DetectParams::from(cfg))? {
        Detection::Renormalizable(d) => d,
        _ => return Err(Error::InvalidInput("separation needs a renormalizable map".into())),
    };
    if weights.iter().all(|&w| w == 0.0) {
        return Ok(None);
    }
    let t_max = cfg.separation_t_max;
    let flip = |t: f64| flips(base, weights, t, reference.l, &reference.sigma, cfg);
    let ratio = 2f64.powf(0.25);
    let mut prev = 0.0;
    let mut t = 1e-8 * t_max;
    loop {
        let t_clamped = t.min(t_max);
        if flip(t_clamped) {
            let (_, outside) = bisect_predicate(|s| !flip(s), prev, t_clamped, 1e-6 * t_clamped);
            return Ok(Some(outside));
        }
        if t_clamped >= t_max {
            return Ok(None);
        }
        prev = t_clamped;
        t *= ratio;
    }
}

/// Separation of `R^level f` from maps of another type along `directions` unit bumps,
/// each taken with both signs.
pub fn separation(f: &UnimodalMap<f64>, level: usize, directions: usize, cfg: &Config) -> Result<SeparationReport> {
    let orbit = iterate(f, level, cfg);
    let base = orbit.maps.get(level).ok_or_else(|| {
        Error::InvalidInput(format!("R^{level} f unavailable: renormalizable to depth {}", orbit.depth()))
    })?;
    let mut out = Vec::with_capacity(2 * directions);
    for bump in 0..directions {
        for sign in [1i8, -1] {
            let mut w = vec![0.0; bump + 1];
            w[bump] = f64::from(sign);
            out.push(DirectionThreshold { bump, sign, threshold: flip_threshold(base, &w, cfg)? });
        }
    }
    let eps_hat = out.iter().filter_map(|d| d.threshold).reduce(f64::min);
    Ok(SeparationReport { level, eps_hat, directions: out })
}

/// Number of leading renormalization levels on which perturbations of `f` keep
/// `f`'s periods and permutations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowReport {
    pub delta: f64,
    pub trials: usize,
    /// Minimum over trials.
    pub depth: usize,
    pub per_trial: Vec<usize>,
    /// Depth to which `f` itself was renormalized.
    pub reference_depth: usize,
}

/// Shadowing depth of size-`delta` perturbations of `f`, compared against `f`'s
/// orbit up to the configured depth cap.
pub fn shadow_depth(f: &UnimodalMap<f64>, delta: f64, trials: usize, cfg: &Config) -> Result<ShadowReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("shadow_depth needs trials >= 1".into()));
    }
    let reference = iterate(f, cfg.depth_cap, cfg);
    let reference_depth = reference.depth();
    let mut per_trial = Vec::with_capacity(trials);
    for trial in 0..trials {
        let g = if delta == 0.0 {
            f.clone()
        } else {
            let mut rng = trial_rng(cfg, trial);
            let w = random_weights(&mut rng, delta, cfg);
            match perturb(f, &w, cfg) {
                Ok(g) => g,
                Err(_) => {
                    per_trial.push(0);
                    continue;
                }
            }
        };
        let orbit = iterate(&g, reference_depth, cfg);
        let agree =
            orbit.data.iter().zip(&reference.data).take_while(|(a, b)| a.l == b.l && a.sigma == b.sigma).count();
        per_trial.push(agree);
    }
    Ok(ShadowReport { delta, trials, depth: per_trial.iter().copied().min().unwrap_or(0), per_trial, reference_depth })
}

/// `max {n >= 0 : c * l_hat^n * delta < eps_hat}`, the depth to which a perturbation
/// growing by at most `l_hat` per level stays below the separation threshold.
/// `None` when even `n = 0` fails; capped at `cap`.
pub fn predicted_shadow_depth(c: f64, l_hat: f64, eps_hat: f64, delta: f64, cap: usize) -> Option<usize> {
    let ok = |n: usize| c * l_hat.powi(n as i32) * delta < eps_hat;
    if !ok(0) {
        return None;
    }
    Some((0..=cap).take_while(|&n| ok(n)).last().unwrap_or(0))
}
