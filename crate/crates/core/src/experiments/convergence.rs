use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::map_core::{c0_distance, UnimodalMap};
use crate::numerics::least_squares;
use crate::renorm::{iterate, RenormOrbit};

/// Distances `d_n = |R^n f - R^n g|_{C^0}` and their geometric rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    /// `d_0, .., d_depth`.
    pub distances: Vec<f64>,
    /// Larger tail estimate of the two refits at each level (0 at level 0).
    pub refit_errors: Vec<f64>,
    /// Slope of the least-squares line through `(n, ln d_n)`.
    pub fitted_rate: Option<f64>,
    pub fit_r2: Option<f64>,
    /// Levels entering the fit.
    pub fit_levels: Vec<usize>,
    pub depth: usize,
    /// Set when fewer than two levels lie above the noise floor.
    pub degenerate: bool,
}

/// Renormalizes `f` and `g` side by side to `depth` and checks that their
/// renormalization types agree at every level.
pub(crate) fn paired_orbits(
    f: &UnimodalMap<f64>,
    g: &UnimodalMap<f64>,
    depth: usize,
    cfg: &Config,
) -> Result<(RenormOrbit<f64>, RenormOrbit<f64>)> {
    let of = iterate(f, depth, cfg);
    let og = iterate(g, depth, cfg);
    for level in 0..depth {
        match (of.data.get(level), og.data.get(level)) {
            (Some(a), Some(b)) if a.l == b.l && a.sigma == b.sigma => {}
            (Some(a), Some(b)) => {
                return Err(Error::CombinatorialMismatch {
                    level,
                    detail: format!("f has ({}, {}), g has ({}, {})", a.l, a.sigma, b.l, b.sigma),
                })
            }
            (da, db) => {
                let why = |d: Option<&_>, o: &RenormOrbit<f64>| match (d, &o.truncated) {
                    (Some(_), _) => "renormalizable".to_string(),
                    (None, Some(t)) => t.to_string(),
                    (None, None) => "not renormalizable".to_string(),
                };
                return Err(Error::CombinatorialMismatch {
                    level,
                    detail: format!("f: {}, g: {}", why(da, &of), why(db, &og)),
                });
            }
        }
    }
    if of.maps.len() <= depth || og.maps.len() <= depth {
        return Err(Error::CombinatorialMismatch {
            level: depth,
            detail: "refit at the last level is ill-resolved".into(),
        });
    }
    Ok((of, og))
}

/// Distance sequence between the renormalization orbits of two maps of the same type.
///
/// The rate is fit over levels `1..=depth` with `d_n` above
/// `noise_floor_factor * refit_error`.
pub fn convergence(
    f: &UnimodalMap<f64>,
    g: &UnimodalMap<f64>,
    depth: usize,
    cfg: &Config,
) -> Result<ConvergenceReport> {
    if depth == 0 {
        return Err(Error::InvalidInput("convergence needs depth >= 1".into()));
    }
    let (of, og) = paired_orbits(f, g, depth, cfg)?;
    let distances: Vec<f64> = (0..=depth).map(|n| c0_distance(&of.maps[n], &og.maps[n], cfg)).collect();
    let refit_errors: Vec<f64> =
        (0..=depth).map(|n| if n == 0 { 0.0 } else { of.refit_errors[n - 1].max(og.refit_errors[n - 1]) }).collect();
    let fit_levels: Vec<usize> = (1..=depth)
        .filter(|&n| distances[n] > 0.0 && distances[n] >= cfg.noise_floor_factor * refit_errors[n])
        .collect();
    let xs: Vec<f64> = fit_levels.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = fit_levels.iter().map(|&n| distances[n].ln()).collect();
    let fit = if fit_levels.len() >= 2 { least_squares(&xs, &ys) } else { None };
    Ok(ConvergenceReport {
        distances,
        refit_errors,
        fitted_rate: fit.map(|(s, _, _)| s),
        fit_r2: fit.map(|(_, _, r2)| r2),
        degenerate: fit.is_none(),
        fit_levels,
        depth,
    })
}
