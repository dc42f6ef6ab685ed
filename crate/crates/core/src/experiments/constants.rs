use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::map_core::nonlinearity;
use crate::quad_family::{aitken, quadratic, window_chain, window_chain_partial, QuadraticFamily, TypePattern, Window};
use crate::renorm::iterate;

/// A value attached to a level index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Indexed {
    pub n: usize,
    pub value: f64,
}

/// Universality probes along the doubling cascade.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsReport {
    pub depth: usize,
    /// Accelerated Feigenbaum point used for the rescalings and nonlinearities.
    pub c_star: f64,
    /// Superstable anchors `c_1, .., c_{depth+1}`.
    pub superstable: Vec<f64>,
    /// `(c_n - c_{n-1}) / (c_{n+1} - c_n)` for `n = 2..=depth`.
    pub delta_estimates: Vec<Indexed>,
    /// Aitken limit of the gap ratios, when available.
    pub delta_limit: Option<f64>,
    /// `|A_n / A_{n+1}|` with `A_n` the product of the first `n` rescalings, for
    /// `n = 0..depth`.
    pub alpha_estimates: Vec<Indexed>,
    /// `nl(phi_n)` of `R^n P_{c*}` for `n = 0..=depth`.
    pub nl_track: Vec<Indexed>,
}

/// Gap ratios `(c_n - c_{n-1}) / (c_{n+1} - c_n)` of a 1-indexed anchor sequence.
pub fn gap_ratios(anchors: &[f64]) -> Vec<Indexed> {
    (1..anchors.len().saturating_sub(1))
        .map(|i| Indexed { n: i + 1, value: (anchors[i] - anchors[i - 1]) / (anchors[i + 1] - anchors[i]) })
        .collect()
}

/// Feigenbaum constants from the quadratic family: delta from superstable gaps,
/// alpha from the rescalings at `c*`, and the nonlinearity of `R^n P_{c*}`.
pub fn constants(depth: usize, c_star: f64, cfg: &Config) -> Result<ConstantsReport> {
    if !(2..=10).contains(&depth) {
        return Err(Error::InvalidInput(format!("constants depth {depth} outside 2..=10")));
    }
    let chain = window_chain(&QuadraticFamily, (1.0, 2.0), &TypePattern::doubling(depth + 1), depth + 1, cfg)?;
    let superstable: Vec<f64> = chain.iter().map(|l| l.anchor.c).collect();
    let delta_estimates = gap_ratios(&superstable);
    let ratios: Vec<f64> = delta_estimates.iter().map(|e| e.value).collect();
    let delta_limit = aitken(&ratios);

    let orbit = iterate(&quadratic(c_star, cfg)?, depth, cfg);
    let alpha_estimates =
        orbit.rescalings.iter().enumerate().map(|(n, a)| Indexed { n, value: 1.0 / a.abs() }).collect();
    let nl_track = orbit
        .maps
        .iter()
        .enumerate()
        .map(|(n, m)| nonlinearity(&m.phi, cfg).map(|nl| Indexed { n, value: nl.value }))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstantsReport { depth, c_star, superstable, delta_estimates, delta_limit, alpha_estimates, nl_track })
}

/// Lengths of the nested doubling windows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowDecayReport {
    pub windows: Vec<Window<f64>>,
    pub lengths: Vec<f64>,
    /// `|window(n+1)| / |window(n)|`.
    pub ratios: Vec<f64>,
    /// Reason the cascade stopped before the requested depth.
    pub truncated: Option<String>,
}

/// Doubling windows of depth `1..=depth` and their length ratios.
pub fn window_decay(depth: usize, cfg: &Config) -> Result<WindowDecayReport> {
    if !(1..=8).contains(&depth) {
        return Err(Error::InvalidInput(format!("window_decay depth {depth} outside 1..=8")));
    }
    let (chain, failure) =
        window_chain_partial(&QuadraticFamily, (1.0, 2.0), &TypePattern::doubling(depth), depth, cfg)?;
    let windows: Vec<Window<f64>> = chain.into_iter().map(|l| l.window).collect();
    let lengths: Vec<f64> = windows.iter().map(|w| w.len()).collect();
    let ratios = lengths.windows(2).map(|p| p[1] / p[0]).collect();
    let truncated = failure.map(|e| format!("depth {}: {e}", lengths.len() + 1));
    Ok(WindowDecayReport { windows, lengths, ratios, truncated })
}
