//! Tolerances, grid sizes and depth caps, collected in one serializable record.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Every tunable of the laboratory. Reports embed a copy of the effective value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Chebyshev degree used when (re)fitting diffeomorphism parts.
    pub degree: usize,
    /// Check and norm grids use `grid_factor * degree` points.
    pub grid_factor: usize,
    /// Largest return period tried by detection.
    pub l_max: usize,
    /// Below this `|f^l(0)|` detection reports a degenerate (superstable) map.
    pub a_min: f64,
    /// Absolute separation required between renormalization intervals.
    pub margin: f64,
    /// Allowed deviation of `phi(0)` from 1 for normalized maps.
    pub normalization_tol: f64,
    /// Allowed excess of `|phi|` over 1 on the check grid.
    pub range_tol: f64,
    /// Tail estimate above which a fit is flagged as ill-resolved.
    pub ill_resolved_tol: f64,
    /// Smallest admissible `|phi'|` for nonlinearity evaluation.
    pub near_singular_tol: f64,
    /// Maximum renormalization depth without `allow_deep`.
    pub depth_cap: usize,
    pub allow_deep: bool,
    /// Parameter scans use this fraction of the current window as grid step.
    pub scan_fraction: f64,
    /// Largest accepted bracket width of a superstable root.
    pub superstable_tol: f64,
    /// Target endpoint accuracy for window bisection.
    pub window_tol: f64,
    /// Initial offset from a superstable root for period verification; doubled up
    /// to the scan step until the type check passes.
    pub verify_offset: f64,
    /// Iteration budget `prod l_i` for superstable search.
    pub period_budget: usize,
    /// Depth of the superstable sequence behind the accelerated Feigenbaum point
    /// used by experiments.
    pub feigenbaum_depth: usize,
    /// Number of even polynomial bump directions in the perturbation basis.
    pub bump_count: usize,
    /// Rate fits drop levels with `d_n < noise_floor_factor * refit_error`.
    pub noise_floor_factor: f64,
    /// Largest bump amplitude scanned by the separation experiment.
    pub separation_t_max: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            degree: 64,
            grid_factor: 4,
            l_max: 64,
            a_min: 1e-8,
            margin: 1e-12,
            normalization_tol: 1e-12,
            range_tol: 1e-9,
            ill_resolved_tol: 1e-6,
            near_singular_tol: 1e-10,
            depth_cap: 12,
            allow_deep: false,
            scan_fraction: 1e-3,
            superstable_tol: 1e-13,
            window_tol: 1e-12,
            verify_offset: 1e-6,
            period_budget: 1 << 20,
            feigenbaum_depth: 12,
            bump_count: 4,
            noise_floor_factor: 1e2,
            separation_t_max: 0.5,
            seed: 42,
            output_dir: PathBuf::from("renormlab-out"),
        }
    }
}

impl Config {
    /// Parses a JSON config; missing fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Depth actually granted for a request of `n` levels.
    pub fn granted_depth(&self, n: usize) -> usize {
        if self.allow_deep {
            n
        } else {
            n.min(self.depth_cap)
        }
    }

    pub(crate) fn grid_points(&self, degree: usize) -> usize {
        (self.grid_factor * degree).max(16)
    }
}
