//! Quantitative studies along renormalization orbits: convergence of `R^n f` and
//! `R^n g`, Lipschitz and separation constants of the operator, shadowing depth,
//! universal constants, window decay and cylinder geometry. All experiments run
//! in `f64` and draw randomness from per-trial seeded generators.

mod constants;
mod convergence;
mod csv_out;
mod lemmas;
mod perturb;
mod rigidity;

pub use constants::{constants, gap_ratios, window_decay, ConstantsReport, Indexed, WindowDecayReport};
pub use convergence::{convergence, ConvergenceReport};
pub use csv_out::ToCsv;
pub use lemmas::{
    composition_probe, flip_threshold, lipschitz_estimate, predicted_shadow_depth, separation, shadow_depth,
    CompositionReport, DirectionThreshold, LipschitzReport, SeparationReport, ShadowReport,
};
pub use perturb::{bump, combination, combination_norm, perturb, random_weights, trial_rng};
pub use rigidity::{cylinders, rigidity_scaling, ScalingLevel, ScalingReport};

use crate::config::Config;
use crate::error::Result;
use crate::map_core::UnimodalMap;
use crate::quad_family::{accumulation_point, feigenbaum_parameter, ParamFamily, PolynomialFamily, TypePattern};

/// Size of the cubic term of the default non-quadratic partner family
/// `phi_t(y) = 1 - t y + eps y^3`.
pub const PARTNER_EPS: f64 = 0.05;

/// Two infinitely renormalizable doubling maps from different families.
#[derive(Debug, Clone)]
pub struct FeigenbaumPair {
    pub c_star: f64,
    pub t_star: f64,
    pub quadratic: UnimodalMap<f64>,
    pub partner: UnimodalMap<f64>,
}

/// `P_{c*}` and the cubic-family map at its own accumulation point `t*`, both from
/// Aitken-accelerated superstable sequences of depth `feigenbaum_depth`.
pub fn feigenbaum_pair(cfg: &Config) -> Result<FeigenbaumPair> {
    let depth = cfg.feigenbaum_depth;
    let c_star = feigenbaum_parameter::<f64>(depth, cfg)?.c_star;
    let family = PolynomialFamily::cubic(PARTNER_EPS);
    let t_star = accumulation_point(&family, (1.0, 2.0), &TypePattern::doubling(depth), depth, cfg)?.c_star;
    Ok(FeigenbaumPair {
        c_star,
        t_star,
        quadratic: crate::quad_family::quadratic(c_star, cfg)?,
        partner: family.map_at(t_star, cfg)?,
    })
}
