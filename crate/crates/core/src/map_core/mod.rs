//! Representation, evaluation, fitting, norms and normalization of even unimodal
//! maps `f = phi o p`, `p(x) = x^2`.

mod diffeo;
mod normalize;
mod unimodal;

pub use diffeo::{affine_coeffs, fit_diffeo, DiffeoRep, MIN_DEGREE};
pub use normalize::{normalize, GeneralUnimodal};
pub use unimodal::{c0_distance, c2_norm, eval_map, nonlinearity, Nonlinearity, UnimodalMap};
