//! The real quadratic family `P_c(x) = 1 - c x^2` and generic one-parameter
//! families: superstable anchors, renormalization windows, the Feigenbaum point and
//! tuning to a target renormalization type.

mod family;
mod search;

pub use family::{
    quadratic, quadratic_critical_iterate, FnFamily, ParamFamily, PolynomialFamily, QuadraticFamily, QuadraticParam,
};
pub use search::{
    accumulation_point, aitken, feigenbaum_parameter, superstable, superstable_in, tune_to_type, window, window_chain,
    window_chain_partial, window_for, AccumulationEstimate, ChainLevel, SuperstableResult, TypePattern, Window,
};
