//! Numerical laboratory for the renormalization of even unimodal interval maps.
//!
//! Maps are normalized as `f(x) = phi(x^2)` on `[-1, 1]` with `f(0) = 1`, and `phi`
//! is held as a Chebyshev series. The crate provides the renormalization operator
//! `Rf(x) = f^l(a x) / a`, extraction of renormalization permutations, parameter
//! search in the quadratic family and in other one-parameter families, and a set
//! of experiments measuring convergence of renormalization, universal scalings and
//! combinatorial stability.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the usual `f64` instantiation. Experiments run in `f64`.

pub mod chebyshev;
pub mod config;
pub mod error;
pub mod experiments;
pub mod map_core;
pub mod numerics;
pub mod quad_family;
pub mod renorm;
pub mod rng;
pub mod scalar;

pub use config::Config;
pub use error::{Error, Result};
pub use scalar::Scalar;

pub type DiffeoRep64 = map_core::DiffeoRep<f64>;
pub type UnimodalMap64 = map_core::UnimodalMap<f64>;
pub type RenormData64 = renorm::RenormData<f64>;
pub type RenormOrbit64 = renorm::RenormOrbit<f64>;
pub type Detection64 = renorm::Detection<f64>;
pub type Window64 = quad_family::Window<f64>;
pub type SuperstableResult64 = quad_family::SuperstableResult<f64>;

pub type DiffeoRep32 = map_core::DiffeoRep<f32>;
pub type UnimodalMap32 = map_core::UnimodalMap<f32>;
pub type RenormOrbit32 = renorm::RenormOrbit<f32>;
