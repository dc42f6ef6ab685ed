use serde::{Deserialize, Serialize};

use super::diffeo::DiffeoRep;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics;
use crate::scalar::{lit, to_f64, Scalar};

/// Even unimodal map `f(x) = phi(x^2)` on `I = [-1, 1]` with critical point 0.
///
/// Evaluation always goes through `x * x`, so `f(x) == f(-x)` bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct UnimodalMap<T: Scalar> {
    pub phi: DiffeoRep<T>,
    pub label: String,
}

impl<T: Scalar> UnimodalMap<T> {
    pub fn new(phi: DiffeoRep<T>, label: impl Into<String>) -> Self {
        UnimodalMap { phi, label: label.into() }
    }

    /// `f(x)` without a domain check.
    #[inline]
    pub fn apply(&self, x: T) -> T {
        self.phi.value(x * x)
    }

    /// `f'(x) = 2 x phi'(x^2)` without a domain check.
    #[inline]
    pub fn slope(&self, x: T) -> T {
        (x + x) * self.phi.deriv(x * x)
    }

    /// `f^n(x)`.
    pub fn iterate(&self, x: T, n: usize) -> T {
        (0..n).fold(x, |acc, _| self.apply(acc))
    }

    pub fn degree(&self) -> usize {
        self.phi.degree()
    }
}

/// Evaluates `f` (order 0) or `f'` (order 1) at `x in [-1, 1]`.
pub fn eval_map<T: Scalar>(f: &UnimodalMap<T>, x: T, order: u8) -> Result<T> {
    if !(x.abs() <= T::one() + lit::<T>(1e-12)) {
        return Err(Error::Domain(format!("|x| = {} exceeds 1", to_f64(x.abs()))));
    }
    match order {
        0 => Ok(f.apply(x)),
        1 => Ok(f.slope(x)),
        _ => Err(Error::InvalidInput(format!("order {order} not in {{0, 1}}"))),
    }
}

/// Sup distance `||f - g||` on `[-1, 1]`: maximum over a Lobatto grid with
/// `grid_factor * max(degree)` points, refined once by golden section around the
/// grid argmax. This is a lower bound certified to the grid.
pub fn c0_distance<T: Scalar>(f: &UnimodalMap<T>, g: &UnimodalMap<T>, cfg: &Config) -> T {
    let points = cfg.grid_points(f.degree().max(g.degree()));
    let (_, d) = numerics::grid_max(|x| (f.apply(x) - g.apply(x)).abs(), -T::one(), T::one(), points);
    d
}

/// Nonlinearity `sup |phi''/phi'|` over `[0, 1]`, with the fit's ill-resolved flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct Nonlinearity<T: Scalar> {
    pub value: T,
    pub ill_resolved: bool,
}

/// Grid maximum of `|phi''/phi'|` with one local refinement.
pub fn nonlinearity<T: Scalar>(phi: &DiffeoRep<T>, cfg: &Config) -> Result<Nonlinearity<T>> {
    let points = cfg.grid_points(phi.degree());
    let tol = lit::<T>(cfg.near_singular_tol);
    for y in crate::chebyshev::grid(T::zero(), T::one(), points) {
        let d = phi.deriv(y).abs();
        if d < tol {
            return Err(Error::NearSingular { value: to_f64(d), at: to_f64(y) });
        }
    }
    let (_, value) = numerics::grid_max(|y| (phi.deriv2(y) / phi.deriv(y)).abs(), T::zero(), T::one(), points);
    Ok(Nonlinearity { value, ill_resolved: phi.ill_resolved() })
}

/// Grid estimate of `||phi||_{C^2} = sup|phi| + sup|phi'| + sup|phi''|`.
pub fn c2_norm<T: Scalar>(phi: &DiffeoRep<T>, cfg: &Config) -> T {
    let points = cfg.grid_points(phi.degree());
    let sup = |h: &dyn Fn(T) -> T| numerics::grid_max(|y| h(y).abs(), T::zero(), T::one(), points).1;
    sup(&|y| phi.value(y)) + sup(&|y| phi.deriv(y)) + sup(&|y| phi.deriv2(y))
}

#[cfg(test)]
mod tests {
    use super::super::diffeo::{affine_coeffs, fit_diffeo};
    use super::*;

    fn quad(c: f64) -> UnimodalMap<f64> {
        let cfg = Config::default();
        UnimodalMap::new(DiffeoRep::from_coeffs(affine_coeffs(c, 64), true, &cfg).unwrap(), "q")
    }

    #[test]
    fn eval_quadratic() {
        let f = quad(1.5);
        assert_eq!(eval_map(&f, 0.0, 0).unwrap(), 1.0);
        assert!((eval_map(&f, 1.0, 0).unwrap() + 0.5).abs() < 1e-15);
        assert!((eval_map(&f, 0.5, 1).unwrap() + 1.5).abs() < 1e-15);
    }

    #[test]
    fn refit_quadratic_matches_closed_form() {
        let cfg = Config::default();
        let phi = fit_diffeo(|y: f64| 1.0 - 1.3 * y, 64, true, &cfg).unwrap();
        let f = UnimodalMap::new(phi, "refit");
        let v = eval_map(&f, 0.7, 0).unwrap();
        assert!((v - (1.0 - 1.3 * 0.49)).abs() < 1e-12);
    }

    #[test]
    fn domain_and_order_errors() {
        let f = quad(1.5);
        assert!(matches!(eval_map(&f, 1.0 + 1e-9, 0), Err(Error::Domain(_))));
        assert!(eval_map(&f, 1.0 + 1e-13, 0).is_ok());
        assert!(matches!(eval_map(&f, 0.2, 2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn distance_examples() {
        let cfg = Config::default();
        assert!((c0_distance(&quad(1.5), &quad(1.4), &cfg) - 0.1).abs() < 1e-14);
        assert_eq!(c0_distance(&quad(1.5), &quad(1.5), &cfg), 0.0);
        // g = f + 0.01 (1 - x^2), an unnormalized comparison map
        let g = fit_diffeo(|y: f64| 1.0 - 1.3 * y + 0.01 * (1.0 - y), 64, false, &cfg).unwrap();
        let d = c0_distance(&quad(1.3), &UnimodalMap::new(g, "bumped"), &cfg);
        assert!((d - 0.01).abs() < 1e-10);
    }

    #[test]
    fn nonlinearity_examples() {
        let cfg = Config::default();
        let affine = fit_diffeo(|y: f64| 1.0 - 0.7 * y, 16, true, &cfg).unwrap();
        let v = nonlinearity(&affine, &cfg).unwrap().value;
        assert!(v < 1e-12, "{v}");
        let curved = fit_diffeo(|y: f64| 1.0 - y - 0.1 * y * y, 16, true, &cfg).unwrap();
        let nl = nonlinearity(&curved, &cfg).unwrap();
        assert!((nl.value - 0.2).abs() < 1e-12, "{}", nl.value);
        assert!(!nl.ill_resolved);
    }

    #[test]
    fn nonlinearity_propagates_ill_resolved() {
        let cfg = Config::default();
        let f = |y: f64| 1.0 - 1.5 * y + 0.05 * ((y - 0.3).abs().powf(1.5) - 0.3f64.powf(1.5));
        let phi = fit_diffeo(f, 8, true, &cfg).unwrap();
        let nl = nonlinearity(&phi, &cfg).unwrap();
        assert!(nl.ill_resolved);
        assert!(nl.value.is_finite());
    }

    #[test]
    fn nonlinearity_near_singular() {
        let cfg = Config::default();
        // phi' = -3 y^2 vanishes at 0: grid check rejects it as a diffeomorphism,
        // so build a nearly flat one instead
        let phi = fit_diffeo(|y: f64| 1.0 - 1e-12 * y, 8, true, &cfg).unwrap();
        assert!(matches!(nonlinearity(&phi, &cfg), Err(Error::NearSingular { .. })));
    }
}
