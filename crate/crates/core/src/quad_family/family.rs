use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::map_core::{affine_coeffs, fit_diffeo, DiffeoRep, UnimodalMap, MIN_DEGREE};
use crate::scalar::{to_f64, Scalar};

/// The real quadratic map `P_c(x) = 1 - c x^2`, stored exactly as the affine
/// `phi(y) = 1 - c y` padded to the configured degree.
pub fn quadratic<T: Scalar>(c: T, cfg: &Config) -> Result<UnimodalMap<T>> {
    if !(c > T::zero() && c <= T::one() + T::one()) {
        return Err(Error::Domain(format!("quadratic parameter c = {} outside (0, 2]", to_f64(c))));
    }
    let phi = DiffeoRep::from_coeffs(affine_coeffs(c, cfg.degree), true, cfg)?;
    Ok(UnimodalMap::new(phi, format!("quadratic c={}", to_f64(c))))
}

/// Parameter of the quadratic family restricted to `[1, 2]`, where the dynamics
/// are not trivial.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct QuadraticParam(f64);

impl QuadraticParam {
    pub fn new(c: f64) -> Result<Self> {
        if (1.0..=2.0).contains(&c) {
            Ok(QuadraticParam(c))
        } else {
            Err(Error::Domain(format!("c = {c} outside [1, 2]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn map<T: Scalar>(self, cfg: &Config) -> Result<UnimodalMap<T>> {
        quadratic(crate::scalar::lit(self.0), cfg)
    }
}

impl TryFrom<f64> for QuadraticParam {
    type Error = Error;
    fn try_from(c: f64) -> Result<Self> {
        QuadraticParam::new(c)
    }
}

impl From<QuadraticParam> for f64 {
    fn from(c: QuadraticParam) -> f64 {
        c.0
    }
}

/// One-parameter family of normalized unimodal maps.
pub trait ParamFamily<T: Scalar> {
    fn map_at(&self, t: T, cfg: &Config) -> Result<UnimodalMap<T>>;

    /// `f_t^n(0)`, the quantity whose zeros are superstable parameters.
    fn critical_iterate(&self, t: T, n: usize, cfg: &Config) -> Result<T> {
        Ok(self.map_at(t, cfg)?.iterate(T::zero(), n))
    }
}

/// `t -> P_t`; critical iterates use the closed form, independent of the
/// Chebyshev representation.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadraticFamily;

impl<T: Scalar> ParamFamily<T> for QuadraticFamily {
    fn map_at(&self, t: T, cfg: &Config) -> Result<UnimodalMap<T>> {
        quadratic(t, cfg)
    }

    fn critical_iterate(&self, c: T, n: usize, _cfg: &Config) -> Result<T> {
        Ok(quadratic_critical_iterate(c, n))
    }
}

/// `P_c^n(0)` by direct iteration of `x -> 1 - c x^2`.
pub fn quadratic_critical_iterate<T: Scalar>(c: T, n: usize) -> T {
    let mut x = T::zero();
    for _ in 0..n {
        x = T::one() - c * x * x;
    }
    x
}

/// `phi_t(y) = sum_k (constant[k] + t * linear[k]) y^k`, described in JSON as
/// `{"constant": [..], "linear": [..], "range": [t_lo, t_hi]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialFamily {
    pub constant: Vec<f64>,
    #[serde(default)]
    pub linear: Vec<f64>,
    /// Parameter range searched when tuning; optional.
    #[serde(default)]
    pub range: Option<[f64; 2]>,
}

impl PolynomialFamily {
    /// `phi_t(y) = 1 - t y + eps y^3`.
    pub fn cubic(eps: f64) -> Self {
        PolynomialFamily { constant: vec![1.0, 0.0, 0.0, eps], linear: vec![0.0, -1.0], range: Some([1.0, 2.0]) }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("polynomial family: {e}")))
    }

    pub fn poly_degree(&self) -> usize {
        self.constant.len().max(self.linear.len()).saturating_sub(1)
    }

    /// Monomial coefficients of `phi_t`.
    pub fn coefficients(&self, t: f64) -> Vec<f64> {
        let n = self.poly_degree() + 1;
        (0..n)
            .map(|k| self.constant.get(k).copied().unwrap_or(0.0) + t * self.linear.get(k).copied().unwrap_or(0.0))
            .collect()
    }
}

impl<T: Scalar> ParamFamily<T> for PolynomialFamily {
    fn map_at(&self, t: T, cfg: &Config) -> Result<UnimodalMap<T>> {
        let n = self.poly_degree() + 1;
        let coeffs: Vec<T> = (0..n)
            .map(|k| {
                let c = crate::scalar::lit::<T>(self.constant.get(k).copied().unwrap_or(0.0));
                let l = crate::scalar::lit::<T>(self.linear.get(k).copied().unwrap_or(0.0));
                c + t * l
            })
            .collect();
        let horner = |y: T| coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * y + c);
        // exact at the polynomial's own degree; renormalization refits at cfg.degree
        let phi = fit_diffeo(horner, self.poly_degree().max(MIN_DEGREE), true, cfg)?;
        Ok(UnimodalMap::new(phi, format!("polynomial family t={}", to_f64(t))))
    }
}

/// Family given by a closure.
pub struct FnFamily<F>(pub F);

impl<T: Scalar, F> ParamFamily<T> for FnFamily<F>
where
    F: Fn(T, &Config) -> Result<UnimodalMap<T>>,
{
    fn map_at(&self, t: T, cfg: &Config) -> Result<UnimodalMap<T>> {
        (self.0)(t, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_core::{eval_map, nonlinearity};

    #[test]
    fn full_map() {
        let f = quadratic(2.0f64, &Config::default()).unwrap();
        assert_eq!(eval_map(&f, 1.0, 0).unwrap(), -1.0);
        assert_eq!(eval_map(&f, -1.0, 0).unwrap(), -1.0);
    }

    #[test]
    fn superstable_period_two_closed_form() {
        let f = quadratic(1.0f64, &Config::default()).unwrap();
        assert_eq!(f.iterate(0.0, 2), 0.0);
        assert_eq!(quadratic_critical_iterate(1.0f64, 2), 0.0);
    }

    #[test]
    fn affine_phi_has_zero_nonlinearity() {
        let cfg = Config::default();
        for c in [0.3, 1.0, 1.4, 1.9, 2.0] {
            let f = quadratic(c, &cfg).unwrap();
            assert_eq!(nonlinearity(&f.phi, &cfg).unwrap().value, 0.0);
        }
    }

    #[test]
    fn parameter_domain() {
        let cfg = Config::default();
        assert!(quadratic(0.0f64, &cfg).is_err());
        assert!(quadratic(2.0001f64, &cfg).is_err());
        assert!(QuadraticParam::new(0.9).is_err());
        assert!(QuadraticParam::new(1.5).is_ok());
        assert!(serde_json::from_str::<QuadraticParam>("2.5").is_err());
    }

    #[test]
    fn polynomial_family_matches_monomials() {
        let cfg = Config::default();
        let fam = PolynomialFamily::cubic(0.05);
        let f: UnimodalMap<f64> = fam.map_at(1.4, &cfg).unwrap();
        for i in 0..=20 {
            let x = -1.0 + i as f64 / 10.0;
            let y = x * x;
            assert!((f.apply(x) - (1.0 - 1.4 * y + 0.05 * y * y * y)).abs() < 1e-14);
        }
        let parsed = PolynomialFamily::from_json(r#"{"constant":[1,0,0,0.05],"linear":[0,-1],"range":[1,2]}"#).unwrap();
        assert_eq!(parsed, fam);
    }
}
