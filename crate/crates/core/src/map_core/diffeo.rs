use serde::{Deserialize, Serialize};

use crate::chebyshev;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

/// Smallest Chebyshev degree accepted for a diffeomorphism part.
pub const MIN_DEGREE: usize = 4;

/// Chebyshev representation of the diffeomorphism part `phi: [0, 1] -> [-1, 1]`
/// of a unimodal map `f = phi(x^2)`.
///
/// Coefficients refer to the basis `T_k(2y - 1)`. Derivative series are cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiffeoJson<T>", into = "DiffeoJson<T>", bound = "T: Scalar")]
pub struct DiffeoRep<T: Scalar> {
    coeffs: Vec<T>,
    normalized: bool,
    tail_estimate: T,
    ill_resolved: bool,
    len: usize,
    d1: Vec<T>,
    d2: Vec<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct DiffeoJson<T: Scalar> {
    degree: usize,
    coeffs: Vec<T>,
    normalized: bool,
}

impl<T: Scalar> TryFrom<DiffeoJson<T>> for DiffeoRep<T> {
    type Error = Error;

    fn try_from(j: DiffeoJson<T>) -> Result<Self> {
        if j.coeffs.len() != j.degree + 1 {
            return Err(Error::InvalidInput(format!(
                "degree {} needs {} coefficients, got {}",
                j.degree,
                j.degree + 1,
                j.coeffs.len()
            )));
        }
        DiffeoRep::from_coeffs(j.coeffs, j.normalized, &Config::default())
    }
}

impl<T: Scalar> From<DiffeoRep<T>> for DiffeoJson<T> {
    fn from(d: DiffeoRep<T>) -> Self {
        DiffeoJson { degree: d.degree(), coeffs: d.coeffs, normalized: d.normalized }
    }
}

impl<T: Scalar> DiffeoRep<T> {
    /// Builds a representation from Chebyshev coefficients, padding with zeros up
    /// to [`MIN_DEGREE`], and checks the diffeomorphism invariant on a
    /// `grid_factor * degree` grid. For `normalized` maps `phi(0) = 1` and
    /// `|phi| <= 1` are checked too.
    pub fn from_coeffs(mut coeffs: Vec<T>, normalized: bool, cfg: &Config) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("non-finite Chebyshev coefficient".into()));
        }
        if coeffs.len() < MIN_DEGREE + 1 {
            coeffs.resize(MIN_DEGREE + 1, T::zero());
        }
        let len = chebyshev::effective_len(&coeffs);
        let two = lit::<T>(2.0);
        let d1: Vec<T> = chebyshev::derivative(&coeffs[..len]).into_iter().map(|c| c * two).collect();
        let d2: Vec<T> = chebyshev::derivative(&d1).into_iter().map(|c| c * two).collect();
        let degree = coeffs.len() - 1;
        let tail_count = coeffs.len().div_ceil(10);
        let tail_estimate = coeffs[coeffs.len() - tail_count..].iter().fold(T::zero(), |acc, c| acc + c.abs());
        let rep = DiffeoRep {
            ill_resolved: to_f64(tail_estimate) > cfg.ill_resolved_tol,
            coeffs,
            normalized,
            tail_estimate,
            len,
            d1,
            d2,
        };
        rep.validate(cfg.grid_points(degree), cfg)?;
        Ok(rep)
    }

    fn validate(&self, points: usize, cfg: &Config) -> Result<()> {
        let ys = chebyshev::grid(T::zero(), T::one(), points);
        let sign = self.deriv(ys[0]).signum();
        for &y in &ys {
            let d = self.deriv(y);
            if d.is_zero() || d.signum() != sign || !d.is_finite() {
                return Err(Error::NotDiffeomorphism(format!(
                    "phi'({}) = {:e} changes sign or vanishes",
                    to_f64(y),
                    to_f64(d)
                )));
            }
        }
        if self.normalized {
            // configured tolerances are f64-sized; f32 refits need a few ulps
            let floor = 64.0 * to_f64(T::epsilon());
            let v0 = self.value(T::zero());
            if (to_f64(v0) - 1.0).abs() > cfg.normalization_tol.max(floor) {
                return Err(Error::NormalizationViolated { value: to_f64(v0) });
            }
            let peak = ys.iter().map(|&y| to_f64(self.value(y).abs())).fold(0.0, f64::max);
            if peak > 1.0 + cfg.range_tol.max(floor) {
                return Err(Error::RangeViolated { value: peak });
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    /// Sum of magnitudes of the trailing 10% of coefficients.
    pub fn tail_estimate(&self) -> T {
        self.tail_estimate
    }

    /// Set when the tail estimate exceeded the configured threshold at fit time.
    pub fn ill_resolved(&self) -> bool {
        self.ill_resolved
    }

    #[inline]
    pub fn value(&self, y: T) -> T {
        chebyshev::clenshaw(&self.coeffs[..self.len], y + y - T::one())
    }

    #[inline]
    pub fn deriv(&self, y: T) -> T {
        chebyshev::clenshaw(&self.d1, y + y - T::one())
    }

    #[inline]
    pub fn deriv2(&self, y: T) -> T {
        chebyshev::clenshaw(&self.d2, y + y - T::one())
    }
}

/// Interpolates `sampler` at the `degree + 1` Lobatto points of `[0, 1]`.
///
/// Fails when the interpolant is not a diffeomorphism on the check grid, or, with
/// `normalized`, when `phi(0) != 1` or `|phi| > 1`. A tail estimate above the
/// configured threshold only sets [`DiffeoRep::ill_resolved`].
pub fn fit_diffeo<T: Scalar>(
    sampler: impl Fn(T) -> T,
    degree: usize,
    normalized: bool,
    cfg: &Config,
) -> Result<DiffeoRep<T>> {
    if degree < MIN_DEGREE {
        return Err(Error::InvalidInput(format!("degree {degree} < {MIN_DEGREE}")));
    }
    let values: Vec<T> = chebyshev::unit_nodes::<T>(degree).into_iter().map(&sampler).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("sampler returned a non-finite value".into()));
    }
    let mut coeffs = chebyshev::interpolate(&values);
    // drop transform round-off so that derivative series of low-degree maps stay clean
    let scale = coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    let floor = lit::<T>(8.0) * T::epsilon() * scale;
    for c in coeffs.iter_mut() {
        if c.abs() < floor {
            *c = T::zero();
        }
    }
    DiffeoRep::from_coeffs(coeffs, normalized, cfg)
}

/// Exact Chebyshev coefficients of the affine map `y -> 1 - c y`, padded to `degree`.
pub fn affine_coeffs<T: Scalar>(c: T, degree: usize) -> Vec<T> {
    let half = lit::<T>(0.5);
    let mut coeffs = vec![T::zero(); degree.max(MIN_DEGREE) + 1];
    coeffs[0] = T::one() - half * c;
    coeffs[1] = -half * c;
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn affine_fit_is_exact() {
        let rep = fit_diffeo(|y: f64| 1.0 - 1.5 * y, 8, true, &cfg()).unwrap();
        assert_eq!(rep.degree(), 8);
        assert!(rep.tail_estimate() < 1e-15);
        assert!((rep.coeffs()[0] - 0.25).abs() < 1e-15);
        assert!((rep.coeffs()[1] + 0.75).abs() < 1e-15);
        assert!(!rep.ill_resolved());
    }

    #[test]
    fn cubic_off_node_error() {
        let f = |y: f64| 1.0 - 1.4 * y + 0.05 * y * y * y;
        let rep = fit_diffeo(f, 16, true, &cfg()).unwrap();
        // dense grid that avoids the Lobatto nodes
        let worst =
            (0..=1000).map(|i| (i as f64 + 0.37) / 1000.37).map(|y| (rep.value(y) - f(y)).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-13, "max error {worst:e}");
    }

    #[test]
    fn unnormalized_sampler_rejected() {
        let err = fit_diffeo(|y: f64| -y, 8, true, &cfg()).unwrap_err();
        assert!(matches!(err, Error::NormalizationViolated { .. }), "{err}");
        // same sampler is a fine diffeomorphism when not flagged normalized
        assert!(fit_diffeo(|y: f64| -y, 8, false, &cfg()).is_ok());
    }

    #[test]
    fn fold_rejected() {
        let err = fit_diffeo(|y: f64| 1.0 - 4.0 * (y - 0.5) * (y - 0.5), 8, false, &cfg()).unwrap_err();
        assert!(matches!(err, Error::NotDiffeomorphism(_)));
    }

    #[test]
    fn range_violation_rejected() {
        let err = fit_diffeo(|y: f64| 1.0 - 2.5 * y, 8, true, &cfg()).unwrap_err();
        assert!(matches!(err, Error::RangeViolated { .. }));
    }

    #[test]
    fn low_degree_rejected() {
        assert!(fit_diffeo(|y: f64| 1.0 - y, 3, true, &cfg()).is_err());
    }

    #[test]
    fn ill_resolved_flag() {
        // |y - 0.3|^{1.5}-type kink keeps a slowly decaying tail at degree 8
        let f = |y: f64| 1.0 - 1.5 * y + 0.05 * ((y - 0.3).abs().powf(1.5) - 0.3f64.powf(1.5));
        let rep = fit_diffeo(f, 8, true, &cfg()).unwrap();
        assert!(rep.tail_estimate() > 1e-6);
        assert!(rep.ill_resolved());
    }

    #[test]
    fn derivatives_match_closed_form() {
        let f = |y: f64| 1.0 - y - 0.1 * y * y;
        let rep = fit_diffeo(f, 8, true, &cfg()).unwrap();
        for i in 0..=10 {
            let y = i as f64 / 10.0;
            assert!((rep.deriv(y) - (-1.0 - 0.2 * y)).abs() < 1e-13);
            assert!((rep.deriv2(y) + 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn json_shape() {
        let rep = fit_diffeo(|y: f64| 1.0 - 1.5 * y, 4, true, &cfg()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["degree"], 4);
        assert_eq!(v["normalized"], true);
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 5);
        let back: DiffeoRep<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn json_degree_mismatch_rejected() {
        let bad = r#"{"degree": 5, "coeffs": [0.25, -0.75, 0, 0, 0], "normalized": true}"#;
        assert!(serde_json::from_str::<DiffeoRep<f64>>(bad).is_err());
    }
}
