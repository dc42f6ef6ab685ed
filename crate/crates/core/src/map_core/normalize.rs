use super::diffeo::fit_diffeo;
use super::unimodal::UnimodalMap;
use crate::chebyshev;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Scalar};

type Handle<T> = Box<dyn Fn(T) -> T + Send + Sync>;

/// A unimodal map `f = phi_f(psi_f(x)^2)` given by two evaluable diffeomorphisms
/// together with the intervals they are defined on.
pub struct GeneralUnimodal<T: Scalar> {
    phi_f: Handle<T>,
    phi_domain: (T, T),
    psi_f: Handle<T>,
    psi_domain: (T, T),
}

impl<T: Scalar> GeneralUnimodal<T> {
    pub fn new(
        phi_f: impl Fn(T) -> T + Send + Sync + 'static,
        phi_domain: (T, T),
        psi_f: impl Fn(T) -> T + Send + Sync + 'static,
        psi_domain: (T, T),
    ) -> Self {
        GeneralUnimodal { phi_f: Box::new(phi_f), phi_domain, psi_f: Box::new(psi_f), psi_domain }
    }

    /// Wraps an already normalized map with `psi_f = id`.
    pub fn from_map(f: &UnimodalMap<T>) -> Self {
        let phi = f.phi.clone();
        GeneralUnimodal::new(move |y| phi.value(y), (T::zero(), T::one()), |x| x, (-T::one(), T::one()))
    }

    /// `f(x) = phi_f(psi_f(x)^2)`.
    pub fn apply(&self, x: T) -> T {
        let u = (self.psi_f)(x);
        (self.phi_f)(u * u)
    }
}

fn strictly_monotone<T: Scalar>(h: &dyn Fn(T) -> T, lo: T, hi: T, points: usize) -> Option<(T, T)> {
    let xs = chebyshev::grid(lo, hi, points);
    let vals: Vec<T> = xs.iter().map(|&x| h(x)).collect();
    let up = vals[1] > vals[0];
    for (i, w) in vals.windows(2).enumerate() {
        let ok = if up { w[1] > w[0] } else { w[1] < w[0] };
        if !ok {
            return Some((xs[i], xs[i + 1]));
        }
    }
    None
}

/// Affine normalization of a general unimodal map.
///
/// With `Phi = psi_f o phi_f` the map `psi_f o f o psi_f^{-1} = Phi o p` is
/// rescaled by `x -> x / s`, `s = Phi(0)`, giving
/// `phi_F(u) = Phi(s^2 u) / s` and `F(0) = 1`. The result is refit at `degree`.
pub fn normalize<T: Scalar>(g: &GeneralUnimodal<T>, degree: usize, cfg: &Config) -> Result<UnimodalMap<T>> {
    let points = cfg.grid_points(degree);
    if let Some((a, b)) = strictly_monotone(&*g.psi_f, g.psi_domain.0, g.psi_domain.1, points) {
        return Err(Error::NotMonotone(format!("psi_f between {} and {}", to_f64(a), to_f64(b))));
    }
    if let Some((a, b)) = strictly_monotone(&*g.phi_f, g.phi_domain.0, g.phi_domain.1, points) {
        return Err(Error::NotDiffeomorphism(format!("phi_f not monotone between {} and {}", to_f64(a), to_f64(b))));
    }
    let big_phi = |u: T| (g.psi_f)((g.phi_f)(u));
    let s = big_phi(T::zero());
    if !(s.abs() >= lit::<T>(1e-12)) {
        return Err(Error::DegenerateNormalization { value: to_f64(s.abs()) });
    }
    let s2 = s * s;
    let slack = lit::<T>(1e-12);
    if g.phi_domain.0 > slack || s2 > g.phi_domain.1 + slack {
        return Err(Error::Domain(format!(
            "induced domain [0, {}] not inside phi_f domain [{}, {}]",
            to_f64(s2),
            to_f64(g.phi_domain.0),
            to_f64(g.phi_domain.1)
        )));
    }
    for u in chebyshev::grid(T::zero(), T::one(), points) {
        let v = (g.phi_f)((s2 * u).min(g.phi_domain.1));
        if v < g.psi_domain.0 - slack || v > g.psi_domain.1 + slack {
            return Err(Error::Domain(format!("phi_f value {} outside psi_f domain", to_f64(v))));
        }
    }
    let phi = fit_diffeo(|u: T| big_phi((s2 * u).min(g.phi_domain.1)) / s, degree, true, cfg)?;
    Ok(UnimodalMap::new(phi, "normalized"))
}
