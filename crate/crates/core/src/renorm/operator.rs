use super::types::RenormData;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::map_core::{fit_diffeo, UnimodalMap};
use crate::scalar::Scalar;

/// The renormalization `Rf(x) = f^l(a x) / a`, returned as `phi_1 o p` with
/// `phi_1(y) = f^{l-1}(phi(a^2 y)) / a` refit at `degree`.
///
/// `phi_1(0) = f^l(0) / a = 1` holds by construction. A refit that is not a
/// diffeomorphism is reported as operator degeneracy; a large tail only sets the
/// ill-resolved flag on the result.
pub fn renormalize<T: Scalar>(
    f: &UnimodalMap<T>,
    data: &RenormData<T>,
    degree: usize,
    cfg: &Config,
) -> Result<UnimodalMap<T>> {
    let a = data.a;
    if !(a.abs() >= crate::scalar::lit::<T>(cfg.a_min)) {
        return Err(Error::OperatorDegeneracy(format!("|a| below a_min for period {}", data.l)));
    }
    let a2 = a * a;
    let steps = data.l - 1;
    let phi = fit_diffeo(|y: T| f.iterate(f.phi.value(a2 * y), steps) / a, degree, true, cfg)
        .map_err(|e| Error::OperatorDegeneracy(format!("refit at period {}: {e}", data.l)))?;
    let label = if f.label.is_empty() { "R".to_string() } else { format!("R[{}]", f.label) };
    Ok(UnimodalMap::new(phi, label))
}
