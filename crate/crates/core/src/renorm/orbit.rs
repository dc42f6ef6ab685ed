use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::detect::{detect, DetectParams, Detection};
use super::operator::renormalize;
use super::types::{CombType, RenormData};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::map_core::UnimodalMap;
use crate::scalar::{to_f64, Scalar};

/// Why an orbit stopped before the requested depth.
#[derive(Debug, Clone, PartialEq)]
pub enum Truncation {
    NotRenormalizable { level: usize },
    Degenerate { level: usize },
    IllResolved { level: usize },
    OperatorDegeneracy { level: usize, detail: String },
    DepthCap { cap: usize },
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::NotRenormalizable { level } => write!(f, "not_renormalizable at level {level}"),
            Truncation::Degenerate { level } => write!(f, "degenerate at level {level}"),
            Truncation::IllResolved { level } => write!(f, "ill_resolved refit at level {level}"),
            Truncation::OperatorDegeneracy { level, detail } => {
                write!(f, "operator_degeneracy at level {level}: {detail}")
            }
            Truncation::DepthCap { cap } => write!(f, "depth_cap {cap}"),
        }
    }
}

/// `f, Rf, R^2 f, ..` with the detection data of every renormalized level.
///
/// `data[k]` describes `maps[k]`. The last map has no data when the orbit ended at
/// the requested depth or on a failed detection; an ill-resolved refit is dropped,
/// so then `maps` and `data` have equal length.
#[derive(Debug, Clone)]
pub struct RenormOrbit<T: Scalar> {
    pub maps: Vec<UnimodalMap<T>>,
    pub data: Vec<RenormData<T>>,
    /// Tail estimate of each refit `R^{k+1} f`.
    pub refit_errors: Vec<T>,
    /// `a_1, a_2, ..` with `a_{k+1} = data[k].a`.
    pub rescalings: Vec<T>,
    pub truncated: Option<Truncation>,
}

impl<T: Scalar> RenormOrbit<T> {
    /// Number of detected levels.
    pub fn depth(&self) -> usize {
        self.data.len()
    }

    pub fn periods(&self) -> Vec<usize> {
        self.data.iter().map(|d| d.l).collect()
    }
}

impl<T: Scalar> Serialize for RenormOrbit<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Level<'a> {
            l: usize,
            a: f64,
            sigma: &'a [usize],
            refit_error: f64,
        }
        let levels: Vec<Level<'_>> = self
            .data
            .iter()
            .enumerate()
            .map(|(k, d)| Level {
                l: d.l,
                a: to_f64(d.a),
                sigma: d.sigma.image(),
                refit_error: self.refit_errors.get(k).map_or(f64::NAN, |e| to_f64(*e)),
            })
            .collect();
        let mut st = s.serialize_struct("RenormOrbit", 2)?;
        st.serialize_field("levels", &levels)?;
        st.serialize_field("truncated", &self.truncated.as_ref().map(|t| t.to_string()))?;
        st.end()
    }
}

/// Applies detection and renormalization up to `n` times.
///
/// Stops early on a non-renormalizable or degenerate level, an operator
/// degeneracy, an ill-resolved refit, or the configured depth cap.
pub fn iterate<T: Scalar>(f: &UnimodalMap<T>, n: usize, cfg: &Config) -> RenormOrbit<T> {
    let granted = cfg.granted_depth(n);
    let params = DetectParams::from(cfg);
    let mut orbit = RenormOrbit {
        maps: vec![f.clone()],
        data: Vec::new(),
        refit_errors: Vec::new(),
        rescalings: Vec::new(),
        truncated: None,
    };
    for level in 0..granted {
        let current = orbit.maps.last().expect("orbit starts with f");
        let data = match detect(current, params) {
            Ok(Detection::Renormalizable(d)) => d,
            Ok(Detection::NotRenormalizable) => {
                orbit.truncated = Some(Truncation::NotRenormalizable { level });
                return orbit;
            }
            Ok(Detection::Degenerate { .. }) => {
                orbit.truncated = Some(Truncation::Degenerate { level });
                return orbit;
            }
            Err(e) => {
                orbit.truncated = Some(Truncation::OperatorDegeneracy { level, detail: e.to_string() });
                return orbit;
            }
        };
        match renormalize(current, &data, cfg.degree, cfg) {
            Ok(next) => {
                let ill = next.phi.ill_resolved();
                orbit.refit_errors.push(next.phi.tail_estimate());
                orbit.rescalings.push(data.a);
                orbit.data.push(data);
                if ill {
                    orbit.truncated = Some(Truncation::IllResolved { level });
                    return orbit;
                }
                orbit.maps.push(next);
            }
            Err(e) => {
                orbit.truncated = Some(Truncation::OperatorDegeneracy { level, detail: e.to_string() });
                return orbit;
            }
        }
    }
    if granted < n {
        orbit.truncated = Some(Truncation::DepthCap { cap: granted });
    }
    orbit
}

/// Renormalization type of the detected levels of an orbit.
pub fn comb_type<T: Scalar>(orbit: &RenormOrbit<T>) -> Result<CombType> {
    if orbit.data.is_empty() {
        return Err(Error::EmptyOrbit);
    }
    CombType::new(orbit.data.iter().map(|d| d.sigma.clone()).collect())
}
