//! Renormalizability detection, the renormalization operator, permutations and
//! iterated renormalization orbits.

mod detect;
mod operator;
mod orbit;
mod types;

pub use detect::{detect, permutation, DetectParams, Detection};
pub use operator::renormalize;
pub use orbit::{comb_type, iterate, RenormOrbit, Truncation};
pub use types::{CombType, Interval, Permutation, RenormData};
