use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Interval<T: Scalar> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    /// Interval spanned by two points in either order.
    pub fn hull(a: T, b: T) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn len(&self) -> T {
        self.hi - self.lo
    }

    pub fn mid(&self) -> T {
        (self.lo + self.hi) / (T::one() + T::one())
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Gap between two intervals, negative when they overlap.
    pub fn gap(&self, other: &Self) -> T {
        (other.lo - self.hi).max(self.lo - other.hi)
    }
}

/// Permutation of `{1, .., l}` stored as `image[i] = sigma(i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let l = image.len();
        let mut seen = vec![false; l + 1];
        for &j in &image {
            if j == 0 || j > l || seen[j] {
                return Err(Error::InvalidInput(format!("{image:?} is not a permutation of 1..={l}")));
            }
            seen[j] = true;
        }
        Ok(Permutation { image })
    }

    /// The doubling permutation `1 -> 2, 2 -> 1`.
    pub fn doubling() -> Self {
        Permutation { image: vec![2, 1] }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `sigma(i)` for a 1-based label.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    /// True when `sigma` is a single `l`-cycle.
    pub fn is_single_cycle(&self) -> bool {
        let l = self.len();
        if l == 0 {
            return false;
        }
        let mut i = 1;
        for step in 1..=l {
            i = self.apply(i);
            if i == 1 {
                return step == l;
            }
        }
        false
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().enumerate().map(|(i, j)| format!("{}->{}", i + 1, j)).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Renormalization type: the permutations of `f, Rf, R^2 f, ..` and their bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombType {
    perms: Vec<Permutation>,
    bound: usize,
}

impl CombType {
    pub fn new(perms: Vec<Permutation>) -> Result<Self> {
        if perms.is_empty() {
            return Err(Error::EmptyOrbit);
        }
        let bound = perms.iter().map(Permutation::len).max().unwrap_or(0);
        Ok(CombType { perms, bound })
    }

    /// `depth` copies of the doubling permutation.
    pub fn doubling(depth: usize) -> Result<Self> {
        CombType::new(vec![Permutation::doubling(); depth])
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn periods(&self) -> Vec<usize> {
        self.perms.iter().map(Permutation::len).collect()
    }

    /// Total return time `prod l_k` of the first `depth` levels.
    pub fn return_time(&self, depth: usize) -> usize {
        self.perms.iter().take(depth).map(Permutation::len).product()
    }

    /// First `depth` permutations, or `None` if fewer exist.
    pub fn prefix(&self, depth: usize) -> Option<CombType> {
        if depth == 0 || depth > self.perms.len() {
            return None;
        }
        CombType::new(self.perms[..depth].to_vec()).ok()
    }
}

/// Output of a successful detection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RenormData<T: Scalar> {
    /// Return period.
    pub l: usize,
    /// Signed rescaling `a = f^l(0)`.
    pub a: T,
    /// `J, f(J), .., f^{l-1}(J)` in time order.
    pub intervals: Vec<Interval<T>>,
    pub sigma: Permutation,
}

impl<T: Scalar> RenormData<T> {
    /// The central interval `J = [-|a|, |a|]`.
    pub fn central(&self) -> Interval<T> {
        self.intervals[0]
    }
}
