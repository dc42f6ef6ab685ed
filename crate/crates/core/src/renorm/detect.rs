use serde::{Deserialize, Serialize};

use super::types::{Interval, Permutation, RenormData};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::map_core::UnimodalMap;
use crate::scalar::{lit, to_f64, Scalar};

/// Outcome of a renormalizability scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case", bound = "T: Scalar")]
pub enum Detection<T: Scalar> {
    Renormalizable(RenormData<T>),
    NotRenormalizable,
    /// `|f^l(0)|` fell below `a_min` at the first admissible `l`: the critical
    /// point is (numerically) periodic and `J` collapses to a point.
    Degenerate {
        l: usize,
        a: T,
    },
}

impl<T: Scalar> Detection<T> {
    pub fn data(&self) -> Option<&RenormData<T>> {
        match self {
            Detection::Renormalizable(d) => Some(d),
            _ => None,
        }
    }
}

/// Thresholds used by [`detect`].
#[derive(Debug, Clone, Copy)]
pub struct DetectParams {
    pub l_max: usize,
    pub a_min: f64,
    pub margin: f64,
}

impl From<&Config> for DetectParams {
    fn from(cfg: &Config) -> Self {
        DetectParams { l_max: cfg.l_max, a_min: cfg.a_min, margin: cfg.margin }
    }
}

/// Image of an interval that does not contain the critical point.
#[inline]
fn monotone_image<T: Scalar>(f: &UnimodalMap<T>, iv: &Interval<T>) -> Interval<T> {
    Interval::hull(f.apply(iv.lo), f.apply(iv.hi))
}

/// `f([-|a|, |a|])`, the one image that contains a fold.
#[inline]
pub(crate) fn fold_image<T: Scalar>(f: &UnimodalMap<T>, a: T) -> Interval<T> {
    Interval::hull(f.phi.value(a * a), f.phi.value(T::zero()))
}

/// Checks period `l` for `J = [-|a|, |a|]`, `a = f^l(0)`. Returns the time-ordered
/// intervals on success.
pub(crate) fn check_period<T: Scalar>(f: &UnimodalMap<T>, l: usize, a: T, margin: T) -> Option<Vec<Interval<T>>> {
    let one = T::one();
    let r = a.abs();
    let j = Interval { lo: -r, hi: r };
    if !(r < one) {
        return None;
    }
    let mut intervals = Vec::with_capacity(l);
    intervals.push(j);
    // fold: f(J) = [phi(a^2), phi(0)], phi(0) = 1 up to the fit
    let mut cur = fold_image(f, a);
    let slack = margin.max(lit::<T>(64.0) * T::epsilon());
    for _ in 1..l {
        if cur.lo < -one - slack || cur.hi > one + slack {
            return None;
        }
        if intervals.iter().any(|prev| !(prev.gap(&cur) > margin)) {
            return None;
        }
        intervals.push(cur);
        cur = monotone_image(f, &cur);
    }
    // cur = f^l(J); one endpoint is a itself, the other must lie strictly inside J
    let far = if (cur.lo - a).abs() <= (cur.hi - a).abs() { cur.hi } else { cur.lo };
    if !(far.abs() < r - margin) {
        return None;
    }
    Some(intervals)
}

/// Smallest period `l in [2, l_max]` for which `f` is renormalizable with
/// `J = [-|a|, |a|]`, `a = f^l(0)`: the images `f^i(J)`, `0 <= i < l`, are pairwise
/// separated by more than `margin` and `f^l(J)` is strictly inside `J`.
pub fn detect<T: Scalar>(f: &UnimodalMap<T>, params: DetectParams) -> Result<Detection<T>> {
    if params.l_max < 2 {
        return Err(Error::InvalidInput(format!("l_max = {} < 2", params.l_max)));
    }
    let a_min = lit::<T>(params.a_min);
    let margin = lit::<T>(params.margin);
    // critical orbit x_0 = 0, x_1 = 1, ...
    let mut orbit = Vec::with_capacity(params.l_max + 1);
    let mut x = T::zero();
    orbit.push(x);
    for _ in 0..params.l_max {
        x = f.apply(x);
        orbit.push(x);
    }
    for l in 2..=params.l_max {
        let a = orbit[l];
        if !a.is_finite() || a.abs() > T::one() + margin {
            continue;
        }
        if a.abs() < a_min {
            if orbit_points_separated(&orbit[1..l], margin.max(a_min)) {
                return Ok(Detection::Degenerate { l, a });
            }
            continue;
        }
        if let Some(intervals) = check_period(f, l, a, margin) {
            let mut data = RenormData { l, a, intervals, sigma: Permutation::doubling() };
            data.sigma = permutation(f, &data)?;
            return Ok(Detection::Renormalizable(data));
        }
    }
    Ok(Detection::NotRenormalizable)
}

/// Points `x_1 .. x_{l-1}` away from 0 and from each other: the point-interval
/// limit of the detection conditions.
fn orbit_points_separated<T: Scalar>(pts: &[T], sep: T) -> bool {
    pts.iter().enumerate().all(|(i, &p)| p.abs() > sep && pts[..i].iter().all(|&q| (p - q).abs() > sep))
}

/// Labels the intervals `1..l` from left to right and reads off `sigma(i) = j` when
/// `f` maps interval `i` into interval `j` (matched by the image midpoint).
pub fn permutation<T: Scalar>(f: &UnimodalMap<T>, data: &RenormData<T>) -> Result<Permutation> {
    let l = data.intervals.len();
    if l != data.l || l < 2 {
        return Err(Error::InconsistentDetection(format!("{} intervals for period {}", l, data.l)));
    }
    let mut order: Vec<usize> = (0..l).collect();
    order
        .sort_by(|&i, &j| data.intervals[i].lo.partial_cmp(&data.intervals[j].lo).unwrap_or(std::cmp::Ordering::Equal));
    let mut image = vec![0; l];
    for (label_minus_one, &t) in order.iter().enumerate() {
        let iv = &data.intervals[t];
        let img = if t == 0 { fold_image(f, data.a) } else { monotone_image(f, iv) };
        let m = img.mid();
        let target = order.iter().position(|&s| data.intervals[s].contains(m)).ok_or_else(|| {
            Error::InconsistentDetection(format!(
                "image midpoint {} of interval {} lies in no labeled interval",
                to_f64(m),
                label_minus_one + 1
            ))
        })?;
        image[label_minus_one] = target + 1;
    }
    let sigma = Permutation::new(image)
        .map_err(|e| Error::InconsistentDetection(format!("labels do not form a permutation: {e}")))?;
    if !sigma.is_single_cycle() {
        return Err(Error::InconsistentDetection(format!("{sigma} is not a single cycle")));
    }
    Ok(sigma)
}
