use serde::{Deserialize, Serialize};

use super::family::{ParamFamily, QuadraticFamily};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::{bisect_predicate, bisect_sign};
use crate::renorm::{comb_type, iterate, CombType, RenormOrbit};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Target renormalization type: either only the periods or the full permutations.
#[derive(Debug, Clone, PartialEq)]
pub enum TypePattern {
    Periods(Vec<usize>),
    Perms(CombType),
}

impl TypePattern {
    pub fn doubling(depth: usize) -> Self {
        TypePattern::Periods(vec![2; depth])
    }

    pub fn periods(&self) -> Vec<usize> {
        match self {
            TypePattern::Periods(p) => p.clone(),
            TypePattern::Perms(t) => t.periods(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TypePattern::Periods(p) => p.len(),
            TypePattern::Perms(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when the first `depth` detected levels of `orbit` agree with the pattern.
    pub fn matches<T: Scalar>(&self, orbit: &RenormOrbit<T>, depth: usize) -> bool {
        if orbit.depth() < depth || self.len() < depth {
            return false;
        }
        match self {
            TypePattern::Periods(p) => orbit.data[..depth].iter().zip(p).all(|(d, &l)| d.l == l),
            TypePattern::Perms(t) => orbit.data[..depth].iter().zip(t.perms()).all(|(d, s)| &d.sigma == s),
        }
    }
}

/// Parameter with a periodic critical point, the canonical anchor of a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SuperstableResult<T: Scalar> {
    pub c: T,
    /// Total return time `L = prod l_k`.
    pub period: usize,
    /// `|f_c^L(0)|` recomputed at `c`.
    pub residual: T,
    pub bracket_width: T,
}

/// Parameter interval on which maps are `certified_depth` times renormalizable with
/// the prefix `type_prefix`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Window<T: Scalar> {
    pub lo: T,
    pub hi: T,
    pub type_prefix: CombType,
    pub certified_depth: usize,
}

impl<T: Scalar> Window<T> {
    pub fn len(&self) -> T {
        self.hi - self.lo
    }

    pub fn mid(&self) -> T {
        (self.lo + self.hi) / lit(2.0)
    }

    pub fn contains(&self, c: T) -> bool {
        self.lo <= c && c <= self.hi
    }
}

/// One step of a recursive window narrowing.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ChainLevel<T: Scalar> {
    pub anchor: SuperstableResult<T>,
    pub window: Window<T>,
}

fn type_predicate<T: Scalar, F: ParamFamily<T> + ?Sized>(
    family: &F,
    t: T,
    pattern: &TypePattern,
    depth: usize,
    cfg: &Config,
) -> bool {
    match family.map_at(t, cfg) {
        Ok(f) => pattern.matches(&iterate(&f, depth, cfg), depth),
        Err(_) => false,
    }
}

/// Superstable parameter `t` in `search` with `f_t^L(0) = 0`, `L = prod periods`:
/// sign changes on a scan grid of step `scan_fraction * |search|`, bisection to
/// adjacent floats (well below `superstable_tol`), and verification that a map just
/// beside the root has the requested renormalization periods. The first verified root in scan order wins.
pub fn superstable_in<T: Scalar, F: ParamFamily<T> + ?Sized>(
    family: &F,
    periods: &[usize],
    search: (T, T),
    cfg: &Config,
) -> Result<SuperstableResult<T>> {
    if periods.is_empty() || periods.iter().any(|&l| l < 2) {
        return Err(Error::InvalidInput(format!("periods {periods:?} must be nonempty and >= 2")));
    }
    let period = periods
        .iter()
        .try_fold(1usize, |acc, &l| acc.checked_mul(l))
        .filter(|&p| p <= cfg.period_budget)
        .ok_or(Error::BudgetExceeded { period: periods.iter().product(), budget: cfg.period_budget })?;
    let (lo, hi) = search;
    if !(lo < hi) {
        return Err(Error::InvalidInput(format!("empty search window [{}, {}]", to_f64(lo), to_f64(hi))));
    }
    let width = hi - lo;
    let steps = (1.0 / cfg.scan_fraction).ceil().max(2.0) as usize;
    let h = width / from_usize(steps);
    let value = |t: T| family.critical_iterate(t, period, cfg).unwrap_or(T::nan());
    let grid: Vec<T> = (0..=steps).map(|i| if i == steps { hi } else { lo + h * from_usize(i) }).collect();
    let vals: Vec<T> = grid.iter().map(|&t| value(t)).collect();

    let mut brackets = Vec::new();
    for i in 0..steps {
        let (v0, v1) = (vals[i], vals[i + 1]);
        if v0.is_zero() {
            brackets.push((grid[i], grid[i]));
        } else if v1.is_zero() || v0.is_nan() || v1.is_nan() {
            continue;
        } else if (v0 > T::zero()) != (v1 > T::zero()) {
            brackets.push((grid[i], grid[i + 1]));
        }
    }
    if vals[steps].is_zero() {
        brackets.push((hi, hi));
    }
    if brackets.is_empty() {
        return Err(Error::NotFound(format!("f_t^{period}(0) has no sign change on [{}, {}]", to_f64(lo), to_f64(hi))));
    }

    let offset = lit::<T>(cfg.verify_offset).min(h);
    let pattern = TypePattern::Periods(periods.to_vec());
    let candidates = brackets.len();
    for (a, b) in brackets {
        // bisect down to adjacent floats: at large L the slope of f_t^L(0) turns a
        // bracket of width superstable_tol into a residual above 1e-12
        let (blo, bhi) = if a == b { (a, b) } else { bisect_sign(value, a, b, T::zero()) };
        if !(bhi - blo <= lit::<T>(cfg.superstable_tol)) {
            continue;
        }
        let (vlo, vhi) = (value(blo).abs(), value(bhi).abs());
        let c = if vlo <= vhi { blo } else { bhi };
        // the margin excludes a small neighbourhood of the root, whose size in t
        // depends on the parametrization: double the probe offset up to the grid step
        let probes = std::iter::successors(Some(offset), |&o| Some(o + o)).take_while(|&o| o <= h);
        let verified = probes
            .flat_map(|o| [c + o, c - o])
            .any(|t| t >= lo && t <= hi && type_predicate(family, t, &pattern, periods.len(), cfg));
        if verified {
            return Ok(SuperstableResult { c, period, residual: vlo.min(vhi), bracket_width: bhi - blo });
        }
    }
    Err(Error::NotFound(format!(
        "none of {candidates} roots of f_t^{period}(0) has renormalization periods {periods:?}"
    )))
}

/// Grows the window of `pattern[..depth]` outward from `anchor` inside `parent`,
/// stepping on the scan grid and bisecting each endpoint to `window_tol`.
fn grow_window<T: Scalar, F: ParamFamily<T> + ?Sized>(
    family: &F,
    pattern: &TypePattern,
    depth: usize,
    anchor: T,
    parent: (T, T),
    cfg: &Config,
) -> Result<(T, T)> {
    let (plo, phi) = parent;
    let h = (phi - plo) * lit(cfg.scan_fraction);
    let tol = lit::<T>(cfg.window_tol);
    let pred = |t: T| t >= plo && t <= phi && type_predicate(family, t, pattern, depth, cfg);
    let right = pred(anchor + h);
    let left = pred(anchor - h);
    if !right && !left {
        return Err(Error::InconsistentAnchor(format!(
            "type predicate false on both sides of anchor {}",
            to_f64(anchor)
        )));
    }
    let max_steps = (2.0 / cfg.scan_fraction).ceil() as usize + 2;
    let outer = |sign: T| -> T {
        let bound = if sign > T::zero() { phi } else { plo };
        let mut inside = anchor + sign * h;
        for k in 2..=max_steps {
            let next = anchor + sign * h * from_usize(k);
            let clipped = if sign > T::zero() { next.min(bound) } else { next.max(bound) };
            if !pred(clipped) {
                return bisect_predicate(pred, inside, clipped, tol).0;
            }
            if clipped == bound {
                return bound;
            }
            inside = clipped;
        }
        inside
    };
    let hi = if right { outer(T::one()) } else { bisect_predicate(pred, anchor - h, anchor + h, tol).0 };
    let lo = if left { outer(-T::one()) } else { bisect_predicate(pred, anchor + h, anchor - h, tol).0 };
    Ok((lo, hi))
}

/// Nested windows of `pattern[..k]` for `k = 1..=depth`, each anchored at the
/// superstable parameter of the same prefix found inside the previous window.
pub fn window_chain<T: Scalar, F: ParamFamily<T> + ?Sized>(
    family: &F,
    range: (T, T),
    pattern: &TypePattern,
    depth: usize,
    cfg: &Config,
) -> Result<Vec<ChainLevel<T>>> {
    match window_chain_partial(family, range, pattern, depth, cfg)? {
        (chain, None) => Ok(chain),
        (_, Some(e)) => Err(e),
    }
}

/// Like [`window_chain`], but keeps the levels found before the first failure and
/// returns that failure alongside them.
pub fn window_chain_partial<T: Scalar, F: ParamFamily<T> + ?Sized>(
    family: &F,
    range: (T, T),
    pattern: &TypePattern,
    depth: usize,
    cfg: &Config,
) -> Result<(Vec<ChainLevel<T>>, Option<Error>)> {
    if depth == 0 || pattern.len() < depth {
        return Err(Error::InvalidInput(format!("pattern of length {} for depth {depth}", pattern.len())));
    }
    let periods = pattern.periods();
    let mut parent = range;
    let mut chain = Vec::with_capacity(depth);
    for k in 1..=depth {
        match chain_level(family, pattern, &periods[..k], parent, cfg) {
            Ok(level) => {
                parent = (level.window.lo, level.window.hi);
                chain.push(level);
            }
            Err(e) => return Ok((chain, Some(e))),
        }
    }
    Ok((chain, None))
}

fn chain_level<T: Scalar, F: ParamFamily<T> + ?Sized>(
    family: &F,
    pattern: &TypePattern,
    periods: &[usize],
    parent: (T, T),
    cfg: &Config,
) -> Result<ChainLevel<T>> {
    let k = periods.len();
    let anchor = superstable_in(family, periods, parent, cfg)?;
    let (lo, hi) = grow_window(family, pattern, k, anchor.c, parent, cfg)?;
    let mid = (lo + hi) / lit(2.0);
    let orbit = iterate(&family.map_at(mid, cfg)?, k, cfg);
    if !pattern.matches(&orbit, k) {
        return Err(Error::InconsistentAnchor(format!(
            "window midpoint {} fails the depth-{k} predicate",
            to_f64(mid)
        )));
    }
    let type_prefix = comb_type(&orbit)?.prefix(k).ok_or(Error::EmptyOrbit)?;
    Ok(ChainLevel { anchor, window: Window { lo, hi, type_prefix, certified_depth: k } })
}

/// Superstable parameter of the quadratic family for a period prefix, searched in
/// `search` (default `[1, 2]`).
pub fn superstable<T: Scalar>(
    prefix: &[usize],
    search: Option<&Window<T>>,
    cfg: &Config,
) -> Result<SuperstableResult<T>> {
    let range = search.map_or((T::one(), lit(2.0)), |w| (w.lo, w.hi));
    superstable_in(&QuadraticFamily, prefix, range, cfg)
}

/// Quadratic-family window of the first `depth` permutations of `prefix_type`.
pub fn window<T: Scalar>(prefix_type: &CombType, depth: usize, cfg: &Config) -> Result<Window<T>> {
    window_for(&TypePattern::Perms(prefix_type.clone()), depth, cfg)
}

/// Quadratic-family window for a pattern.
pub fn window_for<T: Scalar>(pattern: &TypePattern, depth: usize, cfg: &Config) -> Result<Window<T>> {
    let chain = window_chain(&QuadraticFamily, (T::one(), lit(2.0)), pattern, depth, cfg)?;
    Ok(chain.into_iter().last().expect("depth >= 1").window)
}

/// Limit of a superstable sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct AccumulationEstimate<T: Scalar> {
    pub c_star: T,
    /// Raw superstable parameters `c_1, .., c_depth`.
    pub superstable: Vec<T>,
    pub accelerated: bool,
    pub warning: Option<String>,
}

/// Aitken's delta-squared extrapolation of the last three terms.
pub fn aitken<T: Scalar>(seq: &[T]) -> Option<T> {
    let n = seq.len();
    if n < 3 {
        return None;
    }
    let (x0, x1, x2) = (seq[n - 3], seq[n - 2], seq[n - 1]);
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let denom = d2 - d1;
    if denom.is_zero() || !denom.is_finite() {
        return None;
    }
    let est = x2 - d2 * d2 / denom;
    // the tail of a geometric sequence with ratio r lies within |d2| r / (1 - r);
    // accept ratios up to 1/2
    if est.is_finite() && (est - x2).abs() <= d2.abs() {
        Some(est)
    } else {
        None
    }
}

/// Accumulation point of the superstable anchors of `pattern[..k]`, `k <= depth`,
/// in `family`, by Aitken acceleration of the last three anchors.
pub fn accumulation_point<T: Scalar, F: ParamFamily<T> + ?Sized>(
    family: &F,
    range: (T, T),
    pattern: &TypePattern,
    depth: usize,
    cfg: &Config,
) -> Result<AccumulationEstimate<T>> {
    let chain = window_chain(family, range, pattern, depth, cfg)?;
    let superstable: Vec<T> = chain.iter().map(|lvl| lvl.anchor.c).collect();
    let last = *superstable.last().expect("nonempty chain");
    Ok(match aitken(&superstable) {
        Some(c_star) => AccumulationEstimate { c_star, superstable, accelerated: true, warning: None },
        None => AccumulationEstimate {
            c_star: last,
            superstable,
            accelerated: false,
            warning: Some("Aitken acceleration unavailable or divergent; returning last anchor".into()),
        },
    })
}

/// Feigenbaum point of the quadratic family from the doubling anchors up to `depth`.
pub fn feigenbaum_parameter<T: Scalar>(depth: usize, cfg: &Config) -> Result<AccumulationEstimate<T>> {
    if depth > 12 && !cfg.allow_deep {
        return Err(Error::InvalidInput(format!("depth {depth} > 12 requires allow_deep")));
    }
    accumulation_point(&QuadraticFamily, (T::one(), lit(2.0)), &TypePattern::doubling(depth), depth, cfg)
}

/// Parameter of `family` in `range` whose map has the first `depth` levels of
/// `prefix_type`: the midpoint of the innermost window of the recursive narrowing.
pub fn tune_to_type<T: Scalar, F: ParamFamily<T> + ?Sized>(
    family: &F,
    range: (T, T),
    prefix_type: &CombType,
    depth: usize,
    cfg: &Config,
) -> Result<T> {
    let pattern = TypePattern::Perms(prefix_type.clone());
    match window_chain(family, range, &pattern, depth, cfg) {
        Ok(chain) => Ok(chain.last().expect("depth >= 1").window.mid()),
        Err(Error::NotFound(m)) => Err(Error::NotBracketed(m)),
        Err(e) => Err(e),
    }
}
