use serde::Serialize;

use super::convergence::paired_orbits;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::map_core::UnimodalMap;
use crate::renorm::{Interval, RenormOrbit};

/// Cylinder geometry of `f` and `g` at one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingLevel {
    pub depth: usize,
    /// `|f^i(J_n)|` for `i = 0..L_n`, in time order.
    pub lengths_f: Vec<f64>,
    pub lengths_g: Vec<f64>,
    /// Spread of `log` of the child-to-parent length ratio of `f` over that of `g`,
    /// the parent of cylinder `i` being cylinder `i mod L_{n-1}` one level up.
    pub max_log_ratio_spread: f64,
    /// Spread of `log(|f^i(J_n)| / |g^i(J'_n)|)`.
    pub raw_spread: f64,
}

/// Comparison of the cylinder geometry of two maps of the same type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub per_depth: Vec<ScalingLevel>,
    /// `a_n / a_{n+1}` of the cumulative rescalings, i.e. `1 / a_{n+1}`.
    pub rescaling_ratios_f: Vec<f64>,
    pub rescaling_ratios_g: Vec<f64>,
}

/// The `L_n` time-ordered images of `J_n = [-A_n, A_n]` under `f`, by endpoint
/// iteration with the fold at the first step.
pub fn cylinders(f: &UnimodalMap<f64>, half_width: f64, count: usize) -> Vec<Interval<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut cur = Interval { lo: -half_width, hi: half_width };
    for i in 0..count {
        out.push(cur);
        cur = if i == 0 {
            Interval::hull(f.phi.value(half_width * half_width), f.phi.value(0.0))
        } else {
            Interval::hull(f.apply(cur.lo), f.apply(cur.hi))
        };
    }
    out
}

fn check_disjoint(ivs: &[Interval<f64>], level: usize, which: &str) -> Result<()> {
    let mut sorted: Vec<&Interval<f64>> = ivs.iter().collect();
    sorted.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    for p in sorted.windows(2) {
        if !(p[0].hi < p[1].lo) || !(p[0].lo < p[0].hi) {
            return Err(Error::CorruptedGeometry {
                level,
                detail: format!("{which}: cylinders [{}, {}] and [{}, {}] overlap", p[0].lo, p[0].hi, p[1].lo, p[1].hi),
            });
        }
    }
    Ok(())
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

fn level_geometry(orbit: &RenormOrbit<f64>, depth: usize) -> Vec<(f64, usize)> {
    let mut half = 1.0;
    let mut period = 1;
    (0..=depth)
        .map(|n| {
            if n > 0 {
                half *= orbit.data[n - 1].a.abs();
                period *= orbit.data[n - 1].l;
            }
            (half, period)
        })
        .collect()
}

/// Cylinder length comparison of `f` and `g` at levels `1..=depth`.
pub fn rigidity_scaling(
    f: &UnimodalMap<f64>,
    g: &UnimodalMap<f64>,
    depth: usize,
    cfg: &Config,
) -> Result<ScalingReport> {
    if depth == 0 {
        return Err(Error::InvalidInput("rigidity_scaling needs depth >= 1".into()));
    }
    let (of, og) = paired_orbits(f, g, depth, cfg)?;
    let geo_f = level_geometry(&of, depth);
    let geo_g = level_geometry(&og, depth);
    let mut parent_f = vec![2.0];
    let mut parent_g = vec![2.0];
    let mut per_depth = Vec::with_capacity(depth);
    for n in 1..=depth {
        let (hf, count) = geo_f[n];
        let cf = cylinders(f, hf, count);
        let cg = cylinders(g, geo_g[n].0, count);
        check_disjoint(&cf, n, "f")?;
        check_disjoint(&cg, n, "g")?;
        let lengths_f: Vec<f64> = cf.iter().map(|iv| iv.len()).collect();
        let lengths_g: Vec<f64> = cg.iter().map(|iv| iv.len()).collect();
        let up = parent_f.len();
        let max_log_ratio_spread =
            spread((0..count).map(|i| ((lengths_f[i] / parent_f[i % up]) / (lengths_g[i] / parent_g[i % up])).ln()));
        let raw_spread = spread((0..count).map(|i| (lengths_f[i] / lengths_g[i]).ln()));
        per_depth.push(ScalingLevel {
            depth: n,
            lengths_f: lengths_f.clone(),
            lengths_g: lengths_g.clone(),
            max_log_ratio_spread,
            raw_spread,
        });
        parent_f = lengths_f;
        parent_g = lengths_g;
    }
    let ratios = |o: &RenormOrbit<f64>| o.rescalings.iter().map(|a| 1.0 / a).collect();
    Ok(ScalingReport { per_depth, rescaling_ratios_f: ratios(&of), rescaling_ratios_g: ratios(&og) })
}
