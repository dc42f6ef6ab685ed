//! Small scalar routines shared across modules: golden-section refinement,
//! grid suprema, bisection and least squares.

use crate::chebyshev;
use crate::scalar::{lit, Scalar};

/// Golden-section search for a maximum of `h` on `[a, b]`.
pub fn golden_max<T: Scalar>(h: impl Fn(T) -> T, mut a: T, mut b: T, iters: usize) -> (T, T) {
    let inv_phi = lit::<T>(0.618_033_988_749_894_8);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut h1 = h(x1);
    let mut h2 = h(x2);
    for _ in 0..iters {
        if h1 < h2 {
            a = x1;
            x1 = x2;
            h1 = h2;
            x2 = a + inv_phi * (b - a);
            h2 = h(x2);
        } else {
            b = x2;
            x2 = x1;
            h2 = h1;
            x1 = b - inv_phi * (b - a);
            h1 = h(x1);
        }
    }
    if h1 >= h2 {
        (x1, h1)
    } else {
        (x2, h2)
    }
}

/// Maximum of `h` over a Lobatto grid of `points + 1` nodes on `[lo, hi]`, followed
/// by one golden-section refinement around the grid argmax. The scan order is
/// fixed, so the result does not depend on scheduling.
pub fn grid_max<T: Scalar>(h: impl Fn(T) -> T, lo: T, hi: T, points: usize) -> (T, T) {
    let xs = chebyshev::grid(lo, hi, points);
    let mut best = 0;
    let mut best_val = T::neg_infinity();
    for (i, &x) in xs.iter().enumerate() {
        let v = h(x);
        if v > best_val || (v.is_nan() && !best_val.is_nan()) {
            best = i;
            best_val = v;
        }
    }
    if best_val.is_nan() {
        return (xs[best], best_val);
    }
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(points)];
    if b > a {
        let (xr, vr) = golden_max(&h, a, b, 60);
        if vr > best_val {
            return (xr, vr);
        }
    }
    (xs[best], best_val)
}

/// Bisection on a sign change of `h` in `[lo, hi]`. Stops when the bracket is
/// narrower than `tol` or cannot shrink any further.
pub fn bisect_sign<T: Scalar>(h: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> (T, T) {
    let mut hlo = h(lo);
    let two = lit::<T>(2.0);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        let hm = h(mid);
        if hm.is_zero() {
            return (mid, mid);
        }
        if (hm > T::zero()) == (hlo > T::zero()) {
            lo = mid;
            hlo = hm;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Bisection on a boolean predicate with `pred(inside) = true`, `pred(outside) = false`.
/// Returns the bracketing pair `(last_true, first_false)`.
pub fn bisect_predicate<T: Scalar>(pred: impl Fn(T) -> bool, mut inside: T, mut outside: T, tol: T) -> (T, T) {
    let two = lit::<T>(2.0);
    for _ in 0..200 {
        if (outside - inside).abs() <= tol {
            break;
        }
        let mid = (inside + outside) / two;
        if mid == inside || mid == outside {
            break;
        }
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    (inside, outside)
}

/// Ordinary least squares `y = intercept + slope * x`; returns `(slope, intercept, r2)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Some((slope, intercept, r2))
}
