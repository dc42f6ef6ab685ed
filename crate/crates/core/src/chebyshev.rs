//! Chebyshev series on the unit interval `[0, 1]`.
//!
//! A series `sum_k c_k T_k(2y - 1)` is stored by its coefficients. Interpolation
//! uses Chebyshev–Lobatto points so that both endpoints are nodes.

use crate::scalar::{from_usize, lit, Scalar};

/// `cos(pi * j / n)` for `j = 0..=n`, computed through `sin` for symmetric nodes.
pub(crate) fn lobatto_cos<T: Scalar>(n: usize) -> Vec<T> {
    let nn = from_usize::<T>(2 * n);
    (0..=n)
        .map(|j| {
            let m = n as i64 - 2 * j as i64;
            let arg = T::PI() * lit::<T>(m as f64) / nn;
            arg.sin()
        })
        .collect()
}

/// Lobatto nodes of `[0, 1]`, ordered from `y = 1` down to `y = 0`.
pub fn unit_nodes<T: Scalar>(n: usize) -> Vec<T> {
    let half = lit::<T>(0.5);
    let mut ys: Vec<T> = lobatto_cos::<T>(n).into_iter().map(|t| half + half * t).collect();
    // pin endpoints exactly
    ys[0] = T::one();
    ys[n] = T::zero();
    ys
}

/// Lobatto grid of `m + 1` points on `[lo, hi]`, in increasing order.
pub fn grid<T: Scalar>(lo: T, hi: T, m: usize) -> Vec<T> {
    let half = lit::<T>(0.5);
    let mid = half * (lo + hi);
    let rad = half * (hi - lo);
    let mut xs: Vec<T> = lobatto_cos::<T>(m).into_iter().rev().map(|t| mid + rad * t).collect();
    xs[0] = lo;
    xs[m] = hi;
    xs
}

/// Coefficients of the degree-`n` interpolant through `values[j] = f(y_j)` at
/// [`unit_nodes`]`(n)`.
pub fn interpolate<T: Scalar>(values: &[T]) -> Vec<T> {
    let n = values.len() - 1;
    assert!(n >= 1, "interpolation needs at least two nodes");
    // cos(pi * m / n) for m in 0..2n; entries of the DCT-I matrix are
    // cos(pi * j * k / n) = table[(j * k) mod 2n]
    let table: Vec<T> = (0..2 * n)
        .map(|m| {
            let arg = T::PI() * from_usize::<T>(m) / from_usize::<T>(n);
            arg.cos()
        })
        .collect();
    let half = lit::<T>(0.5);
    let scale = lit::<T>(2.0) / from_usize::<T>(n);
    (0..=n)
        .map(|k| {
            let mut acc = T::zero();
            for (j, &v) in values.iter().enumerate() {
                let w = if j == 0 || j == n { half } else { T::one() };
                acc = acc + w * v * table[(j * k) % (2 * n)];
            }
            let ck = scale * acc;
            if k == 0 || k == n {
                half * ck
            } else {
                ck
            }
        })
        .collect()
}

/// Clenshaw evaluation of `sum_k c_k T_k(t)`.
#[inline]
pub fn clenshaw<T: Scalar>(coeffs: &[T], t: T) -> T {
    let two_t = t + t;
    let mut b1 = T::zero();
    let mut b2 = T::zero();
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = c + two_t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    match coeffs.first() {
        Some(&c0) => c0 + t * b1 - b2,
        None => T::zero(),
    }
}

/// Coefficients of `d/dt` of a Chebyshev series (one degree lower, at least one entry).
pub fn derivative<T: Scalar>(coeffs: &[T]) -> Vec<T> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![T::zero()];
    }
    let mut d = vec![T::zero(); n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + lit::<T>(2.0) * from_usize::<T>(k) * coeffs[k];
    }
    d[0] = lit::<T>(0.5) * d[0];
    d.truncate(n - 1);
    d
}

/// Number of leading coefficients after dropping trailing exact zeros.
pub(crate) fn effective_len<T: Scalar>(coeffs: &[T]) -> usize {
    coeffs.iter().rposition(|c| !c.is_zero()).map_or(1, |i| i + 1)
}
