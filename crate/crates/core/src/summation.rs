//! Deterministic tree reductions.
//!
//! The split points depend only on the slice length, so the floating-point
//! result is identical for every thread count.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::scalar::Real;

const LEAF: usize = 32;
const PAR_MIN: usize = 1 << 14;

/// Values that can be accumulated by the tree reductions.
pub trait Summand: Copy + Send + Sync + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<S> Summand for S where S: Copy + Send + Sync + Zero + Add<Output = S> + Sub<Output = S> {}

/// Pairwise (cascade) summation.
pub fn pairwise_sum<S: Summand>(xs: &[S]) -> S {
    if xs.len() <= LEAF {
        return xs.iter().fold(S::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    let (lo, hi) = xs.split_at(mid);
    if xs.len() >= PAR_MIN {
        let (a, b) = rayon::join(|| pairwise_sum(lo), || pairwise_sum(hi));
        a + b
    } else {
        pairwise_sum(lo) + pairwise_sum(hi)
    }
}

/// Pairwise summation of `f(0), ..., f(len - 1)` without materialising the terms.
///
/// Uses the same split points as [`pairwise_sum`], so both agree bit for bit.
pub fn pairwise_sum_by<S: Summand, F: Fn(usize) -> S + Sync>(len: usize, f: &F) -> S {
    sum_range(0, len, f)
}

fn sum_range<S: Summand, F: Fn(usize) -> S + Sync>(lo: usize, hi: usize, f: &F) -> S {
    let len = hi - lo;
    if len <= LEAF {
        return (lo..hi).fold(S::zero(), |acc, i| acc + f(i));
    }
    let mid = lo + len / 2;
    if len >= PAR_MIN {
        let (a, b) = rayon::join(|| sum_range(lo, mid, f), || sum_range(mid, hi, f));
        a + b
    } else {
        sum_range(lo, mid, f) + sum_range(mid, hi, f)
    }
}

/// Tree mean combining sub-means as `m = m_lo + (m_hi - m_lo) · n_hi / n`.
///
/// A constant input is reproduced exactly, whatever its length.
pub fn pairwise_mean<T: Real, S: Summand + Mul<T, Output = S>>(xs: &[S]) -> S {
    if xs.is_empty() {
        return S::zero();
    }
    if xs.len() <= LEAF {
        let mut m = xs[0];
        for (k, &x) in xs.iter().enumerate().skip(1) {
            m = m + (x - m) * T::lit(1.0 / (k as f64 + 1.0));
        }
        return m;
    }
    let mid = xs.len() / 2;
    let (lo, hi) = xs.split_at(mid);
    let (a, b) = if xs.len() >= PAR_MIN {
        rayon::join(|| pairwise_mean::<T, S>(lo), || pairwise_mean::<T, S>(hi))
    } else {
        (pairwise_mean::<T, S>(lo), pairwise_mean::<T, S>(hi))
    };
    a + (b - a) * T::lit(hi.len() as f64 / xs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn constant_mean_is_exact() {
        for &v in &[0.1f64, 1.0 / 3.0, -2.5e-7, 0.7310585786300049] {
            for &n in &[1usize, 7, 33, 1000, 65_537, 1_000_000] {
                let xs = vec![v; n];
                assert_eq!(pairwise_mean::<f64, f64>(&xs), v, "v={v} n={n}");
            }
        }
    }

    #[test]
    fn indexed_sum_matches_slice_sum() {
        let xs: Vec<f64> = (0..100_000).map(|i| ((i * 7919) % 1000) as f64 * 1e-3 - 0.4).collect();
        assert_eq!(pairwise_sum(&xs), pairwise_sum_by(xs.len(), &|i| xs[i]));
    }

    #[test]
    fn sum_of_unit_roots_is_small() {
        let n = 10_000;
        let xs: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        assert!(pairwise_sum(&xs).norm() < 1e-11);
    }

    proptest! {
        #[test]
        fn mean_matches_sum_over_len(xs in proptest::collection::vec(-1.0f64..1.0, 1..5000)) {
            let m = pairwise_mean::<f64, f64>(&xs);
            let s = pairwise_sum(&xs) / xs.len() as f64;
            prop_assert!((m - s).abs() < 1e-13);
        }
    }
}
