use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use super::sequence::BoundedSequence;
use crate::arith::MultiplicativeTable;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::summation::pairwise_sum_by;

/// `Σ_{m ≤ M} F(p1 m) conj(F(p2 m))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCorrelation<T = f64> {
    pub p1: u64,
    pub p2: u64,
    pub m: u64,
    pub sum: Complex<T>,
    /// `|sum| / M`.
    pub normalized: T,
}

pub fn bilinear_sum<T: Real>(f: &BoundedSequence<T>, p1: u64, p2: u64, m: u64) -> Result<PairCorrelation<T>> {
    if p1 == p2 {
        return Err(Error::Domain(format!("pair correlation needs distinct primes, got {p1} twice")));
    }
    if m == 0 {
        return Err(Error::Domain("pair correlation needs M >= 1".into()));
    }
    let top = p1.max(p2).checked_mul(m).ok_or(Error::Overflow("bilinear sum index"))?;
    f.require(top)?;
    let sum = pairwise_sum_by(m as usize, &|i| {
        let k = i as u64 + 1;
        f.eval(p1 * k) * f.eval(p2 * k).conj()
    });
    Ok(PairCorrelation {
        p1,
        p2,
        m,
        sum,
        normalized: sum.norm() / T::of_i64(m as i64),
    })
}

/// Length policy for pair correlations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "policy", content = "m")]
pub enum PairLength {
    /// `M = floor(N / max(p1, p2))`, so every sampled product stays `<= N`.
    UpTo(u64),
    Fixed(u64),
}

impl PairLength {
    pub fn length(&self, p1: u64, p2: u64) -> u64 {
        match *self {
            PairLength::UpTo(n) => n / p1.max(p2),
            PairLength::Fixed(m) => m,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TauEstimate<T = f64> {
    pub tau_hat: T,
    pub worst_pair: (u64, u64),
    pub pairs: Vec<PairCorrelation<T>>,
    pub excluded: Vec<(u64, u64)>,
}

fn same_pair(a: (u64, u64), b: (u64, u64)) -> bool {
    a == b || a == (b.1, b.0)
}

/// Maximum normalised correlation over unordered pairs of distinct primes
/// `<= cutoff`, skipping the excluded pairs.
pub fn tau_estimate<T: Real>(
    f: &BoundedSequence<T>,
    cutoff: f64,
    length: PairLength,
    excluded: &[(u64, u64)],
) -> Result<TauEstimate<T>> {
    if !(cutoff >= 3.0) {
        return Err(Error::EmptyPairSet { cutoff });
    }
    let primes = crate::arith::sieve_primes(cutoff.floor() as u64)?;
    let mut todo = Vec::new();
    for (i, &p1) in primes.primes().iter().enumerate() {
        for &p2 in &primes.primes()[i + 1..] {
            if !excluded.iter().any(|&e| same_pair(e, (p1, p2))) {
                todo.push((p1, p2));
            }
        }
    }
    if todo.is_empty() {
        return Err(Error::EmptyPairSet { cutoff });
    }
    let pairs = todo
        .par_iter()
        .map(|&(p1, p2)| bilinear_sum(f, p1, p2, length.length(p1, p2)))
        .collect::<Result<Vec<_>>>()?;
    // first maximum in pair order, so ties resolve deterministically
    let mut best = 0;
    for (i, p) in pairs.iter().enumerate() {
        if p.normalized > pairs[best].normalized {
            best = i;
        }
    }
    Ok(TauEstimate {
        tau_hat: pairs[best].normalized,
        worst_pair: (pairs[best].p1, pairs[best].p2),
        excluded: excluded.to_vec(),
        pairs,
    })
}

/// `2 √(τ ln(1/τ)) N` for `0 < τ < 1`.
pub fn vinogradov_bound(tau: f64, n: u64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!("bound needs 0 < tau < 1, got {tau}")));
    }
    Ok(2.0 * (tau * (1.0 / tau).ln()).sqrt() * n as f64)
}

/// `Σ_{n ≤ N} ν(n) F(n)` by pairwise summation.
pub fn weighted_sum<T: Real>(nu: &MultiplicativeTable<T>, f: &BoundedSequence<T>, n: u64) -> Result<Complex<T>> {
    nu.require(n)?;
    f.require(n)?;
    Ok(pairwise_sum_by(n as usize, &|i| {
        let k = i as u64 + 1;
        nu.value(k) * f.eval(k)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_mobius;
    use crate::symbolic::SymReal;

    fn one() -> BoundedSequence<f64> {
        BoundedSequence::constant(Complex::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn constant_sequence_correlates_fully() {
        let c = bilinear_sum(&one(), 2, 3, 100).unwrap();
        assert_eq!(c.sum, Complex::new(100.0, 0.0));
        assert_eq!(c.normalized, 1.0);
        let t = tau_estimate(&one(), 3.0, PairLength::Fixed(10), &[]).unwrap();
        assert_eq!((t.tau_hat, t.worst_pair), (1.0, (2, 3)));
        assert!(matches!(tau_estimate(&one(), 2.9, PairLength::Fixed(10), &[]), Err(Error::EmptyPairSet { .. })));
        assert!(matches!(tau_estimate(&one(), 3.0, PairLength::Fixed(10), &[(3, 2)]), Err(Error::EmptyPairSet { .. })));
    }

    #[test]
    fn swap_conjugates() {
        let f = BoundedSequence::<f64>::exponential(&SymReal::sqrt(3));
        let a = bilinear_sum(&f, 5, 7, 1000).unwrap();
        let b = bilinear_sum(&f, 7, 5, 1000).unwrap();
        assert!((a.sum - b.sum.conj()).norm() < 1e-10);
    }

    #[test]
    fn bound_values() {
        let inv_e = (-1.0f64).exp();
        assert!((vinogradov_bound(inv_e, 1).unwrap() - 1.2130613194252668).abs() < 1e-15);
        assert!((vinogradov_bound(0.01, 1_000_000).unwrap() - 429193.20525786945).abs() < 1e-6);
        assert!(vinogradov_bound(1.0, 5).is_err());
        assert!(vinogradov_bound(0.0, 5).is_err());
        let mut prev = 0.0;
        for k in 1..=100 {
            let b = vinogradov_bound(inv_e * k as f64 / 100.0, 1).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn mobius_weighted_sums() {
        let mu = sieve_mobius::<f64>(100).unwrap();
        assert_eq!(weighted_sum(&mu, &one(), 100).unwrap().re, 1.0);
        let as_seq = BoundedSequence::tabulate("mu", 100, |n| mu.value(n)).unwrap();
        assert_eq!(weighted_sum(&mu, &as_seq, 100).unwrap().re, 61.0);
        let zero = BoundedSequence::constant(Complex::new(0.0, 0.0)).unwrap();
        assert_eq!(weighted_sum(&mu, &zero, 100).unwrap(), Complex::new(0.0, 0.0));
        assert!(matches!(weighted_sum(&mu, &one(), 101), Err(Error::Horizon { .. })));
    }
}
