use serde::Serialize;

use super::primes::PrimeTable;
use crate::error::{Error, Result};

/// The primes in `[(1+α)^j, (1+α)^{j+1})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeBlock {
    pub j: i32,
    pub lo: f64,
    pub hi: f64,
    pub primes: Vec<u64>,
}

impl PrimeBlock {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }
}

/// `(1+α)^j`. All block boundaries go through this one function so that
/// comparisons against them are consistent.
#[inline]
pub fn block_bound(alpha: f64, j: i32) -> f64 {
    (1.0 + alpha).powi(j)
}

/// Blocks `P_j` for `j_lo <= j <= j_hi`, tiling `[(1+α)^{j_lo}, (1+α)^{j_hi+1})`
/// with half-open intervals.
pub fn prime_blocks(alpha: f64, j_lo: i32, j_hi: i32, primes: &PrimeTable) -> Result<Vec<PrimeBlock>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("block ratio alpha must lie in (0, 1], got {alpha}")));
    }
    if j_lo > j_hi {
        return Err(Error::Domain(format!("empty block range {j_lo}..={j_hi}")));
    }
    let top = block_bound(alpha, j_hi + 1);
    if top > primes.n_max() as f64 {
        return Err(Error::Range(format!(
            "prime table stops at {} but blocks reach {top:.3}",
            primes.n_max()
        )));
    }
    Ok((j_lo..=j_hi)
        .map(|j| {
            let lo = block_bound(alpha, j);
            let hi = block_bound(alpha, j + 1);
            PrimeBlock {
                j,
                lo,
                hi,
                primes: primes.in_range(lo, hi).to_vec(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;

    #[test]
    fn documented_blocks() {
        let t = sieve_primes(100).unwrap();
        let b = prime_blocks(1.0, 3, 3, &t).unwrap();
        assert_eq!(b[0].primes, vec![11, 13]);
        let b = prime_blocks(1.0, 0, 0, &t).unwrap();
        assert!(b[0].primes.is_empty());
        let b = prime_blocks(0.5, 2, 2, &t).unwrap();
        assert_eq!(b[0].primes, vec![3]);
    }

    #[test]
    fn boundary_prime_lands_in_exactly_one_block() {
        // 2 = (1+1)^1 is the lower edge of P_1 and the upper edge of P_0
        let t = sieve_primes(100).unwrap();
        let b = prime_blocks(1.0, 0, 5, &t).unwrap();
        assert!(!b[0].contains(2));
        assert!(b[1].contains(2));
    }

    #[test]
    fn rejects_short_table_and_bad_alpha() {
        let t = sieve_primes(100).unwrap();
        assert!(matches!(prime_blocks(1.0, 0, 7, &t), Err(Error::Range(_))));
        assert!(matches!(prime_blocks(0.0, 0, 1, &t), Err(Error::Domain(_))));
        assert!(matches!(prime_blocks(0.5, 3, 2, &t), Err(Error::Domain(_))));
    }
}
