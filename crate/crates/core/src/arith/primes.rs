use crate::error::{Error, Result};

/// Memory ceiling checked before any table is allocated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_bytes: 2 << 30,
        }
    }
}

impl Budget {
    pub fn check(&self, what: &str, needed_bytes: u64) -> Result<()> {
        if needed_bytes > self.max_bytes {
            Err(Error::Capacity {
                what: what.to_string(),
                needed_bytes,
                budget_bytes: self.max_bytes,
            })
        } else {
            Ok(())
        }
    }
}

pub(crate) const SEGMENT: u64 = 1 << 16;

/// All primes up to `n_max`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    n_max: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Membership by binary search; `None` when `n` lies beyond the table.
    pub fn contains(&self, n: u64) -> Option<bool> {
        (n <= self.n_max).then(|| self.primes.binary_search(&n).is_ok())
    }

    /// Primes `p` with `lo <= p < hi` (real bounds).
    pub fn in_range(&self, lo: f64, hi: f64) -> &[u64] {
        let a = self.primes.partition_point(|&p| (p as f64) < lo);
        let b = self.primes.partition_point(|&p| (p as f64) < hi);
        &self.primes[a..b.max(a)]
    }
}

fn estimated_prime_count(n: u64) -> u64 {
    if n < 17 {
        return 7;
    }
    let x = n as f64;
    (1.26 * x / x.ln()) as u64 + 1
}

/// Primes up to `sqrt(n)` by a plain sieve; used to seed segmented sieves.
pub(crate) fn base_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut m = i * i;
            while m <= limit {
                composite[m] = true;
                m += i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Segmented sieve of Eratosthenes with the default [`Budget`].
pub fn sieve_primes(n_max: u64) -> Result<PrimeTable> {
    sieve_primes_with(n_max, &Budget::default())
}

pub fn sieve_primes_with(n_max: u64, budget: &Budget) -> Result<PrimeTable> {
    if n_max < 2 {
        return Err(Error::Domain(format!("prime sieve needs n_max >= 2, got {n_max}")));
    }
    budget.check("prime table", estimated_prime_count(n_max) * 8 + SEGMENT)?;

    let base = base_primes(isqrt(n_max));
    let mut primes = Vec::with_capacity(estimated_prime_count(n_max) as usize);
    let mut seg = vec![true; SEGMENT as usize];
    let mut lo = 2u64;
    while lo <= n_max {
        let hi = (lo + SEGMENT).min(n_max + 1);
        let width = (hi - lo) as usize;
        seg[..width].fill(true);
        for &p in &base {
            if p * p >= hi {
                break;
            }
            let mut m = (p * p).max(lo.div_ceil(p) * p);
            while m < hi {
                seg[(m - lo) as usize] = false;
                m += p;
            }
        }
        primes.extend(
            seg[..width]
                .iter()
                .enumerate()
                .filter(|(_, &keep)| keep)
                .map(|(i, _)| lo + i as u64),
        );
        lo = hi;
    }
    Ok(PrimeTable { n_max, primes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_tables() {
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert_eq!(sieve_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        let t = sieve_primes(30).unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(*t.primes().last().unwrap(), 29);
    }

    #[test]
    fn matches_trial_division_across_segments() {
        let n = 3 * SEGMENT + 17;
        let t = sieve_primes(n).unwrap();
        let oracle: Vec<u64> = (2..=n).filter(|&k| is_prime_trial(k)).collect();
        assert_eq!(t.primes(), oracle.as_slice());
    }

    #[test]
    fn rejects_tiny_and_oversized() {
        assert!(matches!(sieve_primes(1), Err(Error::Domain(_))));
        let b = Budget { max_bytes: 1000 };
        assert!(matches!(
            sieve_primes_with(1_000_000, &b),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn range_queries_are_half_open() {
        let t = sieve_primes(100).unwrap();
        assert_eq!(t.in_range(8.0, 16.0), &[11, 13]);
        assert_eq!(t.in_range(11.0, 13.0), &[11]);
        assert_eq!(t.contains(97), Some(true));
        assert_eq!(t.contains(101), None);
    }
}
