use serde::Serialize;

use super::params::DecompositionParams;
use crate::arith::{prime_blocks, PrimeBlock, PrimeTable};
use crate::error::{Error, Result};

/// Where an integer of `[1, N)` falls in the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "j")]
pub enum Membership {
    /// No prime factor in the open interval `(D0, D1)`.
    NotInS,
    /// Exactly one prime of the first block hitting `n` divides it, to the first power.
    InSj(i32),
    /// The first block hitting `n` contributes a repeated or squared prime.
    InSButMultiple(i32),
}

/// Per-integer classifier by trial division over the block primes.
///
/// [`super::Decomposition`] computes the same tags by sieving; this type is
/// the reference path for single queries.
#[derive(Debug, Clone)]
pub struct Classifier {
    params: DecompositionParams,
    blocks: Vec<PrimeBlock>,
}

impl Classifier {
    pub fn new(params: DecompositionParams, primes: &PrimeTable) -> Result<Self> {
        params.validate()?;
        let last = params.last_block();
        let blocks = prime_blocks(params.alpha, params.j0 as i32, last, primes).map_err(|e| match e {
            Error::Range(msg) => Error::Range(format!("decomposition blocks: {msg}")),
            other => other,
        })?;
        Ok(Classifier { params, blocks })
    }

    pub fn params(&self) -> &DecompositionParams {
        &self.params
    }

    pub fn blocks(&self) -> &[PrimeBlock] {
        &self.blocks
    }

    pub fn block(&self, j: i32) -> Option<&PrimeBlock> {
        let k = j - self.params.j0 as i32;
        (k >= 0).then(|| self.blocks.get(k as usize)).flatten()
    }

    pub fn classify(&self, n: u64) -> Membership {
        let d0 = self.params.d0();
        let mut in_s = false;
        let mut first: Option<(i32, u32, bool)> = None;
        'outer: for b in &self.blocks {
            for &p in &b.primes {
                if p > n {
                    break 'outer;
                }
                if n % p != 0 {
                    continue;
                }
                if p as f64 > d0 {
                    in_s = true;
                }
                match &mut first {
                    None => first = Some((b.j, 1, (n / p) % p == 0)),
                    Some((j, count, _)) if *j == b.j => *count += 1,
                    Some(_) => {}
                }
            }
            if in_s && first.map_or(false, |(j, _, _)| j <= b.j) {
                break;
            }
        }
        match (in_s, first) {
            (false, _) | (true, None) => Membership::NotInS,
            (true, Some((j, 1, false))) => Membership::InSj(j),
            (true, Some((j, _, _))) => Membership::InSButMultiple(j),
        }
    }

    /// `m ∈ Q_j`: `m < N/(1+α)^{j+1}` and no prime of `P_i`, `i <= j`, divides `m`.
    pub fn q_membership(&self, m: u64, j: i32) -> bool {
        if m == 0 || !((m as f64) < self.params.q_bound(j)) {
            return false;
        }
        self.blocks
            .iter()
            .take_while(|b| b.j <= j)
            .flat_map(|b| b.primes.iter())
            .take_while(|&&p| p <= m)
            .all(|&p| m % p != 0)
    }
}

/// Classifies a single `n` in `[1, N)`.
pub fn classify(n: u64, params: &DecompositionParams, primes: &PrimeTable) -> Result<Membership> {
    if n == 0 || n >= params.n {
        return Err(Error::Range(format!("n = {n} outside [1, {})", params.n)));
    }
    Ok(Classifier::new(*params, primes)?.classify(n))
}

pub fn q_membership(m: u64, j: i32, params: &DecompositionParams, primes: &PrimeTable) -> Result<bool> {
    Ok(Classifier::new(*params, primes)?.q_membership(m, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;

    fn alpha_one(n: u64) -> (DecompositionParams, PrimeTable) {
        (DecompositionParams::new(n, 1.0, 1, 4).unwrap(), sieve_primes(100).unwrap())
    }

    #[test]
    fn boundary_prime_is_outside_s() {
        let (p, t) = alpha_one(1000);
        assert_eq!(classify(8, &p, &t).unwrap(), Membership::NotInS);
        assert_eq!(classify(1, &p, &t).unwrap(), Membership::NotInS);
    }

    #[test]
    fn nine_has_a_squared_block_prime() {
        // 3 ∈ P_1 = {2, 3} and 3 lies inside (2, 16); 3² | 9
        let (p, t) = alpha_one(1000);
        assert_eq!(classify(9, &p, &t).unwrap(), Membership::InSButMultiple(1));
        assert_eq!(classify(3, &p, &t).unwrap(), Membership::InSj(1));
        assert_eq!(classify(6, &p, &t).unwrap(), Membership::InSButMultiple(1));
        assert_eq!(classify(11 * 17, &p, &t).unwrap(), Membership::InSj(3));
    }

    #[test]
    fn cofactor_sets() {
        let (p, t) = alpha_one(1000);
        assert!(!q_membership(2, 3, &p, &t).unwrap());
        assert!(q_membership(17, 3, &p, &t).unwrap());
        assert!(q_membership(1, 3, &p, &t).unwrap());
        assert!(!q_membership(67, 3, &p, &t).unwrap());
    }

    #[test]
    fn out_of_range_n() {
        let (p, t) = alpha_one(1000);
        assert!(classify(1000, &p, &t).is_err());
    }
}
