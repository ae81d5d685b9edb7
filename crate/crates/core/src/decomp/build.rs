use rayon::prelude::*;
use serde::Serialize;

use super::classify::{Classifier, Membership};
use super::params::DecompositionParams;
use crate::arith::{Budget, PrimeBlock, PrimeTable};
use crate::error::Result;

const NONE: u16 = u16::MAX;
const IN_S: u8 = 1;
const SQUARED: u8 = 2;
const CHUNK: usize = 1 << 15;

#[derive(Debug, Clone, Copy)]
struct Cell {
    first_prime: u32,
    first_block: u16,
    cover: u16,
    count: u8,
    flags: u8,
}

impl Default for Cell {
    fn default() -> Self {
        Cell {
            first_prime: 0,
            first_block: NONE,
            cover: NONE,
            count: 0,
            flags: 0,
        }
    }
}

/// One block `P_j` with its cofactor set `Q_j` and exact counts.
#[derive(Debug, Clone, Serialize)]
pub struct BlockPart {
    pub block: PrimeBlock,
    /// Strict upper bound `N/(1+α)^{j+1}` on the members of `Q_j`.
    pub q_bound: f64,
    #[serde(skip)]
    pub q: Vec<u64>,
    pub q_len: u64,
    /// `|S_j|`.
    pub s_len: u64,
    /// `|P_j Q_j|`.
    pub product_len: u64,
    /// `|S_j \ P_j Q_j|`.
    pub complement_len: u64,
    /// Integers whose first block is `j` but which are not in `S_j`.
    pub multiple_len: u64,
}

/// Exact counts over `[1, N)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DecompositionCounts {
    pub total: u64,
    pub not_in_s: u64,
    pub in_s: u64,
    pub in_s_multiple: u64,
    pub sum_s_j: u64,
    pub covered: u64,
    pub leftover: u64,
    pub sum_complement: u64,
}

/// Failures of the structural properties; all zero for a sound decomposition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Violations {
    /// An integer hit by two products `p·q`.
    pub injectivity: u64,
    /// A product `p·q` that does not classify as `InSj(j)`.
    pub inclusion: u64,
    /// A product whose unique block prime is not `p`.
    pub recovery: u64,
    /// An element of `S_j \ P_j Q_j` whose cofactor is outside `[N/(1+α)^{j+1}, N/(1+α)^j)`.
    pub complement: u64,
    pub examples: Vec<u64>,
}

impl Violations {
    pub fn is_clean(&self) -> bool {
        self.injectivity == 0 && self.inclusion == 0 && self.recovery == 0 && self.complement == 0
    }

    fn note(&mut self, n: u64) {
        if self.examples.len() < 16 {
            self.examples.push(n);
        }
    }
}

/// The decomposition of `[1, N)` into `S`, the sets `S_j` and the products `P_j Q_j`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    params: DecompositionParams,
    parts: Vec<BlockPart>,
    cells: Vec<Cell>,
    counts: DecompositionCounts,
    violations: Violations,
    boundary_primes: Vec<u64>,
}

impl Decomposition {
    pub fn params(&self) -> &DecompositionParams {
        &self.params
    }

    pub fn parts(&self) -> &[BlockPart] {
        &self.parts
    }

    pub fn part(&self, j: i32) -> Option<&BlockPart> {
        let k = j - self.params.j0 as i32;
        (k >= 0).then(|| self.parts.get(k as usize)).flatten()
    }

    pub fn counts(&self) -> &DecompositionCounts {
        &self.counts
    }

    pub fn violations(&self) -> &Violations {
        &self.violations
    }

    /// Block primes equal to `D0`; they tile a block but are excluded from `S`.
    pub fn boundary_primes(&self) -> &[u64] {
        &self.boundary_primes
    }

    fn j_of(&self, k: u16) -> i32 {
        self.params.j0 as i32 + k as i32
    }

    /// Tag of `n` in `[1, N)`.
    pub fn membership(&self, n: u64) -> Membership {
        let c = self.cells[n as usize];
        if c.flags & IN_S == 0 || c.first_block == NONE {
            Membership::NotInS
        } else if c.count == 1 && c.flags & SQUARED == 0 {
            Membership::InSj(self.j_of(c.first_block))
        } else {
            Membership::InSButMultiple(self.j_of(c.first_block))
        }
    }

    /// `(j, p, q)` with `n = p·q`, `p ∈ P_j`, `q ∈ Q_j`, if `n` is covered.
    pub fn factorization(&self, n: u64) -> Option<(i32, u64, u64)> {
        if n == 0 || n >= self.params.n {
            return None;
        }
        let c = self.cells[n as usize];
        (c.cover != NONE).then(|| {
            let p = c.first_prime as u64;
            (self.j_of(c.cover), p, n / p)
        })
    }

    pub fn is_covered(&self, n: u64) -> bool {
        n > 0 && n < self.params.n && self.cells[n as usize].cover != NONE
    }

    /// Smallest block index `j` with a prime of `P_j` dividing `m`.
    pub fn first_block(&self, m: u64) -> Option<i32> {
        let c = self.cells[m as usize];
        (c.first_block != NONE).then(|| self.j_of(c.first_block))
    }

    /// `∏ (1 - 1/ℓ)` over primes `D0 < ℓ < D1`.
    pub fn mertens_product(&self) -> f64 {
        let d0 = self.params.d0();
        self.parts
            .iter()
            .flat_map(|p| p.block.primes.iter())
            .filter(|&&p| p as f64 > d0)
            .map(|&p| (1.0 - 1.0 / p as f64).ln())
            .sum::<f64>()
            .exp()
    }
}

/// Builds the decomposition with the default [`Budget`].
pub fn build_decomposition(params: &DecompositionParams, primes: &PrimeTable) -> Result<Decomposition> {
    build_decomposition_with(params, primes, &Budget::default())
}

pub fn build_decomposition_with(
    params: &DecompositionParams,
    primes: &PrimeTable,
    budget: &Budget,
) -> Result<Decomposition> {
    params.validate()?;
    budget.check("decomposition", params.n * std::mem::size_of::<Cell>() as u64)?;
    let classifier = Classifier::new(*params, primes)?;
    let blocks = classifier.blocks().to_vec();
    let n = params.n as usize;
    let d0 = params.d0();

    let mut cells = vec![Cell::default(); n];
    cells.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
        let lo = (ci * CHUNK) as u64;
        let hi = lo + chunk.len() as u64;
        for (k, b) in blocks.iter().enumerate() {
            let k = k as u16;
            for &p in &b.primes {
                let in_s = p as f64 > d0;
                let mut m = lo.div_ceil(p).max(1) * p;
                while m < hi {
                    let c = &mut chunk[(m - lo) as usize];
                    if in_s {
                        c.flags |= IN_S;
                    }
                    if c.first_block == NONE {
                        c.first_block = k;
                        c.first_prime = p as u32;
                        c.count = 1;
                        if (m / p) % p == 0 {
                            c.flags |= SQUARED;
                        }
                    } else if c.first_block == k {
                        c.count = c.count.saturating_add(1);
                    }
                    m += p;
                }
            }
        }
    });

    let mut parts: Vec<BlockPart> = blocks
        .into_iter()
        .map(|block| {
            let q_bound = params.q_bound(block.j);
            BlockPart {
                block,
                q_bound,
                q: Vec::new(),
                q_len: 0,
                s_len: 0,
                product_len: 0,
                complement_len: 0,
                multiple_len: 0,
            }
        })
        .collect();

    for (k, part) in parts.iter_mut().enumerate() {
        let k = k as u16;
        let top = (part.q_bound.ceil() as u64).min(params.n);
        part.q = (1..top)
            .filter(|&m| (m as f64) < part.q_bound)
            .filter(|&m| {
                let fb = cells[m as usize].first_block;
                fb == NONE || fb > k
            })
            .collect();
        part.q_len = part.q.len() as u64;
    }

    let mut decomposition = Decomposition {
        params: *params,
        parts: Vec::new(),
        cells,
        counts: DecompositionCounts::default(),
        violations: Violations::default(),
        boundary_primes: Vec::new(),
    };

    let mut violations = Violations::default();
    for (k, part) in parts.iter_mut().enumerate() {
        let j = part.block.j;
        for &p in &part.block.primes {
            for &q in &part.q {
                let m = p * q;
                if m >= params.n {
                    violations.inclusion += 1;
                    violations.note(m);
                    continue;
                }
                let cell = &mut decomposition.cells[m as usize];
                if cell.cover != NONE {
                    violations.injectivity += 1;
                    violations.note(m);
                    continue;
                }
                cell.cover = k as u16;
                part.product_len += 1;
                if decomposition.membership(m) != Membership::InSj(j) {
                    violations.inclusion += 1;
                    violations.note(m);
                }
                let c = decomposition.cells[m as usize];
                if c.first_prime as u64 != p || m / c.first_prime as u64 != q {
                    violations.recovery += 1;
                    violations.note(m);
                }
            }
        }
    }

    let mut counts = DecompositionCounts {
        total: params.n - 1,
        ..Default::default()
    };
    for m in 1..params.n {
        let c = decomposition.cells[m as usize];
        if c.cover != NONE {
            counts.covered += 1;
        }
        match decomposition.membership(m) {
            Membership::NotInS => counts.not_in_s += 1,
            Membership::InSButMultiple(j) => {
                counts.in_s_multiple += 1;
                parts[(j - params.j0 as i32) as usize].multiple_len += 1;
            }
            Membership::InSj(j) => {
                let part = &mut parts[(j - params.j0 as i32) as usize];
                part.s_len += 1;
                if c.cover == NONE {
                    part.complement_len += 1;
                    let cof = (m / c.first_prime as u64) as f64;
                    let upper = params.n as f64 / part.block.lo;
                    if !(cof >= part.q_bound && cof < upper) {
                        violations.complement += 1;
                        violations.note(m);
                    }
                }
            }
        }
    }
    counts.in_s = counts.total - counts.not_in_s;
    counts.sum_s_j = parts.iter().map(|p| p.s_len).sum();
    counts.sum_complement = parts.iter().map(|p| p.complement_len).sum();
    counts.leftover = counts.total - counts.covered;

    decomposition.boundary_primes = parts
        .iter()
        .flat_map(|p| p.block.primes.iter().copied())
        .filter(|&p| p as f64 == d0)
        .collect();
    decomposition.parts = parts;
    decomposition.counts = counts;
    decomposition.violations = violations;
    Ok(decomposition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;

    #[test]
    fn sieved_tags_agree_with_trial_division() {
        let params = DecompositionParams::new(20_000, 0.3, 9, 30).unwrap();
        let primes = sieve_primes(10_000).unwrap();
        let d = build_decomposition(&params, &primes).unwrap();
        let c = Classifier::new(params, &primes).unwrap();
        for n in 1..params.n {
            assert_eq!(d.membership(n), c.classify(n), "n = {n}");
        }
        for part in d.parts() {
            for m in 1..part.q_bound.ceil() as u64 + 2 {
                assert_eq!(part.q.contains(&m), c.q_membership(m, part.block.j), "m = {m}");
            }
        }
    }

    #[test]
    fn alpha_one_products() {
        let params = DecompositionParams::new(1000, 1.0, 1, 4).unwrap();
        let primes = sieve_primes(100).unwrap();
        let d = build_decomposition(&params, &primes).unwrap();
        assert_eq!(d.factorization(187), Some((3, 11, 17)));
        assert_eq!(d.counts().covered, 248);
        assert_eq!(d.counts().not_in_s, 382);
        assert_eq!(d.counts().in_s_multiple, 321);
        assert_eq!(d.counts().sum_s_j, 296);
        // 2 = D0 tiles P_1 but is excluded from S, so products 2·q with q free
        // of small block primes fall outside S
        assert_eq!(d.boundary_primes(), &[2]);
        assert!(d.violations().inclusion > 0);
    }

    #[test]
    fn single_block_identity() {
        let params = DecompositionParams::new(50_000, 0.3, 12, 12).unwrap();
        let primes = sieve_primes(100).unwrap();
        let d = build_decomposition(&params, &primes).unwrap();
        assert_eq!(d.parts().len(), 1);
        let part = &d.parts()[0];
        assert_eq!(part.s_len, part.product_len + part.complement_len);
        let c = d.counts();
        assert_eq!(c.total, c.not_in_s + c.sum_s_j + c.in_s_multiple);
        for n in 1..params.n {
            assert!(matches!(
                d.membership(n),
                Membership::NotInS | Membership::InSj(12) | Membership::InSButMultiple(12)
            ));
        }
    }
}
