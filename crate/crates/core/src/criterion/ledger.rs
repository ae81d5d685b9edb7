use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::correlation::{tau_estimate, vinogradov_bound, weighted_sum, PairLength, TauEstimate};
use super::sequence::{BoundedSequence, MODULUS_SLACK};
use crate::arith::{sieve_primes, MultiplicativeTable};
use crate::decomp::{build_decomposition, BlockPart, Decomposition, DecompositionParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::summation::pairwise_sum_by;

/// Relative slack for numerical comparisons in the ledger.
pub const LEDGER_SLACK: f64 = 1e-10;

/// Ratio `|Σ ν F| / bound` at or below which the bound is declared to hold.
pub const HOLDS_BELOW: f64 = 0.9;
/// Ratio above which the bound is declared violated.
pub const VIOLATED_ABOVE: f64 = 1.1;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionConfig {
    pub n: u64,
    pub alpha: f64,
    pub j0: u32,
    pub j1: u32,
    pub cutoff: f64,
    pub excluded: Vec<(u64, u64)>,
    /// `None` means `M = floor(N / max(p1, p2))`.
    pub pair_length: Option<u64>,
}

impl CriterionConfig {
    pub fn params(&self) -> Result<DecompositionParams> {
        DecompositionParams::new(self.n, self.alpha, self.j0, self.j1)
    }

    pub fn length(&self) -> PairLength {
        match self.pair_length {
            Some(m) => PairLength::Fixed(m),
            None => PairLength::UpTo(self.n),
        }
    }

    /// Largest index at which `F` is evaluated by the ledger, about `(1+α)N`.
    pub fn required_horizon(&self) -> Result<u64> {
        let p = self.params()?;
        let primes = sieve_primes((p.d1().ceil() as u64).max(2))?;
        let mut top = self.n;
        for j in p.block_indices() {
            let lo = p.bound(j);
            if let Some(&x) = primes.in_range(lo, p.bound(j + 1)).last() {
                top = top.max(x * range_end(self.n, lo));
            }
        }
        Ok(top)
    }
}

fn range_end(n: u64, lo: f64) -> u64 {
    (n as f64 / lo).floor() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineKind {
    /// Holds at every finite `N`; a failure indicates a bug.
    Unconditional,
    /// Asymptotic reference; may fail at desk scale.
    Asymptotic,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerLine {
    pub name: &'static str,
    pub kind: LineKind,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

fn le(name: &'static str, kind: LineKind, lhs: f64, rhs: f64) -> LedgerLine {
    LedgerLine {
        name,
        kind,
        lhs,
        rhs,
        holds: lhs <= rhs + LEDGER_SLACK * rhs.abs().max(1.0),
    }
}

/// `|a - b| <= slack · scale`, reported as `lhs = |a - b|`, `rhs = slack · scale`.
fn eq(name: &'static str, diff: f64, scale: f64) -> LedgerLine {
    let rhs = LEDGER_SLACK * scale.max(1.0);
    LedgerLine {
        name,
        kind: LineKind::Unconditional,
        lhs: diff,
        rhs,
        holds: diff <= rhs,
    }
}

/// Terms of the chain for one block `j`.
#[derive(Debug, Clone, Serialize)]
pub struct BlockLedger<T = f64> {
    pub j: i32,
    pub p_len: u64,
    pub q_len: u64,
    /// `floor(N / (1+α)^j)`, the extended range of `y`.
    pub y_range: u64,
    /// `Σ_{x ∈ P_j, y ∈ Q_j} ν(xy) F(xy)`.
    pub product_sum: Complex<T>,
    /// `Σ_{y ∈ Q_j} ν(y) Σ_{x ∈ P_j} ν(x) F(xy)`.
    pub factored_sum: Complex<T>,
    /// `Σ_{y ∈ Q_j} |Σ_x ν(x) F(xy)|`.
    pub inner_abs: T,
    /// `Σ_{y ∈ Q_j} |Σ_x ν(x) F(xy)|²`.
    pub inner_sq: T,
    /// `|Q_j|^{1/2} (inner_sq)^{1/2}`.
    pub cauchy_schwarz: T,
    /// `Σ_{y <= y_range} |Σ_x ν(x) F(xy)|²`.
    pub inner_sq_extended: T,
    /// `Σ_{x1, x2} ν(x1) conj(ν(x2)) C(x1, x2)` with `C` the pair correlation over `y <= y_range`.
    pub expanded: Complex<T>,
    /// `Σ_{x1, x2} |C(x1, x2)|`.
    pub pair_abs: T,
    /// Diagonal part `Σ_x Σ_y |F(xy)|²`.
    pub diagonal: T,
    /// `|P_j| N / (1+α)^j`.
    pub diagonal_bound: T,
    pub off_diagonal: T,
    /// `max_{x1 ≠ x2} |C(x1, x2)| / y_range`.
    pub block_tau: T,
    /// `|Q_j|^{1/2} (pair_abs)^{1/2}`.
    pub majorant: T,
    /// `|Q_j|^{1/2} (√diagonal + √off_diagonal)`.
    pub split_majorant: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
    /// Effective `τ >= 1`: the bound is void.
    Vacuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport<T = f64> {
    pub n: u64,
    pub alpha: f64,
    pub j0: u32,
    pub j1: u32,
    pub prime_cutoff: f64,
    pub sequence: String,
    pub multiplicative: String,
    pub pair_length: PairLength,
    pub tau: TauEstimate<T>,
    /// `max(tau_hat, 1 / ln P)`.
    pub tau_effective: f64,
    pub bound: Option<f64>,
    pub weighted_sum: Complex<T>,
    pub weighted_abs: f64,
    pub ratio: Option<f64>,
    pub verdict: Verdict,
    pub covered_sum: Complex<T>,
    pub leftover_sum: Complex<T>,
    pub leftover_count: u64,
    pub diagonal_total: f64,
    pub off_diagonal_total: f64,
    pub blocks: Vec<BlockLedger<T>>,
    pub lines: Vec<LedgerLine>,
}

impl<T> CriterionReport<T> {
    pub fn line(&self, name: &str) -> Option<&LedgerLine> {
        self.lines.iter().find(|l| l.name == name)
    }

    pub fn unconditional_holds(&self) -> bool {
        self.lines
            .iter()
            .filter(|l| l.kind == LineKind::Unconditional)
            .all(|l| l.holds)
    }

    /// Names of failing lines.
    pub fn failures(&self) -> Vec<&'static str> {
        self.lines.iter().filter(|l| !l.holds).map(|l| l.name).collect()
    }
}

pub fn verdict(weighted_abs: f64, bound: Option<f64>) -> (Option<f64>, Verdict) {
    match bound {
        None => (None, Verdict::Vacuous),
        Some(b) => {
            let r = weighted_abs / b;
            let v = if r <= HOLDS_BELOW {
                Verdict::Holds
            } else if r > VIOLATED_ABOVE {
                Verdict::Violated
            } else {
                Verdict::Inconclusive
            };
            (Some(r), v)
        }
    }
}

fn block_ledger<T: Real>(
    part: &BlockPart,
    nu: &MultiplicativeTable<T>,
    f: &BoundedSequence<T>,
    n: u64,
) -> BlockLedger<T> {
    let p = &part.block.primes;
    let q = &part.q;
    let y_range = range_end(n, part.block.lo);
    let nu_x: Vec<Complex<T>> = p.iter().map(|&x| nu.value(x)).collect();

    // rows[i][y - 1] = F(x_i y)
    let rows: Vec<Vec<Complex<T>>> = p
        .iter()
        .map(|&x| (1..=y_range).map(|y| f.eval(x * y)).collect())
        .collect();
    let inner: Vec<Complex<T>> = (0..y_range as usize)
        .map(|yi| pairwise_sum_by(p.len(), &|i| nu_x[i] * rows[i][yi]))
        .collect();

    let product_sum = pairwise_sum_by(q.len(), &|k| {
        let y = q[k];
        pairwise_sum_by(p.len(), &|i| {
            let m = p[i] * y;
            nu.value(m) * f.eval(m)
        })
    });
    let factored_sum = pairwise_sum_by(q.len(), &|k| nu.value(q[k]) * inner[q[k] as usize - 1]);
    let inner_abs = pairwise_sum_by(q.len(), &|k| inner[q[k] as usize - 1].norm());
    let inner_sq = pairwise_sum_by(q.len(), &|k| inner[q[k] as usize - 1].norm_sqr());
    let inner_sq_extended = pairwise_sum_by(inner.len(), &|k| inner[k].norm_sqr());

    let np = p.len();
    let corr: Vec<Complex<T>> = (0..np * np)
        .map(|ij| {
            let (a, b) = (&rows[ij / np], &rows[ij % np]);
            pairwise_sum_by(a.len(), &|y| a[y] * b[y].conj())
        })
        .collect();
    let expanded = pairwise_sum_by(np * np, &|ij| nu_x[ij / np] * nu_x[ij % np].conj() * corr[ij]);
    let pair_abs = pairwise_sum_by(np * np, &|ij| corr[ij].norm());
    let diagonal = pairwise_sum_by(np, &|i| corr[i * np + i].norm());
    let off_diagonal = pairwise_sum_by(np * np, &|ij| {
        if ij / np == ij % np {
            T::zero()
        } else {
            corr[ij].norm()
        }
    });
    let mut block_tau = T::zero();
    if y_range > 0 {
        for (ij, c) in corr.iter().enumerate() {
            if ij / np != ij % np {
                block_tau = block_tau.max(c.norm() / T::of_i64(y_range as i64));
            }
        }
    }
    let sq = |v: T| v.max(T::zero()).sqrt();
    let qn = T::of_i64(q.len() as i64);
    BlockLedger {
        j: part.block.j,
        p_len: np as u64,
        q_len: q.len() as u64,
        y_range,
        product_sum,
        factored_sum,
        inner_abs,
        inner_sq,
        cauchy_schwarz: sq(qn) * sq(inner_sq),
        inner_sq_extended,
        expanded,
        pair_abs,
        diagonal,
        diagonal_bound: T::lit(np as f64 * n as f64 / part.block.lo),
        off_diagonal,
        block_tau,
        majorant: sq(qn) * sq(pair_abs),
        split_majorant: sq(qn) * (sq(diagonal) + sq(off_diagonal)),
    }
}

/// Builds the decomposition and replays the inequality chain on `ν` and `F`.
pub fn criterion_ledger<T: Real>(
    nu: &MultiplicativeTable<T>,
    f: &BoundedSequence<T>,
    config: &CriterionConfig,
) -> Result<CriterionReport<T>> {
    let params = config.params()?;
    if !(config.cutoff >= 3.0) {
        return Err(Error::EmptyPairSet { cutoff: config.cutoff });
    }
    nu.require(config.n)?;
    f.require(config.required_horizon()?)?;
    let primes = sieve_primes((params.d1().ceil() as u64).max(2))?;
    let d = build_decomposition(&params, &primes)?;
    ledger_on(nu, f, config, &d)
}

/// As [`criterion_ledger`], reusing an existing decomposition.
pub fn ledger_on<T: Real>(
    nu: &MultiplicativeTable<T>,
    f: &BoundedSequence<T>,
    config: &CriterionConfig,
    d: &Decomposition,
) -> Result<CriterionReport<T>> {
    let n = config.n;
    if d.params() != &config.params()? {
        return Err(Error::Domain("decomposition parameters differ from the criterion configuration".into()));
    }
    nu.require(n)?;
    f.require(config.required_horizon()?)?;
    let length = config.length();
    let tau = tau_estimate(f, config.cutoff, length, &config.excluded)?;
    let w = weighted_sum(nu, f, n)?;

    let blocks: Vec<BlockLedger<T>> = d.parts().par_iter().map(|part| block_ledger(part, nu, f, n)).collect();
    let leftover_sum = pairwise_sum_by(n as usize, &|i| {
        let k = i as u64 + 1;
        if d.is_covered(k) {
            Complex::zero()
        } else {
            nu.value(k) * f.eval(k)
        }
    });
    let leftover_count = n - d.counts().covered;
    let covered_sum = pairwise_sum_by(blocks.len(), &|i| blocks[i].product_sum);

    let nf = n as f64;
    let alpha = config.alpha;
    let fsum = |g: &dyn Fn(&BlockLedger<T>) -> T| blocks.iter().map(|b| g(b).as_f64()).sum::<f64>();
    let abs_b = fsum(&|b| b.product_sum.norm());
    let inner_abs = fsum(&|b| b.inner_abs);
    let cs = fsum(&|b| b.cauchy_schwarz);
    let majorant = fsum(&|b| b.majorant);
    let split = fsum(&|b| b.split_majorant);
    let pq: f64 = blocks.iter().map(|b| (b.p_len * b.q_len) as f64).sum();
    let geometric: f64 = d.parts().iter().map(|p| 1.0 / p.block.lo).sum();
    let diag_2_19: f64 = d
        .parts()
        .iter()
        .zip(&blocks)
        .map(|(p, b)| (b.q_len as f64 * b.p_len as f64 * nf / p.block.lo).sqrt())
        .sum();
    let diag_total: f64 = blocks.iter().map(|b| (b.q_len as f64 * b.diagonal.as_f64()).sqrt()).sum();
    let off_total: f64 = blocks.iter().map(|b| (b.q_len as f64 * b.off_diagonal.as_f64()).sqrt()).sum();
    let left_abs = leftover_sum.norm().as_f64();
    let w_abs = w.norm().as_f64();

    let tau_hat = tau.tau_hat.as_f64();
    let tau_eff = tau_hat.max(1.0 / config.cutoff.ln());
    let bound = if tau_eff < 1.0 {
        Some(vinogradov_bound(tau_eff, n)?)
    } else {
        None
    };
    let (ratio, verdict) = verdict(w_abs, bound);

    use LineKind::*;
    let all = |g: &dyn Fn(&BlockLedger<T>) -> bool| blocks.iter().all(g);
    let slack = |a: T, b: T| a.as_f64() <= b.as_f64() + LEDGER_SLACK * b.as_f64().abs().max(1.0);
    let per_block = |mut line: LedgerLine, ok: bool| {
        line.holds &= ok;
        line
    };
    let max_diff = |g: &dyn Fn(&BlockLedger<T>) -> f64| blocks.iter().map(g).fold(0.0, f64::max);

    let mut lines = vec![
        eq("leftover_identity", (w - covered_sum - leftover_sum).norm().as_f64(), nf),
        le("triangle_split", Unconditional, w_abs, abs_b + left_abs),
        eq("factorization", max_diff(&|b| (b.product_sum - b.factored_sum).norm().as_f64()), nf),
        per_block(
            le("inner_triangle", Unconditional, abs_b, inner_abs),
            all(&|b| slack(b.product_sum.norm(), b.inner_abs)),
        ),
        per_block(
            le("cauchy_schwarz", Unconditional, inner_abs, cs),
            all(&|b| slack(b.inner_abs, b.cauchy_schwarz)),
        ),
        per_block(
            le(
                "range_extension",
                Unconditional,
                fsum(&|b| b.inner_sq),
                fsum(&|b| b.inner_sq_extended),
            ),
            all(&|b| slack(b.inner_sq, b.inner_sq_extended)),
        ),
        eq(
            "square_expansion",
            max_diff(&|b| (b.expanded - Complex::new(b.inner_sq_extended, T::zero())).norm().as_f64()),
            nf,
        ),
        per_block(
            le("pair_triangle", Unconditional, cs, majorant),
            all(&|b| slack(b.inner_sq_extended, b.pair_abs)),
        ),
        per_block(
            le(
                "diagonal_bound",
                Unconditional,
                fsum(&|b| b.diagonal),
                fsum(&|b| b.diagonal_bound) * (1.0 + 2.0 * MODULUS_SLACK),
            ),
            all(&|b| b.diagonal.as_f64() <= b.diagonal_bound.as_f64() * (1.0 + 2.0 * MODULUS_SLACK) + LEDGER_SLACK),
        ),
        le("sqrt_split", Unconditional, majorant, split),
        le(
            "diagonal_cauchy_over_blocks",
            Unconditional,
            diag_2_19,
            nf.sqrt() * pq.sqrt() * geometric.sqrt(),
        ),
        le("product_set_volume", Unconditional, pq, nf),
        le("chain_total", Unconditional, w_abs, split + left_abs),
        le("leftover_fraction", Asymptotic, leftover_count as f64, 3.0 * alpha * nf),
        le("diagonal_total", Asymptotic, nf * geometric.sqrt(), alpha * nf),
        le(
            "off_diagonal_total",
            Asymptotic,
            off_total,
            nf * tau_eff.sqrt() * (1.0 / alpha).ln().max(0.0).sqrt(),
        ),
        le(
            "block_correlations_within_tau",
            Asymptotic,
            blocks.iter().map(|b| b.block_tau.as_f64()).fold(0.0, f64::max),
            tau_eff,
        ),
        le(
            "final_estimate",
            Asymptotic,
            w_abs,
            nf * (4.0 * alpha + (tau_eff * (1.0 / alpha).ln().max(0.0)).sqrt()),
        ),
    ];
    if let Some(b) = bound {
        lines.push(le("vinogradov_bound", Asymptotic, w_abs, b));
    }

    Ok(CriterionReport {
        n,
        alpha,
        j0: config.j0,
        j1: config.j1,
        prime_cutoff: config.cutoff,
        sequence: f.label().to_string(),
        multiplicative: nu.label().to_string(),
        pair_length: length,
        tau,
        tau_effective: tau_eff,
        bound,
        weighted_sum: w,
        weighted_abs: w_abs,
        ratio,
        verdict,
        covered_sum,
        leftover_sum,
        leftover_count,
        diagonal_total: diag_total,
        off_diagonal_total: off_total,
        blocks,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_mobius;
    use crate::symbolic::SymReal;

    fn config(n: u64, j0: u32, j1: u32) -> CriterionConfig {
        CriterionConfig {
            n,
            alpha: 0.3,
            j0,
            j1,
            cutoff: 50.0,
            excluded: vec![],
            pair_length: None,
        }
    }

    #[test]
    fn exponential_chain_holds() {
        let c = config(10_000, 9, 25);
        let mu = sieve_mobius::<f64>(c.n).unwrap();
        let f = BoundedSequence::exponential(&SymReal::sqrt(2));
        let r = criterion_ledger(&mu, &f, &c).unwrap();
        assert!(r.unconditional_holds(), "{:?}", r.failures());
        let direct = weighted_sum(&mu, &f, c.n).unwrap();
        let via = r.covered_sum + r.leftover_sum;
        assert!((direct - via).norm() <= 1e-9 * direct.norm().max(1.0));
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn constant_sequence_inner_sums() {
        let c = config(20_000, 9, 20);
        let mu = sieve_mobius::<f64>(c.n).unwrap();
        let f = BoundedSequence::constant(Complex::new(1.0, 0.0)).unwrap();
        let r = criterion_ledger(&mu, &f, &c).unwrap();
        for b in &r.blocks {
            assert_eq!(b.inner_abs, (b.p_len * b.q_len) as f64);
        }
        assert_eq!(r.verdict, Verdict::Vacuous);
        assert!(r.unconditional_holds(), "{:?}", r.failures());
    }

    #[test]
    fn single_block_matches_direct_products() {
        let c = config(20_000, 12, 12);
        let mu = sieve_mobius::<f64>(c.n).unwrap();
        let f = BoundedSequence::exponential(&SymReal::parse("pi").unwrap());
        let r = criterion_ledger(&mu, &f, &c).unwrap();
        assert_eq!(r.blocks.len(), 1);
        let primes = sieve_primes(100).unwrap();
        let params = c.params().unwrap();
        let d = build_decomposition(&params, &primes).unwrap();
        let part = &d.parts()[0];
        let mut direct = Complex::new(0.0, 0.0);
        for &x in &part.block.primes {
            for &y in &part.q {
                direct += mu.value(x * y) * f.eval(x * y);
            }
        }
        assert!((r.blocks[0].product_sum - direct).norm() < 1e-9);
        assert!(r.unconditional_holds());
    }

    #[test]
    fn short_sequence_is_a_horizon_error() {
        let c = config(10_000, 9, 25);
        let mu = sieve_mobius::<f64>(c.n).unwrap();
        let f = BoundedSequence::tabulate("short", c.n, |_| Complex::new(1.0, 0.0)).unwrap();
        assert!(matches!(criterion_ledger(&mu, &f, &c), Err(Error::Horizon { .. })));
    }
}
