use serde::Serialize;

use super::build::Decomposition;

/// A measured count against its asymptotic reference `multiplier · αN`.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageLine {
    pub name: &'static str,
    pub measured: u64,
    pub fraction: f64,
    pub reference_multiplier: f64,
    pub reference: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub n: u64,
    pub alpha: f64,
    pub j0: u32,
    pub j1: u32,
    pub d0: f64,
    pub d1: f64,
    pub lines: Vec<CoverageLine>,
    /// `∏ (1 - 1/ℓ)` over primes `D0 < ℓ < D1`.
    pub mertens_product: f64,
    /// `log D0 / log D1` for the realised block range.
    pub log_ratio: f64,
    pub inverse_j0: f64,
    /// `|[1,N) \ S| / N`.
    pub not_in_s_fraction: f64,
    /// `|fraction - product| / product`.
    pub mertens_relative_gap: f64,
    /// `N Σ_j (|P_j| / (1+α)^j)²`, the pair-count bound on `S \ ∪ S_j`.
    pub pair_bound: f64,
    /// Block primes equal to `D0`: in a block but outside `S`.
    pub boundary_primes: Vec<u64>,
}

impl CoverageReport {
    pub fn line(&self, name: &str) -> Option<&CoverageLine> {
        self.lines.iter().find(|l| l.name == name)
    }
}

pub fn coverage_report(d: &Decomposition) -> CoverageReport {
    let p = d.params();
    let c = d.counts();
    let nf = p.n as f64;
    let line = |name, measured: u64, mult: f64| {
        let reference = mult * p.alpha * nf;
        CoverageLine {
            name,
            measured,
            fraction: measured as f64 / nf,
            reference_multiplier: mult,
            reference,
            holds: (measured as f64) <= reference,
        }
    };
    let lines = vec![
        line("outside_s", c.not_in_s, 1.0),
        line("s_multiple", c.in_s_multiple, 1.0),
        line("s_j_complement", c.sum_complement, 2.0),
        line("leftover", c.leftover, 3.0),
    ];
    let mertens = d.mertens_product();
    let not_in_s_fraction = c.not_in_s as f64 / nf;
    let pair_bound = nf
        * d.parts()
            .iter()
            .map(|part| (part.block.len() as f64 / part.block.lo).powi(2))
            .sum::<f64>();
    CoverageReport {
        n: p.n,
        alpha: p.alpha,
        j0: p.j0,
        j1: p.j1,
        d0: p.d0(),
        d1: p.d1(),
        lines,
        mertens_product: mertens,
        log_ratio: p.d0().ln() / p.d1().ln(),
        inverse_j0: 1.0 / p.j0 as f64,
        not_in_s_fraction,
        mertens_relative_gap: (not_in_s_fraction - mertens).abs() / mertens,
        pair_bound,
        boundary_primes: d.boundary_primes().to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;
    use crate::decomp::{build_decomposition, DecompositionParams};

    #[test]
    fn fractions_are_probabilities() {
        let params = DecompositionParams::new(100_000, 1.0, 1, 4).unwrap();
        let d = build_decomposition(&params, &sieve_primes(100).unwrap()).unwrap();
        let r = coverage_report(&d);
        for l in &r.lines {
            assert!((0.0..=1.0).contains(&l.fraction), "{}", l.name);
        }
        assert!((0.0..=1.0).contains(&r.mertens_product));
        let again = coverage_report(&build_decomposition(&params, &sieve_primes(100).unwrap()).unwrap());
        assert_eq!(format!("{r:?}"), format!("{again:?}"));
    }
}
