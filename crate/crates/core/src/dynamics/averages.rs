use num_complex::Complex;
use serde::Serialize;

use super::observable::Observable;
use super::orbit::{Orbit, Precision};
use super::point::ModularPoint;
use super::quadrature::{haar_mean, QuadratureSpec};
use crate::arith::MultiplicativeTable;
use crate::error::{Error, Result};
use crate::summation::{pairwise_mean, pairwise_sum_by};

/// `f(Γ ξ u^n)` for `n = 0..=n_max`.
#[derive(Debug, Clone, Serialize)]
pub struct ObservableSeries {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    /// `(1/N) Σ_{n <= N} f(ξ u^{pn}) f(ξ u^{qn})`.
    pub value: f64,
    /// Square of the Haar mean of `f`.
    pub target: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DisjointnessRow {
    pub n: u64,
    /// `(1/N) Σ_{n <= N} ν(n) f(T^n ξ)`.
    pub total: Complex<f64>,
    /// Same sum with `f` replaced by `f - c`.
    pub centered: Complex<f64>,
    /// `c (1/N) Σ ν(n)`.
    pub constant: Complex<f64>,
    pub nu_mean: Complex<f64>,
    pub abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DisjointnessReport {
    pub observable: String,
    pub multiplicative: String,
    /// Haar mean `c` used for the split.
    pub mean: f64,
    pub rows: Vec<DisjointnessRow>,
}

impl ObservableSeries {
    pub fn sample(xi: &ModularPoint, f: &Observable, n_max: u64, precision: Precision) -> Result<Self> {
        let orbit = Orbit::new(xi, n_max, precision)?;
        let values = orbit.map(0, n_max, |c| f.eval(c.x, c.y, c.theta))?;
        Ok(ObservableSeries {
            label: f.label().to_string(),
            values,
        })
    }

    pub fn n_max(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    fn need(&self, n: u64) -> Result<()> {
        if self.values.is_empty() || n > self.n_max() {
            return Err(Error::Horizon {
                label: self.label.clone(),
                needed: n,
                available: self.values.len().saturating_sub(1) as u64,
            });
        }
        Ok(())
    }

    fn check_n(n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::Domain("averages need N >= 1".into()));
        }
        Ok(())
    }

    /// `(1/N) Σ_{n=1}^{N} f(T^n ξ)`.
    pub fn birkhoff(&self, n: u64) -> Result<f64> {
        Self::check_n(n)?;
        self.need(n)?;
        Ok(pairwise_mean::<f64, f64>(&self.values[1..=n as usize]))
    }

    pub fn correlation(&self, p: u64, q: u64, n: u64, mean: f64) -> Result<CorrelationEstimate> {
        Self::check_n(n)?;
        if p == 0 || q == 0 || p == q {
            return Err(Error::Domain(format!("correlation needs distinct positive p, q, got {p}, {q}")));
        }
        let top = p.max(q).checked_mul(n).ok_or(Error::Overflow("correlation horizon"))?;
        self.need(top)?;
        let prods: Vec<f64> = (1..=n)
            .map(|k| self.values[(p * k) as usize] * self.values[(q * k) as usize])
            .collect();
        let value = pairwise_mean::<f64, f64>(&prods);
        let target = mean * mean;
        Ok(CorrelationEstimate {
            p,
            q,
            n,
            value,
            target,
            gap: value - target,
        })
    }

    /// Rows of the disjointness sum at each `N` of the ladder, split around the mean `c`.
    pub fn disjointness(&self, nu: &MultiplicativeTable<f64>, ladder: &[u64], c: f64) -> Result<Vec<DisjointnessRow>> {
        ladder
            .iter()
            .map(|&n| {
                Self::check_n(n)?;
                self.need(n)?;
                nu.require(n)?;
                let nf = n as f64;
                let v = &self.values;
                let total = pairwise_sum_by(n as usize, &|i| nu.value(i as u64 + 1) * v[i + 1]) / nf;
                let centered = pairwise_sum_by(n as usize, &|i| nu.value(i as u64 + 1) * (v[i + 1] - c)) / nf;
                let nu_mean = pairwise_sum_by(n as usize, &|i| nu.value(i as u64 + 1)) / nf;
                Ok(DisjointnessRow {
                    n,
                    total,
                    centered,
                    constant: nu_mean * c,
                    nu_mean,
                    abs: total.norm(),
                })
            })
            .collect()
    }
}

fn mean_of(f: &Observable, spec: &QuadratureSpec) -> Result<f64> {
    match f.known_mean() {
        Some(m) => Ok(m),
        None => haar_mean(f, spec),
    }
}

pub fn birkhoff_average(f: &Observable, xi: &ModularPoint, n: u64, precision: Precision) -> Result<f64> {
    ObservableSeries::check_n(n)?;
    ObservableSeries::sample(xi, f, n, precision)?.birkhoff(n)
}

/// Empirical correlation of `f` along the `p`- and `q`-dilated orbits.
pub fn pair_correlation(
    f: &Observable,
    xi: &ModularPoint,
    p: u64,
    q: u64,
    n: u64,
    precision: Precision,
    spec: &QuadratureSpec,
) -> Result<CorrelationEstimate> {
    ObservableSeries::check_n(n)?;
    let top = p.max(q).checked_mul(n).ok_or(Error::Overflow("correlation horizon"))?;
    let mean = mean_of(f, spec)?;
    ObservableSeries::sample(xi, f, top, precision)?.correlation(p, q, n, mean)
}

/// `(f - c, c)` with `c` the Haar mean of `f`.
pub fn split_observable(f: &Observable, spec: &QuadratureSpec) -> Result<(Observable, f64)> {
    let c = mean_of(f, spec)?;
    Ok((f.shifted(c).with_known_mean(0.0), c))
}

pub fn mobius_disjointness_sum(
    xi: &ModularPoint,
    f: &Observable,
    ladder: &[u64],
    nu: &MultiplicativeTable<f64>,
    precision: Precision,
    spec: &QuadratureSpec,
) -> Result<DisjointnessReport> {
    let top = ladder.iter().copied().max().ok_or_else(|| Error::Domain("empty ladder".into()))?;
    ObservableSeries::check_n(top)?;
    nu.require(top)?;
    let c = mean_of(f, spec)?;
    let series = ObservableSeries::sample(xi, f, top, precision)?;
    Ok(DisjointnessReport {
        observable: f.label().to_string(),
        multiplicative: nu.label().to_string(),
        mean: c,
        rows: series.disjointness(nu, ladder, c)?,
    })
}
