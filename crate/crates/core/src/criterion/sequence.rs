use std::io::BufRead;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::symbolic::SymReal;

/// Tolerance on `|F(n)| <= 1`.
pub const MODULUS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
enum Kind<T> {
    Constant(Complex<T>),
    /// `exp(2πi n θ)` with `θ mod 1` stored as a 128-bit binary fraction.
    Phase(u128),
    /// Values for `n = 1..=len`, slot 0 unused.
    Table(Arc<Vec<Complex<T>>>),
}

/// A sequence `F: [1, horizon] → ℂ` with `|F| <= 1`.
#[derive(Debug, Clone)]
pub struct BoundedSequence<T = f64> {
    label: String,
    horizon: u64,
    kind: Kind<T>,
}

/// `exp(2πi t)` for the binary fraction `t = phase / 2^128`.
#[inline]
pub fn unit_phase<T: Real>(phase: u128) -> Complex<T> {
    // centre on [-1/2, 1/2) before scaling, keeping the argument small
    let signed = phase as i128;
    let t = (signed >> 40) as f64 * 2f64.powi(-88);
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    Complex::new(T::lit(c), T::lit(s))
}

impl<T: Real> BoundedSequence<T> {
    pub fn constant(value: Complex<T>) -> Result<Self> {
        if value.norm().as_f64() > 1.0 + MODULUS_SLACK {
            return Err(Error::Domain(format!("constant sequence has modulus above 1: {value}")));
        }
        Ok(BoundedSequence {
            label: format!("const:{value}"),
            horizon: u64::MAX,
            kind: Kind::Constant(value),
        })
    }

    /// `F(n) = exp(2πi n θ)`, with the phase reduced exactly in 128-bit fixed point.
    pub fn exponential(theta: &SymReal) -> Self {
        BoundedSequence {
            label: format!("exp:theta={theta}"),
            horizon: u64::MAX,
            kind: Kind::Phase(theta.frac_u128()),
        }
    }

    /// Tabulates `f(1..=horizon)` in parallel.
    pub fn tabulate(label: &str, horizon: u64, f: impl Fn(u64) -> Complex<T> + Sync) -> Result<Self> {
        let mut values = vec![Complex::new(T::zero(), T::zero()); horizon as usize + 1];
        values[1..].par_iter_mut().enumerate().for_each(|(i, v)| *v = f(i as u64 + 1));
        Self::from_values(label, values)
    }

    /// Takes ownership of `values[1..]`; `values[0]` is ignored.
    pub fn from_values(label: &str, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain("a tabulated sequence needs at least one value".into()));
        }
        if let Some(n) = (1..values.len()).find(|&n| values[n].norm().as_f64() > 1.0 + MODULUS_SLACK) {
            return Err(Error::Domain(format!(
                "sequence `{label}` has |F({n})| = {} > 1",
                values[n].norm()
            )));
        }
        Ok(BoundedSequence {
            label: label.to_string(),
            horizon: values.len() as u64 - 1,
            kind: Kind::Table(Arc::new(values)),
        })
    }

    /// Reads a CSV with header and rows `n,re[,im]` for `n = 1, 2, ...` in order.
    pub fn read_csv<R: BufRead>(label: &str, reader: R) -> Result<Self> {
        let mut values = vec![Complex::new(T::zero(), T::zero())];
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::Domain(format!("reading `{label}`: {e}")))?;
            let line = line.trim();
            if i == 0 || line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Domain(format!("`{label}` line {}: expected n,re[,im]", i + 1));
            let n: u64 = cols.first().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
            if n != values.len() as u64 {
                return Err(Error::Domain(format!(
                    "`{label}` line {}: expected n = {}, found {n}",
                    i + 1,
                    values.len()
                )));
            }
            let re: f64 = cols.get(1).and_then(|c| c.parse().ok()).ok_or_else(bad)?;
            let im: f64 = match cols.get(2) {
                Some(c) => c.parse().map_err(|_| bad())?,
                None => 0.0,
            };
            values.push(Complex::new(T::lit(re), T::lit(im)));
        }
        Self::from_values(label, values)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn require(&self, n: u64) -> Result<()> {
        if n > self.horizon {
            Err(Error::Horizon {
                label: self.label.clone(),
                needed: n,
                available: self.horizon,
            })
        } else {
            Ok(())
        }
    }

    /// `F(n)` for `1 <= n <= horizon`.
    #[inline]
    pub fn eval(&self, n: u64) -> Complex<T> {
        match &self.kind {
            Kind::Constant(c) => *c,
            Kind::Phase(theta) => unit_phase(theta.wrapping_mul(n as u128)),
            Kind::Table(v) => v[n as usize],
        }
    }

    /// The sequence multiplied by a unimodular constant.
    pub fn rotated(&self, c: Complex<T>) -> Result<Self> {
        if (c.norm().as_f64() - 1.0).abs() > MODULUS_SLACK {
            return Err(Error::Domain("rotation must have modulus 1".into()));
        }
        let label = format!("{}*{c}", self.label);
        match &self.kind {
            Kind::Constant(v) => Ok(BoundedSequence {
                label,
                horizon: self.horizon,
                kind: Kind::Constant(*v * c),
            }),
            _ => Self::tabulate(&label, self.horizon.min(u32::MAX as u64), |n| self.eval(n) * c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_match_floating_evaluation() {
        let f = BoundedSequence::<f64>::exponential(&SymReal::sqrt(2));
        for n in [1u64, 2, 17, 1000, 123_456] {
            let t = (n as f64 * std::f64::consts::SQRT_2).fract();
            let want = Complex::new((std::f64::consts::TAU * t).cos(), (std::f64::consts::TAU * t).sin());
            assert!((f.eval(n) - want).norm() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn tables_enforce_the_bound() {
        assert!(BoundedSequence::<f64>::from_values("x", vec![Complex::new(0.0, 0.0), Complex::new(1.5, 0.0)]).is_err());
        let t = BoundedSequence::<f64>::tabulate("sq", 10, |n| Complex::new(1.0 / n as f64, 0.0)).unwrap();
        assert_eq!(t.eval(4).re, 0.25);
        assert!(matches!(t.require(11), Err(Error::Horizon { .. })));
    }

    #[test]
    fn csv_input() {
        let csv = "n,re,im\n1,0.5,0\n2,0,-1\n";
        let t = BoundedSequence::<f64>::read_csv("t", csv.as_bytes()).unwrap();
        assert_eq!(t.horizon(), 2);
        assert_eq!(t.eval(2), Complex::new(0.0, -1.0));
        assert!(BoundedSequence::<f64>::read_csv("t", "n,re\n2,0\n".as_bytes()).is_err());
    }
}
