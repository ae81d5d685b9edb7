use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::big_ratio_f64;
use crate::symbolic::{PointDescriptor, SymReal};

/// Tolerance on `|det ξ - 1|`.
pub const DET_TOLERANCE: f64 = 1e-12;

/// A coset representative `ξ = (a, b; c, d)` with exact entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularPoint {
    entries: [SymReal; 4],
    det: f64,
    cusp: PointDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "cusp")]
pub enum Genericity {
    Generic,
    NonGeneric(String),
}

impl ModularPoint {
    pub fn new(a: SymReal, b: SymReal, c: SymReal, d: SymReal) -> Result<Self> {
        let bits = 128;
        let det_fixed = a.to_fixed(bits) * d.to_fixed(bits) - b.to_fixed(bits) * c.to_fixed(bits);
        let det = big_ratio_f64(&det_fixed, &(BigInt::one() << (2 * bits as usize)));
        if !((det - 1.0).abs() <= DET_TOLERANCE) {
            return Err(Error::Domain(format!("det ξ = {det} differs from 1")));
        }
        let cusp = PointDescriptor::of_ratio(&a, &c)?;
        Ok(ModularPoint {
            entries: [a, b, c, d],
            det,
            cusp,
        })
    }

    pub fn identity() -> Self {
        Self::new(SymReal::one(), SymReal::zero(), SymReal::zero(), SymReal::one()).expect("identity")
    }

    /// `ξ = (x, -1; 1, 0)`, so that `ξ(∞) = x`.
    pub fn with_cusp(x: SymReal) -> Result<Self> {
        Self::new(x, SymReal::int(-1), SymReal::one(), SymReal::zero())
    }

    /// `ξ = (1, 0; t, 1)`, so that `ξ(∞) = 1/t`.
    pub fn lower(t: SymReal) -> Result<Self> {
        Self::new(SymReal::one(), SymReal::zero(), t, SymReal::one())
    }

    pub fn entries(&self) -> &[SymReal; 4] {
        &self.entries
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// Exact `ξ(∞) = a/c`.
    pub fn cusp_direction(&self) -> &PointDescriptor {
        &self.cusp
    }

    /// Whether all entries are integers, in which case the orbit is a fixed point.
    pub fn is_integral(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.as_rational().is_some_and(|r| r.is_integer()))
    }

    /// `ξ u^m = (a, am + b; c, cm + d)`.
    pub fn advanced(&self, m: i64) -> Result<Self> {
        let [a, b, c, d] = &self.entries;
        let mm = SymReal::int(m);
        Self::new(a.clone(), a.mul(&mm)?.add(b)?, c.clone(), c.mul(&mm)?.add(d)?)
    }

    /// Generic for Haar measure exactly when `ξ(∞)` is irrational.
    pub fn genericity(&self) -> Genericity {
        genericity(self)
    }
}

pub fn genericity(xi: &ModularPoint) -> Genericity {
    if xi.cusp.is_rational_or_infinite() {
        Genericity::NonGeneric(xi.cusp.to_string())
    } else {
        Genericity::Generic
    }
}

impl fmt::Display for ModularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "point:matrix:{a},{b},{c},{d}")
    }
}

/// Parses `point:identity`, `point:cusp:x=<real>`, `point:lower:t=<real>` and
/// `point:matrix:a,b,c,d`; the `point:` prefix is optional.
impl FromStr for ModularPoint {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let s = src.trim();
        let s = s.strip_prefix("point:").unwrap_or(s);
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let bad = |why: &str| Error::InvalidDescriptor(format!("point spec `{src}`: {why}"));
        let named = |key: &str| -> Result<SymReal> {
            let v = args
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| bad(&format!("expected {key}=<real>")))?;
            SymReal::parse(v)
        };
        match kind {
            "identity" | "id" => Ok(ModularPoint::identity()),
            "cusp" => ModularPoint::with_cusp(named("x")?),
            "lower" => ModularPoint::lower(named("t")?),
            "matrix" => {
                let parts: Vec<&str> = args.split(',').collect();
                if parts.len() != 4 {
                    return Err(bad("matrix needs four entries a,b,c,d"));
                }
                let e = parts.iter().map(|p| SymReal::parse(p)).collect::<Result<Vec<_>>>()?;
                let [a, b, c, d]: [SymReal; 4] = e.try_into().expect("four entries");
                ModularPoint::new(a, b, c, d)
            }
            _ => Err(bad("unknown point kind")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn parsing_and_genericity() {
        let id: ModularPoint = "point:identity".parse().unwrap();
        assert!(id.is_integral());
        assert_eq!(id.genericity(), Genericity::NonGeneric("inf".into()));
        let e: ModularPoint = "point:cusp:x=e".parse().unwrap();
        assert_eq!(e.genericity(), Genericity::Generic);
        assert!(matches!(e.cusp_direction(), PointDescriptor::NonQuadraticIrrational(_)));
        let lower: ModularPoint = "point:lower:t=exp1".parse().unwrap();
        assert_eq!(lower.genericity(), Genericity::Generic);
        let r: ModularPoint = "point:cusp:x=3/4".parse().unwrap();
        assert_eq!(
            r.cusp_direction(),
            &PointDescriptor::Rational(BigRational::new(3.into(), 4.into()))
        );
        assert_eq!(r.genericity(), Genericity::NonGeneric("3/4".into()));
        let m: ModularPoint = "point:matrix:sqrt2,0,0,1/2*sqrt2".parse().unwrap();
        assert_eq!(m.genericity(), Genericity::NonGeneric("inf".into()));
        assert!("point:matrix:2,0,0,1".parse::<ModularPoint>().is_err());
        assert!("point:spiral".parse::<ModularPoint>().is_err());
    }

    #[test]
    fn advancing_shifts_the_second_column() {
        let xi: ModularPoint = "point:cusp:x=sqrt2".parse().unwrap();
        let moved = xi.advanced(3).unwrap();
        assert_eq!(moved.entries()[1], SymReal::parse("3sqrt2-1").unwrap());
        assert_eq!(moved.entries()[3], SymReal::int(3));
        assert_eq!(moved.cusp_direction(), xi.cusp_direction());
    }
}
