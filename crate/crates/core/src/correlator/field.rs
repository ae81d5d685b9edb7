use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `x + y√d` with rational `x`, `y` and a fixed non-square integer `d > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quadratic {
    pub x: BigRational,
    pub y: BigRational,
    pub d: BigInt,
}

impl Quadratic {
    pub fn new(x: BigRational, y: BigRational, d: BigInt) -> Self {
        Quadratic { x, y, d }
    }

    pub fn rational(x: BigRational, d: &BigInt) -> Self {
        Quadratic::new(x, BigRational::zero(), d.clone())
    }

    pub fn int(v: i64, d: &BigInt) -> Self {
        Self::rational(BigRational::from_integer(v.into()), d)
    }

    /// `√d`.
    pub fn root(d: &BigInt) -> Self {
        Quadratic::new(BigRational::zero(), BigRational::one(), d.clone())
    }

    fn same_field(&self, o: &Self) {
        assert_eq!(self.d, o.d, "operands from different quadratic fields");
    }

    fn dq(&self) -> BigRational {
        BigRational::from_integer(self.d.clone())
    }

    /// Exact test; `√d` is irrational by construction.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        Quadratic::new(&self.x + &o.x, &self.y + &o.y, self.d.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_field(o);
        Quadratic::new(&self.x - &o.x, &self.y - &o.y, self.d.clone())
    }

    pub fn neg(&self) -> Self {
        Quadratic::new(-&self.x, -&self.y, self.d.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        let d = self.dq();
        Quadratic::new(
            &self.x * &o.x + &self.y * &o.y * d,
            &self.x * &o.y + &self.y * &o.x,
            self.d.clone(),
        )
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Quadratic::new(&self.x * r, &self.y * r, self.d.clone())
    }

    pub fn conj(&self) -> Self {
        Quadratic::new(self.x.clone(), -&self.y, self.d.clone())
    }

    /// `x² - d y²`.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - &self.y * &self.y * self.dq()
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Domain("division by zero in a quadratic field".into()));
        }
        Ok(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        let s = self.d.to_f64().unwrap_or(f64::NAN).sqrt();
        // avoid cancellation when x and y√d nearly cancel
        let (a, b) = (f(&self.x), f(&self.y) * s);
        if a != 0.0 && b != 0.0 && (a.signum() != b.signum()) {
            f(&self.norm()) / (a - b)
        } else {
            a + b
        }
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let sign = if self.y.is_negative() { "-" } else { "+" };
        let coeff = self.y.abs();
        let c = if coeff.is_one() { String::new() } else { format!("{coeff}*") };
        if self.x.is_zero() {
            write!(f, "{}{c}sqrt({})", if sign == "-" { "-" } else { "" }, self.d)
        } else {
            write!(f, "{}{sign}{c}sqrt({})", self.x, self.d)
        }
    }
}
