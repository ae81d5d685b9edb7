//! Exact descriptors for the real numbers that enter matrix entries, phases
//! and cusp directions.
//!
//! A [`SymReal`] is `q0 + q1·κ` with rational `q0, q1` and `κ` one of `√d`
//! (`d` squarefree), `e` or `π`. Rationality of ratios of such numbers is
//! decided exactly; floating point is used only for evaluation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    /// `√d` with `d >= 2` squarefree.
    Sqrt(u64),
    E,
    Pi,
}

impl Constant {
    fn is_transcendental(self) -> bool {
        !matches!(self, Constant::Sqrt(_))
    }

    /// `κ · 2^bits` to within one unit.
    pub fn fixed(self, bits: u32) -> BigInt {
        match self {
            Constant::Sqrt(d) => (BigInt::from(d) << (2 * bits as usize)).sqrt(),
            Constant::E => e_fixed(bits),
            Constant::Pi => pi_fixed(bits),
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Sqrt(d) => write!(f, "sqrt{d}"),
            Constant::E => write!(f, "e"),
            Constant::Pi => write!(f, "pi"),
        }
    }
}

const GUARD: u32 = 32;

fn e_fixed(bits: u32) -> BigInt {
    let g = bits + GUARD;
    let mut term = BigInt::one() << g as usize;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        sum += &term;
        k += 1;
        term /= k;
    }
    round_shift(&sum, GUARD)
}

/// `atan(1/x) · 2^g` by its alternating series.
fn atan_inv(x: u64, g: u32) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << g as usize) / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn pi_fixed(bits: u32) -> BigInt {
    let g = bits + GUARD;
    let pi = atan_inv(5, g) * 16 - atan_inv(239, g) * 4;
    round_shift(&pi, GUARD)
}

fn round_shift(v: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return v.clone();
    }
    (v + (BigInt::one() << (s as usize - 1))) >> s as usize
}

/// `round(q · 2^bits)`.
pub fn rational_fixed(q: &BigRational, bits: u32) -> BigInt {
    let num: BigInt = q.numer() << (bits as usize + 1);
    let den = q.denom();
    // round half up: floor((2 num 2^bits + den) / (2 den))
    (num + den).div_floor(&(den << 1usize))
}

/// Splits `n = k² · d` with `d` squarefree.
fn squarefree_split(n: u64) -> (u64, u64) {
    let mut k = 1u64;
    let mut d = n;
    let mut p = 2u64;
    while p * p <= d {
        while d % (p * p) == 0 {
            d /= p * p;
            k *= p;
        }
        p += 1;
    }
    (k, d)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `q0 + q1·κ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymReal {
    rational: BigRational,
    coeff: BigRational,
    constant: Option<Constant>,
}

impl SymReal {
    pub fn from_rational(r: BigRational) -> Self {
        SymReal {
            rational: r,
            coeff: BigRational::zero(),
            constant: None,
        }
    }

    pub fn int(v: i64) -> Self {
        Self::from_rational(q(v, 1))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// `q0 + q1·κ`, normalised so that a zero coefficient drops the constant.
    pub fn new(rational: BigRational, coeff: BigRational, constant: Constant) -> Self {
        if coeff.is_zero() {
            return Self::from_rational(rational);
        }
        SymReal {
            rational,
            coeff,
            constant: Some(constant),
        }
    }

    pub fn constant(c: Constant) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), c)
    }

    /// `√n` for `n >= 0`; perfect squares give rationals.
    pub fn sqrt(n: u64) -> Self {
        let (k, d) = squarefree_split(n);
        if d == 1 || n == 0 {
            return Self::int(if n == 0 { 0 } else { k as i64 });
        }
        Self::new(BigRational::zero(), q(k as i64, 1), Constant::Sqrt(d))
    }

    /// `(1 + √5) / 2`.
    pub fn golden() -> Self {
        Self::new(q(1, 2), q(1, 2), Constant::Sqrt(5))
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn coefficient(&self) -> &BigRational {
        &self.coeff
    }

    pub fn constant_tag(&self) -> Option<Constant> {
        self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_none() && self.rational.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.constant.is_none().then_some(&self.rational)
    }

    pub fn neg(&self) -> Self {
        SymReal {
            rational: -self.rational.clone(),
            coeff: -self.coeff.clone(),
            constant: self.constant,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        match self.constant {
            Some(c) => Self::new(&self.rational * r, &self.coeff * r, c),
            None => Self::from_rational(&self.rational * r),
        }
    }

    fn common_constant(&self, other: &Self) -> Result<Option<Constant>> {
        match (self.constant, other.constant) {
            (None, c) | (c, None) => Ok(c),
            (Some(a), Some(b)) if a == b => Ok(Some(a)),
            (Some(a), Some(b)) => Err(Error::UnsupportedDescriptor(format!(
                "combination of {a} and {b} leaves the symbolic vocabulary"
            ))),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let c = self.common_constant(other)?;
        let r = &self.rational + &other.rational;
        Ok(match c {
            Some(c) => Self::new(r, &self.coeff + &other.coeff, c),
            None => Self::from_rational(r),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        match (self.constant, other.constant) {
            (Some(Constant::Sqrt(a)), Some(Constant::Sqrt(b))) if a == b => {
                let d = q(a as i64, 1);
                let rational = &self.rational * &other.rational + &self.coeff * &other.coeff * d;
                let coeff = &self.rational * &other.coeff + &self.coeff * &other.rational;
                Ok(Self::new(rational, coeff, Constant::Sqrt(a)))
            }
            _ => Err(Error::UnsupportedDescriptor(format!(
                "product ({self})·({other}) leaves the symbolic vocabulary"
            ))),
        }
    }

    /// `round(v · 2^bits)`.
    pub fn to_fixed(&self, bits: u32) -> BigInt {
        match self.constant {
            None => rational_fixed(&self.rational, bits),
            Some(c) => {
                let g = bits + GUARD;
                let k = c.fixed(g);
                let part = (self.coeff.numer() * k).div_floor(self.coeff.denom());
                round_shift(&(rational_fixed(&self.rational, g) + part), GUARD)
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.to_fixed(80);
        crate::scalar::big_ratio_f64(&v, &(BigInt::one() << 80usize))
    }

    /// Fractional part as a 128-bit binary fraction.
    pub fn frac_u128(&self) -> u128 {
        let v = self.to_fixed(128);
        let m: BigInt = BigInt::one() << 128usize;
        v.mod_floor(&m).to_u128().expect("reduced below 2^128")
    }

    /// Parses sums of terms such as `3/4`, `0.5`, `sqrt2`, `sqrt(5)/2`,
    /// `1/2+1/2*sqrt5`, `2pi`, `-e`, `phi`.
    pub fn parse(src: &str) -> Result<Self> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(invalid(src, "empty expression"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'*' | b'/' | b'(' | b':') {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc = SymReal::zero();
        for t in terms {
            let (sign, body) = match t.as_bytes()[0] {
                b'+' => (1, &t[1..]),
                b'-' => (-1, &t[1..]),
                _ => (1, t),
            };
            let v = parse_term(body).map_err(|e| match e {
                Error::InvalidDescriptor(m) => invalid(src, &m),
                other => other,
            })?;
            acc = acc.add(&if sign < 0 { v.neg() } else { v })?;
        }
        Ok(acc)
    }
}

fn invalid(src: &str, why: &str) -> Error {
    Error::InvalidDescriptor(format!("`{src}`: {why}"))
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        let neg = i.starts_with('-');
        let digits = format!("{}{}", i.trim_start_matches(['-', '+']), f);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), f.len());
        let r = BigRational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

fn parse_atom(s: &str) -> Option<SymReal> {
    let lower = s.to_ascii_lowercase();
    match lower.as_str() {
        "e" | "exp1" | "exp(1)" => return Some(SymReal::constant(Constant::E)),
        "pi" | "π" => return Some(SymReal::constant(Constant::Pi)),
        "phi" | "golden" => return Some(SymReal::golden()),
        _ => {}
    }
    let rest = lower
        .strip_prefix("sqrt")
        .or_else(|| lower.strip_prefix('√'))?;
    let rest = rest.trim_start_matches(':');
    let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    let n: u64 = rest.parse().ok()?;
    Some(SymReal::sqrt(n))
}

fn parse_factor(s: &str) -> Result<SymReal> {
    if let Some(r) = parse_rational(s) {
        return Ok(SymReal::from_rational(r));
    }
    if let Some(a) = parse_atom(s) {
        return Ok(a);
    }
    // `2pi`, `3sqrt2`
    if let Some(pos) = s.find(|c: char| c.is_alphabetic() || c == '√' || c == 'π') {
        if pos > 0 {
            if let (Some(r), Some(a)) = (parse_rational(&s[..pos]), parse_atom(&s[pos..])) {
                return Ok(a.scale(&r));
            }
        }
    }
    // `sqrt5/2`, `pi/4`
    if let Some((a, d)) = s.rsplit_once('/') {
        if let (Some(a), Ok(d)) = (parse_atom(a), d.parse::<i64>()) {
            if d != 0 {
                return Ok(a.scale(&q(1, d)));
            }
        }
    }
    Err(Error::InvalidDescriptor(format!("unrecognised term `{s}`")))
}

fn parse_term(s: &str) -> Result<SymReal> {
    let mut acc = SymReal::one();
    for part in s.split('*') {
        acc = acc.mul(&parse_factor(part)?)?;
    }
    Ok(acc)
}

impl fmt::Display for SymReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.constant {
            None => write!(f, "{}", self.rational),
            Some(c) => {
                let coeff = if self.coeff.is_one() {
                    String::new()
                } else if (-&self.coeff).is_one() {
                    "-".into()
                } else {
                    format!("{}*", self.coeff)
                };
                if self.rational.is_zero() {
                    write!(f, "{coeff}{c}")
                } else if coeff.starts_with('-') {
                    write!(f, "{}-{}{c}", self.rational, &coeff[1..])
                } else {
                    write!(f, "{}+{coeff}{c}", self.rational)
                }
            }
        }
    }
}

/// A point of the projective line `ℚ ∪ {∞}` or an irrational, described exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointDescriptor {
    Infinity,
    Rational(BigRational),
    /// Root of `a z² + b z + c` with `gcd(a, b, c) = 1`, `a > 0` and
    /// discriminant positive and not a square; `plus` selects `(-b + √D)/(2a)`.
    QuadraticSurd {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        plus: bool,
    },
    NonQuadraticIrrational(String),
}

impl PointDescriptor {
    /// Validated surd, normalised to a primitive polynomial with `a > 0`.
    pub fn surd(a: BigInt, b: BigInt, c: BigInt, plus: bool) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidDescriptor("surd with a = 0 is not quadratic".into()));
        }
        let d: BigInt = &b * &b - BigInt::from(4) * &a * &c;
        if !d.is_positive() {
            return Err(Error::InvalidDescriptor(format!("discriminant {d} is not positive")));
        }
        let r = d.sqrt();
        if &r * &r == d {
            return Err(Error::InvalidDescriptor(format!("discriminant {d} is a perfect square")));
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / &g, b / &g, c / &g);
        let mut plus = plus;
        if a.is_negative() {
            a = -a;
            b = -b;
            c = -c;
            plus = !plus;
        }
        Ok(PointDescriptor::QuadraticSurd { a, b, c, plus })
    }

    pub fn discriminant(&self) -> Option<BigInt> {
        match self {
            PointDescriptor::QuadraticSurd { a, b, c, .. } => Some(b * b - BigInt::from(4) * a * c),
            _ => None,
        }
    }

    pub fn is_rational_or_infinite(&self) -> bool {
        matches!(self, PointDescriptor::Infinity | PointDescriptor::Rational(_))
    }

    /// Exact descriptor of a symbolic real.
    pub fn of_real(v: &SymReal) -> Self {
        match v.constant {
            None => PointDescriptor::Rational(v.rational.clone()),
            Some(Constant::Sqrt(d)) => surd_from_field(&v.rational, &v.coeff, d),
            Some(_) => PointDescriptor::NonQuadraticIrrational(v.to_string()),
        }
    }

    /// Exact descriptor of `num / den`.
    pub fn of_ratio(num: &SymReal, den: &SymReal) -> Result<Self> {
        if den.is_zero() {
            return Ok(PointDescriptor::Infinity);
        }
        let (a0, a1) = (&num.rational, &num.coeff);
        let (c0, c1) = (&den.rational, &den.coeff);
        match (num.constant, den.constant) {
            (ka, kc) if ka == kc || ka.is_none() || kc.is_none() => {
                let k = ka.or(kc);
                if a0 * c1 == a1 * c0 {
                    let r = if c1.is_zero() { a0 / c0 } else { a1 / c1 };
                    return Ok(PointDescriptor::Rational(r));
                }
                match k {
                    Some(Constant::Sqrt(d)) => {
                        // (a0 + a1√d)(c0 - c1√d) / (c0² - c1² d)
                        let dd = BigRational::from_integer(BigInt::from(d));
                        let norm = c0 * c0 - c1 * c1 * &dd;
                        let x = (a0 * c0 - a1 * c1 * &dd) / &norm;
                        let y = (a1 * c0 - a0 * c1) / &norm;
                        Ok(surd_from_field(&x, &y, d))
                    }
                    _ => Ok(PointDescriptor::NonQuadraticIrrational(format!("({num})/({den})"))),
                }
            }
            (Some(Constant::Sqrt(d1)), Some(Constant::Sqrt(d2))) => {
                if a0.is_zero() && c0.is_zero() {
                    // (a1/c1) √d1/√d2 = (a1/(c1 d2)) √(d1 d2)
                    let ratio = a1 / (c1 * BigRational::from_integer(BigInt::from(d2)));
                    let s = SymReal::sqrt(d1 * d2).scale(&ratio);
                    Ok(PointDescriptor::of_real(&s))
                } else {
                    Ok(PointDescriptor::NonQuadraticIrrational(format!("({num})/({den})")))
                }
            }
            (Some(ka), Some(kc)) if ka.is_transcendental() && kc.is_transcendental() => {
                Err(Error::UnsupportedDescriptor(format!(
                    "rationality of ({num})/({den}) mixes {ka} and {kc}"
                )))
            }
            _ => Ok(PointDescriptor::NonQuadraticIrrational(format!("({num})/({den})"))),
        }
    }

    /// Parses `inf`, `p/q`, `surd:a,b,c`, `sqrt:d`, `golden`, `e`, `pi`, or
    /// any [`SymReal`] expression.
    pub fn parse(src: &str) -> Result<Self> {
        let s = src.trim();
        let lower = s.to_ascii_lowercase();
        if matches!(lower.as_str(), "inf" | "infinity" | "∞") {
            return Ok(PointDescriptor::Infinity);
        }
        if let Some(rest) = lower.strip_prefix("surd:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(invalid(src, "surd needs three integers a,b,c"));
            }
            let mut coef = Vec::new();
            for p in parts {
                coef.push(p.parse::<BigInt>().map_err(|_| invalid(src, "surd coefficients must be integers"))?);
            }
            let c = coef.pop().unwrap();
            let b = coef.pop().unwrap();
            let a = coef.pop().unwrap();
            return Self::surd(a, b, c, true);
        }
        Ok(Self::of_real(&SymReal::parse(s)?))
    }
}

/// Descriptor of `x + y√d`.
fn surd_from_field(x: &BigRational, y: &BigRational, d: u64) -> PointDescriptor {
    if y.is_zero() {
        return PointDescriptor::Rational(x.clone());
    }
    // (z - x)² = y² d  →  z² - 2x z + x² - y² d = 0
    let dd = BigRational::from_integer(BigInt::from(d));
    let b = -(x * BigRational::from_integer(BigInt::from(2)));
    let c = x * x - y * y * dd;
    let l = b.denom().lcm(c.denom());
    let scale = BigRational::from_integer(l.clone());
    let (bi, ci) = ((b * &scale).to_integer(), (c * &scale).to_integer());
    // z = x + y√d is the larger root exactly when y > 0
    PointDescriptor::surd(l, bi, ci, y.is_positive()).expect("irrational quadratic")
}

impl fmt::Display for PointDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointDescriptor::Infinity => write!(f, "inf"),
            PointDescriptor::Rational(r) => write!(f, "{r}"),
            PointDescriptor::QuadraticSurd { a, b, c, plus } => {
                write!(f, "surd:{a},{b},{c}{}", if *plus { "" } else { ":minus" })
            }
            PointDescriptor::NonQuadraticIrrational(s) => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hex(v: &BigInt) -> String {
        format!("{v:x}")
    }

    #[test]
    fn constants_at_256_bits() {
        assert_eq!(
            hex(&(Constant::Sqrt(2).fixed(256))),
            "16a09e667f3bcc908b2fb1366ea957d3e3adec17512775099da2f590b0667322a"
        );
        let e = Constant::E.fixed(256);
        let pi = Constant::Pi.fixed(256);
        let e_ref = BigInt::parse_bytes(b"2b7e151628aed2a6abf7158809cf4f3c762e7160f38b4da56a784d9045190cfef", 16).unwrap();
        let pi_ref = BigInt::parse_bytes(b"3243f6a8885a308d313198a2e03707344a4093822299f31d0082efa98ec4e6c89", 16).unwrap();
        // references are floors; rounding may add one ulp
        assert!((&e - &e_ref).abs() <= BigInt::one());
        assert!((&pi - &pi_ref).abs() <= BigInt::one());
        let phi = SymReal::golden().to_fixed(256);
        let phi_ref = BigInt::parse_bytes(b"19e3779b97f4a7c15f39cc0605cedc8341082276bf3a27251f86c6a11d0c18e95", 16).unwrap();
        assert!((&phi - &phi_ref).abs() <= BigInt::one());
    }

    #[test]
    fn parse_and_print() {
        let g = SymReal::parse("1/2 + 1/2*sqrt5").unwrap();
        assert_eq!(g, SymReal::golden());
        assert_eq!(SymReal::parse("phi").unwrap(), g);
        assert_eq!(SymReal::parse("sqrt(8)").unwrap(), SymReal::sqrt(2).scale(&q(2, 1)));
        assert_eq!(SymReal::parse("sqrt5/2").unwrap().to_string(), "1/2*sqrt5");
        assert_eq!(SymReal::parse("0.25").unwrap(), SymReal::from_rational(q(1, 4)));
        assert_eq!(SymReal::parse("2pi").unwrap().to_string(), "2*pi");
        assert_eq!(SymReal::parse("1-e").unwrap().to_string(), "1-e");
        assert_eq!(SymReal::parse("sqrt9").unwrap(), SymReal::int(3));
        assert!((SymReal::parse("exp1").unwrap().to_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!(matches!(SymReal::parse("e+pi"), Err(Error::UnsupportedDescriptor(_))));
        assert!(matches!(SymReal::parse("foo"), Err(Error::InvalidDescriptor(_))));
    }

    #[test]
    fn surd_products_stay_in_the_field() {
        let a = SymReal::parse("1+sqrt2").unwrap();
        let b = SymReal::parse("1-sqrt2").unwrap();
        assert_eq!(a.mul(&b).unwrap(), SymReal::int(-1));
        assert!(SymReal::sqrt(2).mul(&SymReal::sqrt(3)).is_err());
    }

    #[test]
    fn fractional_phase() {
        let f = SymReal::sqrt(2).frac_u128();
        let expected = (std::f64::consts::SQRT_2 - 1.0) * 2f64.powi(128);
        assert!(((f as f64) - expected).abs() / expected < 1e-15);
        assert_eq!(SymReal::from_rational(q(-1, 4)).frac_u128(), 3u128 << 126);
    }

    #[test]
    fn cusp_directions() {
        let r = |s: &str| SymReal::parse(s).unwrap();
        assert_eq!(PointDescriptor::of_ratio(&r("1"), &r("0")).unwrap(), PointDescriptor::Infinity);
        assert_eq!(
            PointDescriptor::of_ratio(&r("3"), &r("4")).unwrap(),
            PointDescriptor::Rational(q(3, 4))
        );
        assert_eq!(
            PointDescriptor::of_ratio(&r("2sqrt2"), &r("sqrt2")).unwrap(),
            PointDescriptor::Rational(q(2, 1))
        );
        assert_eq!(
            PointDescriptor::of_ratio(&r("2+2e"), &r("1+e")).unwrap(),
            PointDescriptor::Rational(q(2, 1))
        );
        let sqrt2 = PointDescriptor::of_ratio(&r("sqrt2"), &r("1")).unwrap();
        assert_eq!(sqrt2, PointDescriptor::parse("surd:1,0,-2").unwrap());
        assert_eq!(sqrt2.discriminant(), Some(BigInt::from(8)));
        // 1/(1+√2) = √2 - 1 is a root of z² + 2z - 1
        assert_eq!(
            PointDescriptor::of_ratio(&r("1"), &r("1+sqrt2")).unwrap(),
            PointDescriptor::surd(1.into(), 2.into(), (-1).into(), true).unwrap()
        );
        assert_eq!(
            PointDescriptor::of_ratio(&r("sqrt2"), &r("sqrt3")).unwrap(),
            PointDescriptor::of_real(&SymReal::sqrt(6).scale(&q(1, 3)))
        );
        assert!(matches!(
            PointDescriptor::of_ratio(&r("1+sqrt2"), &r("sqrt3")).unwrap(),
            PointDescriptor::NonQuadraticIrrational(_)
        ));
        assert!(matches!(
            PointDescriptor::of_ratio(&r("e"), &r("1")).unwrap(),
            PointDescriptor::NonQuadraticIrrational(_)
        ));
        assert!(matches!(
            PointDescriptor::of_ratio(&r("e"), &r("pi")),
            Err(Error::UnsupportedDescriptor(_))
        ));
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(PointDescriptor::parse("inf").unwrap(), PointDescriptor::Infinity);
        assert_eq!(PointDescriptor::parse("3/4").unwrap(), PointDescriptor::Rational(q(3, 4)));
        assert_eq!(
            PointDescriptor::parse("golden").unwrap(),
            PointDescriptor::parse("surd:1,-1,-1").unwrap()
        );
        assert_eq!(
            PointDescriptor::parse("surd:2,0,-4").unwrap(),
            PointDescriptor::parse("sqrt:2").unwrap()
        );
        assert!(matches!(PointDescriptor::parse("surd:1,0,-4"), Err(Error::InvalidDescriptor(_))));
        assert!(matches!(PointDescriptor::parse("surd:0,1,1"), Err(Error::InvalidDescriptor(_))));
    }
}
