use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::field::Quadratic;
use crate::error::{Error, Result};
use crate::symbolic::PointDescriptor;

/// Tolerance between the exact group element and the character of the
/// conjugated stabilizer, evaluated in floating point.
pub const CHI_TOLERANCE: f64 = 1e-10;

type RatMatrix = [[BigRational; 2]; 2];

fn ser_display<S: Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_matrix<S: Serializer>(m: &RatMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: [[String; 2]; 2] = [
        [m[0][0].to_string(), m[0][1].to_string()],
        [m[1][0].to_string(), m[1][1].to_string()],
    ];
    strings.serialize(s)
}

/// Intersection of the correlator group with `ℚ*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelatorGroup {
    /// All of `ℚ*`.
    FullRationalGroup,
    /// Only `{1}`.
    TrivialGroup,
}

/// A rational matrix fixing `z`, and the character of its conjugate into `P_∞`.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: RatMatrix,
    #[serde(serialize_with = "ser_display")]
    pub chi: Quadratic,
    pub chi_f64: f64,
    pub rational: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelatorClass {
    #[serde(serialize_with = "ser_display")]
    pub descriptor: PointDescriptor,
    pub group: CorrelatorGroup,
    pub witness: Option<Witness>,
}

/// Stabilizer element of a quadratic surd built from `(t, u)`.
#[derive(Debug, Clone, Serialize)]
pub struct SurdElement {
    #[serde(serialize_with = "ser_display")]
    pub descriptor: PointDescriptor,
    #[serde(serialize_with = "ser_display")]
    pub d: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub t: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub u: BigRational,
    /// `((t - bu)/2, -cu; au, (t + bu)/2)`.
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: RatMatrix,
    /// `(t + u√d) / (t - u√d)` for the `+` root.
    #[serde(serialize_with = "ser_display")]
    pub value: Quadratic,
    pub value_f64: f64,
    /// `M z = z`, checked exactly.
    pub stabilizes: bool,
    /// `α/δ` of the diagonalised `M`, computed exactly.
    #[serde(serialize_with = "ser_display")]
    pub conjugated_chi: Quadratic,
    /// `|χ - value|` in floating point.
    pub chi_error: f64,
    pub is_rational: bool,
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

fn lift(m: &RatMatrix, d: &BigInt) -> [[Quadratic; 2]; 2] {
    m.clone().map(|row| row.map(|e| Quadratic::rational(e, d)))
}

fn mat_mul(p: &[[Quadratic; 2]; 2], q: &[[Quadratic; 2]; 2]) -> [[Quadratic; 2]; 2] {
    let e = |i: usize, j: usize| p[i][0].mul(&q[0][j]).add(&p[i][1].mul(&q[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `M z == z` over `ℚ(√d)`.
fn fixes(m: &[[Quadratic; 2]; 2], z: &Quadratic) -> bool {
    let num = m[0][0].mul(z).add(&m[0][1]);
    let den = m[1][0].mul(z).add(&m[1][1]);
    !den.is_zero() && num == z.mul(&den)
}

/// The roots `(z, z')` of the surd polynomial, `z` being the selected one.
fn roots(a: &BigInt, b: &BigInt, d: &BigInt, plus: bool) -> (Quadratic, Quadratic) {
    let two_a = rat(a) * BigRational::from_integer(2.into());
    let x = -rat(b) / &two_a;
    let y = two_a.recip();
    let z = Quadratic::new(x, if plus { y } else { -y }, d.clone());
    let zc = z.conj();
    (z, zc)
}

/// Group element for the `+` root of `a z² + b z + c`.
pub fn surd_group_element(
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    t: &BigRational,
    u: &BigRational,
) -> Result<SurdElement> {
    let z = PointDescriptor::surd(a.clone(), b.clone(), c.clone(), true)?;
    surd_element_for(&z, t, u)
}

/// Group element for any surd descriptor.
pub fn surd_element_for(z: &PointDescriptor, t: &BigRational, u: &BigRational) -> Result<SurdElement> {
    let PointDescriptor::QuadraticSurd { a, b, c, plus } = z else {
        return Err(Error::InvalidDescriptor(format!("`{z}` is not a quadratic surd")));
    };
    let d = z.discriminant().expect("surd has a discriminant");
    let norm = t * t - rat(&d) * u * u;
    if !norm.is_positive() {
        return Err(Error::Domain(format!("t² - d u² = {norm} must be positive")));
    }
    let (zq, zc) = roots(a, b, &d, *plus);
    let half = BigRational::new(1.into(), 2.into());
    let (a, b, c) = (rat(a), rat(b), rat(c));
    let matrix: RatMatrix = [
        [(t - &b * u) * &half, -(&c * u)],
        [&a * u, (t + &b * u) * &half],
    ];
    let m = lift(&matrix, &d);
    let stabilizes = fixes(&m, &zq) && fixes(&m, &zc);

    let one = Quadratic::int(1, &d);
    let sigma = [[zq.clone(), zc.clone()], [one.clone(), one.clone()]];
    let gap = zq.sub(&zc).inv()?;
    let sigma_inv = [[gap.clone(), zc.neg().mul(&gap)], [gap.neg(), zq.mul(&gap)]];
    let conj = mat_mul(&mat_mul(&sigma_inv, &m), &sigma);
    if !conj[1][0].is_zero() {
        return Err(Error::Domain("stabilizer did not conjugate into upper-triangular form".into()));
    }
    let conjugated_chi = conj[0][0].div(&conj[1][1])?;

    let ud = Quadratic::new(BigRational::zero(), u.clone(), d.clone());
    let tq = Quadratic::rational(t.clone(), &d);
    let sign = if *plus { ud } else { ud.neg() };
    let value = tq.add(&sign).div(&tq.sub(&sign))?;
    let value_f64 = value.to_f64();
    let chi_error = (conjugated_chi.to_f64() - value_f64).abs();
    if !(chi_error <= CHI_TOLERANCE * value_f64.abs().max(1.0)) || conjugated_chi != value {
        return Err(Error::Domain(format!(
            "character of the conjugated stabilizer {conjugated_chi} differs from {value}"
        )));
    }
    Ok(SurdElement {
        descriptor: z.clone(),
        is_rational: value.is_rational(),
        d,
        t: t.clone(),
        u: u.clone(),
        matrix,
        value,
        value_f64,
        stabilizes,
        conjugated_chi,
        chi_error,
    })
}

fn rational_witness(z: Option<&BigRational>) -> Witness {
    let two = BigRational::from_integer(2.into());
    let (one, zero) = (BigRational::one(), BigRational::zero());
    // σ diag(2, 1) σ⁻¹ with σ = (z, -1; 1, 0) sending ∞ to z, or σ = 1 at ∞
    let matrix = match z {
        None => [[two.clone(), zero.clone()], [zero, one]],
        Some(z) => [[one, z.clone()], [zero, two.clone()]],
    };
    let d = BigInt::from(2);
    Witness {
        matrix,
        chi: Quadratic::rational(two, &d),
        chi_f64: 2.0,
        rational: true,
    }
}

/// Smallest integer `t` with `t² > d`.
fn first_admissible_t(d: &BigInt) -> BigInt {
    d.sqrt() + 1
}

pub fn classify_correlator(z: &PointDescriptor) -> Result<CorrelatorClass> {
    let (group, witness) = match z {
        PointDescriptor::Infinity => (CorrelatorGroup::FullRationalGroup, Some(rational_witness(None))),
        PointDescriptor::Rational(r) => (CorrelatorGroup::FullRationalGroup, Some(rational_witness(Some(r)))),
        PointDescriptor::QuadraticSurd { a, b, c, plus } => {
            let v = PointDescriptor::surd(a.clone(), b.clone(), c.clone(), *plus)?;
            let d = v.discriminant().expect("surd has a discriminant");
            let t = rat(&first_admissible_t(&d));
            let e = surd_element_for(&v, &t, &BigRational::one())?;
            let w = Witness {
                matrix: e.matrix,
                chi_f64: e.value_f64,
                rational: e.is_rational,
                chi: e.value,
            };
            (CorrelatorGroup::TrivialGroup, Some(w))
        }
        PointDescriptor::NonQuadraticIrrational(_) => (CorrelatorGroup::TrivialGroup, None),
    };
    Ok(CorrelatorClass {
        descriptor: z.clone(),
        group,
        witness,
    })
}

/// Whether the element built from `(t, u)` at `z` is rational, decided exactly.
pub fn is_rational_element(z: &PointDescriptor, t: &BigRational, u: &BigRational) -> Result<bool> {
    Ok(surd_element_for(z, t, u)?.is_rational)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn parse(s: &str) -> PointDescriptor {
        PointDescriptor::parse(s).unwrap()
    }

    #[test]
    fn descriptor_table() {
        use CorrelatorGroup::*;
        let cases = [
            ("inf", FullRationalGroup),
            ("3/4", FullRationalGroup),
            ("surd:1,0,-2", TrivialGroup),
            ("surd:1,-1,-1", TrivialGroup),
            ("e", TrivialGroup),
            ("golden", TrivialGroup),
            ("pi", TrivialGroup),
        ];
        for (s, want) in cases {
            let c = classify_correlator(&parse(s)).unwrap();
            assert_eq!(c.group, want, "{s}");
            if let Some(w) = &c.witness {
                assert_eq!(w.rational, want == FullRationalGroup, "{s}");
            }
        }
    }

    #[test]
    fn rational_witness_fixes_the_point() {
        let z = BigRational::new(3.into(), 4.into());
        let w = rational_witness(Some(&z));
        let m = &w.matrix;
        let image = (&m[0][0] * &z + &m[0][1]) / (&m[1][0] * &z + &m[1][1]);
        assert_eq!(image, z);
    }

    #[test]
    fn square_discriminant_is_invalid() {
        let bad = PointDescriptor::QuadraticSurd {
            a: 1.into(),
            b: 0.into(),
            c: (-4).into(),
            plus: true,
        };
        assert!(matches!(classify_correlator(&bad), Err(Error::InvalidDescriptor(_))));
    }

    #[test]
    fn golden_ratio_element() {
        // z² - z - 1, d = 5, t = 3, u = 1
        let e = surd_group_element(&1.into(), &(-1).into(), &(-1).into(), &q(3), &q(1)).unwrap();
        assert_eq!(e.value.to_string(), "7/2+3/2*sqrt(5)");
        assert!((e.value_f64 - 6.854101966249685).abs() < 1e-12);
        assert!(e.stabilizes && !e.is_rational);
        let id = surd_group_element(&1.into(), &(-1).into(), &(-1).into(), &q(1), &q(0)).unwrap();
        assert_eq!(id.value, Quadratic::int(1, &5.into()));
        assert!(id.is_rational);
        assert!(surd_group_element(&1.into(), &0.into(), &(-2).into(), &q(1), &q(1)).is_err());
    }

    #[test]
    fn minus_root_inverts_the_value() {
        let plus = parse("surd:1,0,-2");
        let PointDescriptor::QuadraticSurd { a, b, c, .. } = &plus else { unreachable!() };
        let minus = PointDescriptor::surd(a.clone(), b.clone(), c.clone(), false).unwrap();
        let e1 = surd_element_for(&plus, &q(3), &q(1)).unwrap();
        let e2 = surd_element_for(&minus, &q(3), &q(1)).unwrap();
        assert_eq!(e1.value.mul(&e2.value), Quadratic::int(1, &8.into()));
        assert!(e2.stabilizes);
    }

    proptest! {
        #[test]
        fn rational_only_without_u(
            a in 1i64..6, b in -6i64..6, c in -6i64..6,
            tn in -40i64..40, un in -5i64..5, den in 1i64..5,
        ) {
            let z = match PointDescriptor::surd(a.into(), b.into(), c.into(), true) {
                Ok(z) => z,
                Err(_) => return Ok(()),
            };
            let d = z.discriminant().unwrap();
            let t = BigRational::new(tn.into(), den.into());
            let u = BigRational::new(un.into(), den.into());
            if !(&t * &t - rat(&d) * &u * &u).is_positive() {
                return Ok(());
            }
            let e = surd_element_for(&z, &t, &u).unwrap();
            prop_assert!(e.stabilizes);
            prop_assert_eq!(e.is_rational, u.is_zero());
            prop_assert_eq!(e.value.norm(), BigRational::one());
        }
    }
}
