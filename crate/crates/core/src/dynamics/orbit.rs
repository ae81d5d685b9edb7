use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::point::ModularPoint;
use super::reduce::{IntMatrix, Lattice};
use crate::error::{Error, Result};
use crate::scalar::{big_ratio_f64, big_to_scaled_f64};

/// Largest orbit index evaluated in plain double precision.
pub const DOUBLE_LIMIT: u64 = 10_000;
/// Fixed-point guard bits beyond the `2 log₂ n` lost in reduction.
pub const DEFAULT_GUARD_BITS: u32 = 64;
/// Smallest accepted guard when bits are given explicitly.
pub const MIN_GUARD_BITS: u32 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "bits")]
pub enum Precision {
    /// `2 ⌈log₂ max(n, 2)⌉ + 64` bits for the largest index.
    Auto,
    Bits(u32),
    /// `f64`, allowed only up to [`DOUBLE_LIMIT`].
    Double,
}

fn log2_ceil(n: u64) -> u32 {
    64 - (n.max(2) - 1).leading_zeros()
}

impl Precision {
    /// Fixed-point bits for indices up to `n_max`, or `None` for double precision.
    pub fn resolve(self, n_max: u64) -> Result<Option<u32>> {
        let lost = 2 * log2_ceil(n_max);
        match self {
            Precision::Auto => Ok(Some(lost + DEFAULT_GUARD_BITS)),
            Precision::Bits(b) => {
                if b < lost + MIN_GUARD_BITS {
                    Err(Error::Precision(format!(
                        "{b} bits cannot resolve orbit indices up to {n_max}; need at least {}",
                        lost + MIN_GUARD_BITS
                    )))
                } else {
                    Ok(Some(b))
                }
            }
            Precision::Double => {
                if n_max > DOUBLE_LIMIT {
                    Err(Error::Precision(format!(
                        "double precision is limited to n <= {DOUBLE_LIMIT}, requested {n_max}"
                    )))
                } else {
                    Ok(None)
                }
            }
        }
    }
}

/// Coordinates of `Γ ξ u^n`: the reduced point `x + iy` and frame angle `θ ∈ [0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalDomainCoords {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub gamma: IntMatrix,
}

fn angle(c: f64, d: f64) -> f64 {
    // bottom row of k(θ) is (-sin θ, cos θ); -I ∈ Γ identifies θ with θ + π
    let t = (-c).atan2(d).rem_euclid(PI);
    if t >= PI {
        0.0
    } else {
        t
    }
}

#[derive(Debug, Clone)]
enum Mode {
    Double,
    Fixed { bits: u32, rows: [BigInt; 4] },
}

/// Evaluates `Γ ξ u^n` in closed form for `0 <= n <= n_max`.
#[derive(Debug, Clone)]
pub struct Orbit {
    point: ModularPoint,
    n_max: u64,
    approx: [f64; 4],
    mode: Mode,
}

impl Orbit {
    pub fn new(point: &ModularPoint, n_max: u64, precision: Precision) -> Result<Self> {
        let approx = point.entries().clone().map(|e| e.to_f64());
        let mode = match precision.resolve(n_max)? {
            None => Mode::Double,
            Some(bits) => Mode::Fixed {
                bits,
                rows: point.entries().clone().map(|e| e.to_fixed(bits)),
            },
        };
        Ok(Orbit {
            point: point.clone(),
            n_max,
            approx,
            mode,
        })
    }

    pub fn point(&self) -> &ModularPoint {
        &self.point
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Fixed-point bits in use, `None` in double precision.
    pub fn bits(&self) -> Option<u32> {
        match &self.mode {
            Mode::Double => None,
            Mode::Fixed { bits, .. } => Some(*bits),
        }
    }

    fn double_lattice(&self, n: u64) -> Result<Lattice<f64>> {
        let [a, b, c, d] = self.approx;
        let nf = n as f64;
        let mut l = Lattice::new([a, a * nf + b], [c, c * nf + d]);
        l.reduce()?;
        Ok(l)
    }

    /// Coordinates of `Γ ξ u^n`.
    pub fn at(&self, n: u64) -> Result<FundamentalDomainCoords> {
        if n > self.n_max {
            return Err(Error::Domain(format!(
                "orbit index {n} beyond the prepared range {}",
                self.n_max
            )));
        }
        match &self.mode {
            Mode::Double => {
                let l = self.double_lattice(n)?;
                let (ip, nb) = l.gram();
                let det = self.point.det();
                Ok(FundamentalDomainCoords {
                    x: ip / nb,
                    y: det / nb,
                    theta: angle(l.bottom[0], l.bottom[1]),
                    gamma: l.gamma,
                })
            }
            Mode::Fixed { bits, rows } => {
                // a double-precision pass proposes γ; the exact pass finishes from γ g
                let pilot = self.double_lattice(n).map(|l| l.gamma).unwrap_or(super::reduce::IDENTITY);
                let [a, b, c, d] = rows;
                let nn = BigInt::from(n);
                let mut l = Lattice::new([a.clone(), a * &nn + b], [c.clone(), c * &nn + d]);
                l.apply(&pilot)?;
                l.reduce()?;
                let (ip, nb) = l.gram();
                let scale: BigInt = BigInt::one() << (2 * *bits as usize);
                let x = big_ratio_f64(&ip, &nb);
                let y = big_ratio_f64(&scale, &nb) * self.point.det();
                Ok(FundamentalDomainCoords {
                    x,
                    y,
                    theta: fixed_angle(&l.bottom[0], &l.bottom[1]),
                    gamma: l.gamma,
                })
            }
        }
    }

    /// `g(coords(n))` for `n` in `lo..=hi`, evaluated in parallel.
    pub fn map<R: Send>(
        &self,
        lo: u64,
        hi: u64,
        g: impl Fn(&FundamentalDomainCoords) -> R + Sync,
    ) -> Result<Vec<R>> {
        (lo..=hi).into_par_iter().map(|n| self.at(n).map(|c| g(&c))).collect()
    }
}

fn fixed_angle(c: &BigInt, d: &BigInt) -> f64 {
    let big = if c.abs() > d.abs() { c } else { d };
    if big.is_zero() {
        return 0.0;
    }
    let (_, e) = big_to_scaled_f64(big);
    let scale = |v: &BigInt| {
        let (m, ev) = big_to_scaled_f64(v);
        m * 2f64.powi((ev - e).clamp(-1100, 0) as i32)
    };
    angle(scale(c), scale(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::reduce::{det, reduce};
    use crate::symbolic::SymReal;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn xi(s: &str) -> ModularPoint {
        s.parse().unwrap()
    }

    #[test]
    fn precision_rules() {
        assert_eq!(Precision::Auto.resolve(1_000_000).unwrap(), Some(40 + 64));
        assert!(Precision::Bits(60).resolve(1_000_000).is_err());
        assert!(Precision::Bits(66).resolve(1_000_000).is_ok());
        assert!(Precision::Double.resolve(10_000).is_ok());
        assert!(matches!(Precision::Double.resolve(10_001), Err(Error::Precision(_))));
    }

    #[test]
    fn identity_orbit_is_fixed() {
        let o = Orbit::new(&ModularPoint::identity(), 1000, Precision::Auto).unwrap();
        for n in [0, 1, 7, 1000] {
            let c = o.at(n).unwrap();
            assert_eq!((c.x, c.y, c.theta), (0.0, 1.0, 0.0));
        }
    }

    #[test]
    fn fixed_and_double_paths_agree() {
        let p = xi("point:cusp:x=e");
        let fixed = Orbit::new(&p, 10_000, Precision::Auto).unwrap();
        let double = Orbit::new(&p, 10_000, Precision::Double).unwrap();
        for n in [0, 1, 2, 3, 10, 99, 1234, 9999] {
            let a = fixed.at(n).unwrap();
            let b = double.at(n).unwrap();
            // doubles lose absolute accuracy in x high in the cusp; compare hyperbolically
            assert!((a.x - b.x).abs() < 1e-7 * a.y.max(1.0), "n = {n}: {a:?} {b:?}");
            assert!((a.y - b.y).abs() < 1e-7 * a.y);
            let dt = (a.theta - b.theta).abs();
            assert!(dt.min(PI - dt) < 1e-7);
            assert_eq!(det(&a.gamma), 1);
        }
    }

    #[test]
    fn lower_point_matches_exact_reduction_of_its_image() {
        // ξ = (1, 0; t, 1), t = 1/2 + 1/3 √2; base point ξ(1 + i) via exact rationals at 256 bits
        let t = SymReal::parse("1/2+1/3*sqrt2").unwrap();
        let p = ModularPoint::lower(t.clone()).unwrap();
        let o = Orbit::new(&p, 1, Precision::Auto).unwrap();
        let c = o.at(1).unwrap();
        let tq = BigRational::new(t.to_fixed(256), BigInt::one() << 256usize);
        // ξ(z) = z / (t z + 1) with z = 1 + i
        let one = BigRational::one();
        let (re, im) = (tq.clone() + &one, tq.clone());
        let den = re.clone() * &re + im.clone() * &im;
        let x = (re.clone() * &one + im.clone() * &one) / &den;
        let y = (re * &one - im * &one) / &den;
        let r = reduce(x, y).unwrap();
        assert!((c.x - crate::scalar::Scalar::as_f64(&r.x)).abs() < 1e-12);
        assert!((c.y - crate::scalar::Scalar::as_f64(&r.y)).abs() < 1e-12);
    }

    #[test]
    fn orbit_index_shift() {
        let p = xi("point:cusp:x=sqrt3");
        let o = Orbit::new(&p, 2000, Precision::Auto).unwrap();
        for (m, n) in [(0, 5), (17, 400), (999, 1001)] {
            let shifted = Orbit::new(&p.advanced(m as i64).unwrap(), n, Precision::Auto).unwrap();
            let a = o.at(m + n).unwrap();
            let b = shifted.at(n).unwrap();
            assert!((a.x - b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12 * a.y);
        }
    }

    #[test]
    fn large_indices_reduce() {
        let p = xi("point:cusp:x=e");
        let o = Orbit::new(&p, 3_000_000, Precision::Auto).unwrap();
        for n in [1_000_000u64, 2_999_999, 3_000_000] {
            let c = o.at(n).unwrap();
            assert!(c.x >= -0.5 && c.x < 0.5);
            assert!(c.x * c.x + c.y * c.y >= 1.0 - 1e-12);
            assert_eq!(det(&c.gamma), 1);
        }
        assert!(o.at(3_000_001).is_err());
    }
}
