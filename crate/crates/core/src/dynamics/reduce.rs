use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Integer matrix `(a, b; c, d)` stored row-major.
pub type IntMatrix = [[i64; 2]; 2];

pub const IDENTITY: IntMatrix = [[1, 0], [0, 1]];

/// Cap on translate-and-invert or lattice steps.
pub const MAX_STEPS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedPoint<T> {
    pub x: T,
    pub y: T,
    /// `γ ∈ SL₂(ℤ)` with `γ z` equal to `(x, y)`.
    pub gamma: IntMatrix,
}

fn checked_row_update(g: &mut IntMatrix, k: i64) -> Result<()> {
    // γ ← (1, -k; 0, 1) γ
    for col in 0..2 {
        let v = g[1][col]
            .checked_mul(k)
            .and_then(|v| g[0][col].checked_sub(v))
            .ok_or(Error::Overflow("reducing word"))?;
        g[0][col] = v;
    }
    Ok(())
}

fn apply_s(g: &mut IntMatrix) {
    // γ ← (0, -1; 1, 0) γ
    let top = g[0];
    g[0] = [-g[1][0], -g[1][1]];
    g[1] = top;
}

pub fn det(g: &IntMatrix) -> i128 {
    g[0][0] as i128 * g[1][1] as i128 - g[0][1] as i128 * g[1][0] as i128
}

/// Reduces `z = x + iy`, `y > 0`, to the modular fundamental domain by
/// translations and inversions.
///
/// The representative satisfies `-1/2 <= x < 1/2`, `|z| >= 1`, and `x <= 0`
/// when `|z| = 1`.
pub fn reduce<T: Scalar>(x: T, y: T) -> Result<ReducedPoint<T>> {
    if !(y > T::zero()) {
        return Err(Error::Domain("reduction needs Im z > 0".into()));
    }
    if let Some(floor) = T::precision_floor() {
        if y < floor {
            return Err(Error::Precision(format!(
                "Im z = {} is below the working-precision floor {}",
                y.as_f64(),
                floor.as_f64()
            )));
        }
    }
    let one = T::one();
    let mut x = x;
    let mut y = y;
    let mut gamma = IDENTITY;
    for _ in 0..MAX_STEPS {
        let k = T::nearest_quotient(&x, &one).ok_or(Error::Overflow("translation"))?;
        if k != 0 {
            x = x - T::of_i64(k);
            checked_row_update(&mut gamma, k)?;
        }
        let r2 = x.clone() * x.clone() + y.clone() * y.clone();
        if r2 < one {
            x = -x / r2.clone();
            y = y / r2;
            apply_s(&mut gamma);
            continue;
        }
        if r2 == one && x > T::zero() {
            x = -x;
            apply_s(&mut gamma);
        }
        return Ok(ReducedPoint { x, y, gamma });
    }
    Err(Error::Precision("reduction did not terminate; precision exhausted".into()))
}

/// Row basis `(top; bottom)` of `h = γ g`, reduced by left multiplication.
#[derive(Debug, Clone)]
pub(crate) struct Lattice<T> {
    pub top: [T; 2],
    pub bottom: [T; 2],
    pub gamma: IntMatrix,
}

fn dot<T: Scalar>(a: &[T; 2], b: &[T; 2]) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone()
}

impl<T: Scalar> Lattice<T> {
    pub fn new(top: [T; 2], bottom: [T; 2]) -> Self {
        Lattice {
            top,
            bottom,
            gamma: IDENTITY,
        }
    }

    /// Applies an integer matrix on the left.
    pub fn apply(&mut self, g: &IntMatrix) -> Result<()> {
        let comb = |a: i64, b: i64, u: &[T; 2], v: &[T; 2]| -> [T; 2] {
            [
                u[0].mul_i64(a) + v[0].mul_i64(b),
                u[1].mul_i64(a) + v[1].mul_i64(b),
            ]
        };
        let top = comb(g[0][0], g[0][1], &self.top, &self.bottom);
        let bottom = comb(g[1][0], g[1][1], &self.top, &self.bottom);
        self.top = top;
        self.bottom = bottom;
        let mut out = [[0i64; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                let v = (g[r][0] as i128) * (self.gamma[0][c] as i128) + (g[r][1] as i128) * (self.gamma[1][c] as i128);
                *cell = i64::try_from(v).map_err(|_| Error::Overflow("reducing word"))?;
            }
        }
        self.gamma = out;
        Ok(())
    }

    /// Gauss reduction with the boundary conventions of [`reduce`].
    pub fn reduce(&mut self) -> Result<()> {
        for _ in 0..MAX_STEPS {
            let nb = dot(&self.bottom, &self.bottom);
            if !(nb > T::zero()) {
                return Err(Error::Precision("degenerate lattice row".into()));
            }
            let mu = T::nearest_quotient(&dot(&self.top, &self.bottom), &nb).ok_or(Error::Overflow("translation"))?;
            if mu != 0 {
                self.top = [
                    self.top[0].clone() - self.bottom[0].mul_i64(mu),
                    self.top[1].clone() - self.bottom[1].mul_i64(mu),
                ];
                checked_row_update(&mut self.gamma, mu)?;
            }
            let nt = dot(&self.top, &self.top);
            let swap = nt < nb || (nt == nb && dot(&self.top, &self.bottom) > T::zero());
            if swap {
                let top = std::mem::replace(&mut self.top, [T::zero(), T::zero()]);
                self.top = [-self.bottom[0].clone(), -self.bottom[1].clone()];
                self.bottom = top;
                apply_s(&mut self.gamma);
                if nt == nb {
                    return Ok(());
                }
                continue;
            }
            return Ok(());
        }
        Err(Error::Precision("lattice reduction did not terminate".into()))
    }

    /// `⟨top, bottom⟩` and `|bottom|²`.
    pub fn gram(&self) -> (T, T) {
        (dot(&self.top, &self.bottom), dot(&self.bottom, &self.bottom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn mobius(g: &IntMatrix, x: f64, y: f64) -> (f64, f64) {
        let (a, b, c, d) = (g[0][0] as f64, g[0][1] as f64, g[1][0] as f64, g[1][1] as f64);
        let den = (c * x + d).powi(2) + (c * y).powi(2);
        (((a * x + b) * (c * x + d) + a * c * y * y) / den, y / den)
    }

    #[test]
    fn simple_points() {
        let r = reduce(1.0f64, 1.0).unwrap();
        assert_eq!((r.x, r.y), (0.0, 1.0));
        assert_eq!(r.gamma, [[1, -1], [0, 1]]);
        let r = reduce(0.0f64, 1.0).unwrap();
        assert_eq!((r.x, r.y, r.gamma), (0.0, 1.0, IDENTITY));
        // boundary arc takes the left representative
        let r = reduce(BigRational::new(5.into(), 13.into()), BigRational::new(12.into(), 13.into())).unwrap();
        assert_eq!(r.x, BigRational::new((-5).into(), 13.into()));
        assert_eq!(r.gamma, [[0, -1], [1, 0]]);
        assert!(reduce(0.0f64, 0.0).is_err());
        assert!(matches!(reduce(0.1f64, 1e-12), Err(Error::Precision(_))));
    }

    #[test]
    fn exact_scalars_agree_with_floats() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let exact = reduce(q(31, 100), q(1, 10)).unwrap();
        let float = reduce(0.31f64, 0.1).unwrap();
        assert_eq!(exact.gamma, float.gamma);
        assert!((exact.x.as_f64() - float.x).abs() < 1e-12);
        assert!((exact.y.as_f64() - float.y).abs() < 1e-12);
    }

    #[test]
    fn lattice_reduction_of_a_unipotent_orbit() {
        // rows of u^n = (1, n; 0, 1) reduce to the identity lattice
        let mut l = Lattice::new([1.0f64, 7.0], [0.0, 1.0]);
        l.reduce().unwrap();
        assert_eq!(l.top, [1.0, 0.0]);
        assert_eq!(l.bottom, [0.0, 1.0]);
        assert_eq!(l.gamma, [[1, -7], [0, 1]]);
    }

    proptest! {
        #[test]
        fn reduced_points_lie_in_the_domain(x in -50.0f64..50.0, ly in -6.0f64..2.0) {
            let y = 10f64.powf(ly);
            let r = reduce(x, y).unwrap();
            prop_assert_eq!(det(&r.gamma), 1);
            prop_assert!(r.x >= -0.5 && r.x < 0.5);
            prop_assert!(r.x * r.x + r.y * r.y >= 1.0 - 1e-12);
            let (gx, gy) = mobius(&r.gamma, x, y);
            prop_assert!((gx - r.x).abs() < 1e-6 && (gy - r.y).abs() < 1e-6 * r.y.max(1.0));
            let again = reduce(r.x, r.y).unwrap();
            prop_assert_eq!(again.gamma, IDENTITY);
        }

        #[test]
        fn lattice_and_point_reduction_agree(x in -5.0f64..5.0, ly in -3.0f64..1.0) {
            // g = n(x) a(y): rows (√y, x/√y), (0, 1/√y)
            let y = 10f64.powf(ly);
            let s = y.sqrt();
            let mut l = Lattice::new([s, x / s], [0.0, 1.0 / s]);
            l.reduce().unwrap();
            let (ip, nb) = l.gram();
            let p = reduce(x, y).unwrap();
            prop_assert!((ip / nb - p.x).abs() < 1e-9);
            prop_assert!((1.0 / nb - p.y).abs() < 1e-9 * p.y);
        }
    }
}
