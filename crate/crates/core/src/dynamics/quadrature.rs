use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::observable::Observable;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::summation::pairwise_sum_by;

/// Hyperbolic area of the modular fundamental domain.
pub const DOMAIN_AREA: f64 = PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Truncation height `Y`; the region `y > Y` is replaced by the cusp limit.
    pub y_max: f64,
    pub nx: usize,
    /// Nodes in `s = 1/y` per `x` node.
    pub ns: usize,
    /// Equispaced angles in `[0, π)` for frame-dependent observables.
    pub n_theta: usize,
    /// Gauss–Legendre order per panel.
    pub order: usize,
    /// Largest accepted `|f - cusp limit|` at the truncation height.
    pub tail_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            y_max: 1e3,
            nx: 2000,
            ns: 2000,
            n_theta: 64,
            order: 8,
            tail_tolerance: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.y_max > 1.0 && self.y_max.is_finite()) {
            return Err(Error::Domain(format!("quadrature height must exceed 1, got {}", self.y_max)));
        }
        if self.order == 0 || self.nx < self.order || self.ns < self.order || self.n_theta == 0 {
            return Err(Error::Domain("quadrature grid sizes must be at least the panel order".into()));
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(k: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); k];
    let mut weights = vec![T::zero(); k];
    let one = T::one();
    let two = T::lit(2.0);
    let kt = T::of_i64(k as i64);
    for i in 0..(k + 1) / 2 {
        let mut x = T::lit((PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos());
        let mut dp = one;
        for _ in 0..100 {
            let (mut p0, mut p1) = (one, x);
            for n in 2..=k {
                let nt = T::of_i64(n as i64);
                let p2 = ((two * nt - one) * x * p1 - (nt - one) * p0) / nt;
                p0 = p1;
                p1 = p2;
            }
            let pk = if k == 0 { one } else if k == 1 { x } else { p1 };
            let pkm1 = if k == 1 { one } else { p0 };
            dp = kt * (x * pk - pkm1) / (x * x - one);
            let dx = pk / dp;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let w = two / ((one - x * x) * dp * dp);
        nodes[i] = x;
        nodes[k - 1 - i] = -x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite rule with `panels` equal panels on `[a, b]`.
fn composite(a: f64, b: f64, panels: usize, gl: &(Vec<f64>, Vec<f64>)) -> impl Iterator<Item = (f64, f64)> + '_ {
    let h = (b - a) / panels as f64;
    (0..panels).flat_map(move |p| {
        let mid = a + (p as f64 + 0.5) * h;
        gl.0.iter().zip(&gl.1).map(move |(&t, &w)| (mid + 0.5 * h * t, 0.5 * h * w))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    /// `∫ f dx dy / y²` over the truncated domain plus the cusp tail.
    pub integral: f64,
    pub tail: f64,
    /// `integral / (π/3)`.
    pub mean: f64,
}

/// Integrates `f` against `dx dy / y²` over the fundamental domain, in
/// coordinates `(x, s = 1/y)` where the measure is `dx ds`.
pub fn haar_integral(f: &Observable, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    spec.validate()?;
    let limit = f.cusp_limit();
    let thetas: Vec<f64> = if f.is_frame_dependent() {
        (0..spec.n_theta).map(|k| PI * k as f64 / spec.n_theta as f64).collect()
    } else {
        vec![0.0]
    };
    for x in [-0.5, 0.0, 0.5] {
        for &t in &thetas {
            let gap = (f.eval(x, spec.y_max, t) - limit).abs();
            if !(gap <= spec.tail_tolerance) {
                return Err(Error::Convergence(format!(
                    "`{}` differs from its cusp limit by {gap} at y = {}",
                    f.label(),
                    spec.y_max
                )));
            }
        }
    }
    let gl = gauss_legendre::<f64>(spec.order);
    let xs: Vec<(f64, f64)> = composite(-0.5, 0.5, spec.nx / spec.order, &gl).collect();
    let s_lo = 1.0 / spec.y_max;
    let s_panels = spec.ns / spec.order;
    let columns: Vec<f64> = xs
        .par_iter()
        .map(|&(x, wx)| {
            let s_hi = 1.0 / (1.0 - x * x).sqrt();
            let nodes: Vec<(f64, f64)> = composite(s_lo, s_hi, s_panels, &gl).collect();
            let col = pairwise_sum_by(nodes.len(), &|i| {
                let (s, ws) = nodes[i];
                let y = 1.0 / s;
                let v = pairwise_sum_by(thetas.len(), &|k| f.eval(x, y, thetas[k])) / thetas.len() as f64;
                ws * v
            });
            wx * col
        })
        .collect();
    let body = pairwise_sum_by(columns.len(), &|i| columns[i]);
    // the strip y > Y spans the full width 1 and has measure 1/Y
    let tail = limit * s_lo;
    let integral = body + tail;
    Ok(QuadratureResult {
        integral,
        tail,
        mean: integral / DOMAIN_AREA,
    })
}

/// Haar mean of `f` with respect to the probability measure.
pub fn haar_mean(f: &Observable, spec: &QuadratureSpec) -> Result<f64> {
    Ok(haar_integral(f, spec)?.mean)
}

/// Unnormalised hyperbolic area of the domain as seen by the grid; `π/3` ideally.
pub fn domain_mass(spec: &QuadratureSpec) -> Result<f64> {
    Ok(haar_integral(&Observable::constant(1.0), spec)?.integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> QuadratureSpec {
        QuadratureSpec {
            nx: 400,
            ns: 400,
            n_theta: 16,
            ..Default::default()
        }
    }

    #[test]
    fn legendre_rules_integrate_polynomials() {
        let (x, w) = gauss_legendre::<f64>(8);
        for deg in 0..16 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {deg}");
        }
        let (x, w) = gauss_legendre::<f32>(5);
        let s: f32 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((s - 2.0 / 3.0).abs() < 1e-6);
        let (x1, w1) = gauss_legendre::<f64>(1);
        assert_eq!((x1[0], w1[0]), (0.0, 2.0));
    }

    #[test]
    fn mass_and_constant_mean() {
        let m = domain_mass(&small()).unwrap();
        assert!((m / DOMAIN_AREA - 1.0).abs() < 1e-10);
        assert!((haar_mean(&Observable::constant(1.0), &small()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn framed_bump_averages_out() {
        let f = Observable::framed_bump(1.5, 0.4).unwrap();
        assert!(haar_mean(&f, &small()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn slow_tails_are_rejected() {
        let f = Observable::custom("slow", 0.0, 1.0, false, |_, y, _| 1.0 / y.ln());
        assert!(matches!(haar_mean(&f, &small()), Err(Error::Convergence(_))));
    }

    /// `(3/π) ∫ w(y) g(y) dy / y²` with `w` the width of the domain at height `y`,
    /// by composite Simpson on `[√3/2, y_top]` plus `g(∞) / y_top`.
    fn height_oracle(g: impl Fn(f64) -> f64, limit: f64, y_top: f64) -> f64 {
        let w = |y: f64| if y >= 1.0 { 1.0 } else { 1.0 - 2.0 * (1.0 - y * y).max(0.0).sqrt() };
        let h = |y: f64| w(y) * g(y) / (y * y);
        let simpson = |a: f64, b: f64, m: usize| {
            let step = (b - a) / m as f64;
            let mut acc = h(a) + h(b);
            for k in 1..m {
                acc += h(a + k as f64 * step) * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc * step / 3.0
        };
        let a = 3f64.sqrt() / 2.0;
        (simpson(a, 1.0, 400_000) + simpson(1.0, y_top, 2_000_000) + limit / y_top) / DOMAIN_AREA
    }

    #[test]
    fn height_only_means_match_the_reduced_integral() {
        let spec = QuadratureSpec::default();
        let b = Observable::bump(1.0, 0.3).unwrap();
        let want = height_oracle(|y| b.eval(0.0, y, 0.0), 0.0, 2.0);
        assert!((haar_mean(&b, &spec).unwrap() - want).abs() < 1e-6);
        let s = Observable::cusp_step(1.8, 2.2).unwrap();
        let want = height_oracle(|y| s.eval(0.0, y, 0.0), 1.0, 3.0);
        assert!((haar_mean(&s, &spec).unwrap() - want).abs() < 1e-6);
    }

    #[test]
    fn default_grid_mass() {
        let m = domain_mass(&QuadratureSpec::default()).unwrap();
        assert!((m / DOMAIN_AREA - 1.0).abs() < 1e-5);
    }
}
