use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on `αδ = 1` and on the entries of the conjugation identity.
pub const PARABOLIC_TOLERANCE: f64 = 1e-12;

/// Upper-triangular `(α, β; 0, δ)` with `αδ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParabolicElement {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConjugationCheck {
    pub chi: f64,
    /// `β u β⁻¹`.
    pub product: [[f64; 2]; 2],
    /// Largest entrywise deviation from `(1, χ; 0, 1)`.
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ParabolicElement {
    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && delta.is_finite()) {
            return Err(Error::Shape("parabolic entries must be finite".into()));
        }
        if !((alpha * delta - 1.0).abs() <= PARABOLIC_TOLERANCE) {
            return Err(Error::Shape(format!("alpha * delta = {} is not 1", alpha * delta)));
        }
        Ok(ParabolicElement { alpha, beta, delta })
    }

    /// `(α, β; 0, 1/α)`.
    pub fn with_alpha(alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 0.0 {
            return Err(Error::Shape("alpha must be nonzero".into()));
        }
        Self::new(alpha, beta, 1.0 / alpha)
    }

    pub fn from_matrix(m: [[f64; 2]; 2]) -> Result<Self> {
        if m[1][0] != 0.0 {
            return Err(Error::Shape(format!("lower-left entry {} is not 0", m[1][0])));
        }
        Self::new(m[0][0], m[0][1], m[1][1])
    }

    pub fn identity() -> Self {
        ParabolicElement {
            alpha: 1.0,
            beta: 0.0,
            delta: 1.0,
        }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.alpha, self.beta], [0.0, self.delta]]
    }

    /// `α δ⁻¹ = α²`.
    pub fn chi(&self) -> f64 {
        self.alpha * self.alpha
    }

    pub fn compose(&self, other: &Self) -> Self {
        ParabolicElement {
            alpha: self.alpha * other.alpha,
            beta: self.alpha * other.beta + self.beta * other.delta,
            delta: self.delta * other.delta,
        }
    }

    pub fn inverse(&self) -> Self {
        ParabolicElement {
            alpha: self.delta,
            beta: -self.beta,
            delta: self.alpha,
        }
    }

    /// Checks `β u β⁻¹ = u^{χ(β)}` entrywise.
    pub fn conjugation_check(&self) -> ConjugationCheck {
        let (a, b, d) = (self.alpha, self.beta, self.delta);
        // β u = (a, a + b; 0, d), then times β⁻¹ = (d, -b; 0, a)
        let product = [[a * d, -a * b + (a + b) * a], [0.0, d * a]];
        let chi = self.chi();
        let target = [[1.0, chi], [0.0, 1.0]];
        let mut max_error: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                max_error = max_error.max((product[i][j] - target[i][j]).abs());
            }
        }
        let tolerance = PARABOLIC_TOLERANCE * 1f64.max(a * a).max((a * b).abs());
        ConjugationCheck {
            chi,
            product,
            max_error,
            tolerance,
            pass: max_error <= tolerance,
        }
    }
}

pub fn chi(beta: &ParabolicElement) -> f64 {
    beta.chi()
}

pub fn conjugation_exponent_check(beta: &ParabolicElement) -> bool {
    beta.conjugation_check().pass
}
