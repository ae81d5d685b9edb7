use serde::Serialize;

use crate::arith::block_bound;
use crate::error::{Error, Result};

/// Geometric schedule of the decomposition.
///
/// Blocks are indexed by `j0 <= j < j1` and tile `[D0, D1)`. The degenerate
/// override `j0 == j1` keeps the single block `j0`, in which case the upper
/// edge becomes `(1+α)^{j0+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionParams {
    pub n: u64,
    pub alpha: f64,
    pub j0: u32,
    pub j1: u32,
}

impl DecompositionParams {
    pub fn new(n: u64, alpha: f64, j0: u32, j1: u32) -> Result<Self> {
        let p = DecompositionParams { n, alpha, j0, j1 };
        p.validate()?;
        Ok(p)
    }

    /// Parameters with `(j0, j1)` taken from [`default_schedule`].
    pub fn with_default_schedule(n: u64, alpha: f64) -> Result<Self> {
        let (j0, j1) = default_schedule(alpha)?;
        let j0 = u32::try_from(j0).map_err(|_| infeasible(n, alpha, j0, j1))?;
        let j1 = u32::try_from(j1).map_err(|_| infeasible(n, alpha, j0 as u64, j1))?;
        Self::new(n, alpha, j0, j1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain(format!("N must be at least 2, got {}", self.n)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        if self.j0 == 0 {
            return Err(Error::Domain("j0 must be positive".into()));
        }
        if self.j0 > self.j1 {
            return Err(Error::Domain(format!("j0 = {} exceeds j1 = {}", self.j0, self.j1)));
        }
        if self.j1 > i32::MAX as u32 - 1 || !(self.d1() < self.n as f64) {
            return Err(infeasible(self.n, self.alpha, self.j0 as u64, self.j1 as u64));
        }
        Ok(())
    }

    /// Last block index.
    pub fn last_block(&self) -> i32 {
        if self.j1 > self.j0 {
            self.j1 as i32 - 1
        } else {
            self.j0 as i32
        }
    }

    pub fn block_indices(&self) -> std::ops::RangeInclusive<i32> {
        self.j0 as i32..=self.last_block()
    }

    pub fn block_count(&self) -> usize {
        (self.last_block() - self.j0 as i32 + 1) as usize
    }

    pub fn bound(&self, j: i32) -> f64 {
        block_bound(self.alpha, j)
    }

    pub fn d0(&self) -> f64 {
        self.bound(self.j0 as i32)
    }

    /// Upper edge of the tiled prime range.
    pub fn d1(&self) -> f64 {
        self.bound(self.last_block() + 1)
    }

    /// `N / (1+α)^{j+1}`, the strict upper bound of the cofactor set `Q_j`.
    pub fn q_bound(&self, j: i32) -> f64 {
        self.n as f64 / self.bound(j + 1)
    }
}

fn infeasible(n: u64, alpha: f64, j0: u64, j1: u64) -> Error {
    Error::Domain(format!(
        "schedule j0 = {j0}, j1 = {j1} at alpha = {alpha} puts D1 beyond N = {n}; \
         pass smaller j0/j1 overrides"
    ))
}

/// `j0 = ceil((1/α)(ln 1/α)^3)` and `j1 = j0^2`, defined for `0 < α < 1/e`.
pub fn default_schedule(alpha: f64) -> Result<(u64, u64)> {
    let inv_e = (-1.0f64).exp();
    if !(alpha > 0.0 && alpha < inv_e) {
        return Err(Error::Domain(format!(
            "default schedule needs 0 < alpha < 1/e, got {alpha}"
        )));
    }
    let l = (1.0 / alpha).ln();
    let raw = (l * l * l / alpha).ceil();
    if !(raw < 4.0e9) {
        return Err(Error::Overflow("default schedule"));
    }
    let j0 = raw as u64;
    let j1 = j0.checked_mul(j0).ok_or(Error::Overflow("default schedule"))?;
    Ok((j0, j1))
}
