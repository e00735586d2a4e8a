use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// Square lattice on `[−L, L]²` with `n` nodes per axis, row-major node order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    half_width: f64,
    n: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, n: usize) -> Result<Self, LatticeError> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(LatticeError::BadHalfWidth(half_width));
        }
        if n < 8 {
            return Err(LatticeError::TooFewPoints(n));
        }
        Ok(Self { half_width, n })
    }

    /// Desk-scale default: `L = 5`, `n = 96`.
    pub fn desk() -> Self {
        Self { half_width: 5.0, n: 96 }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn nodes(&self) -> usize {
        self.n * self.n
    }

    pub fn coord(&self, k: usize) -> Complex64 {
        let h = self.spacing();
        let x = -self.half_width + (k % self.n) as f64 * h;
        let y = -self.half_width + (k / self.n) as f64 * h;
        Complex64::new(x, y)
    }

    pub fn coords(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.nodes()).map(|k| self.coord(k))
    }

    /// Node index after a quarter turn `(x, y) → (−y, x)` of node `k`.
    pub fn rotate_quarter(&self, k: usize) -> usize {
        let (i, j) = (k % self.n, k / self.n);
        let (ri, rj) = (self.n - 1 - j, i);
        rj * self.n + ri
    }
}
