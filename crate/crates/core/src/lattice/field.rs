use num_complex::Complex64;

use super::grid::GridSpec;
use crate::error::LatticeError;
use crate::opcalc::{GaussianAnsatz, GaussianVector};

/// Complex multi-component function sampled on a grid, stored component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: GridSpec,
    components: usize,
    values: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: GridSpec, components: usize, values: Vec<Complex64>) -> Result<Self, LatticeError> {
        let expected = components * grid.nodes();
        if components == 0 || values.len() != expected {
            return Err(LatticeError::DimensionMismatch { expected, got: values.len() });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(LatticeError::NonFinite);
        }
        Ok(Self { grid, components, values })
    }

    pub fn zeros(grid: GridSpec, components: usize) -> Self {
        Self { grid, components, values: vec![Complex64::new(0.0, 0.0); components * grid.nodes()] }
    }

    /// Pointwise evaluation: `f(component, z)`.
    pub fn from_fn(grid: GridSpec, components: usize, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let values = (0..components)
            .flat_map(|c| grid.coords().map(move |z| (c, z)).collect::<Vec<_>>())
            .map(|(c, z)| f(c, z))
            .collect();
        Self { grid, components, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let n2 = self.grid.nodes();
        &self.values[c * n2..(c + 1) * n2]
    }

    /// `Σ_c |v_c(z_k)|²` at node `k`.
    pub fn node_density(&self, k: usize) -> f64 {
        let n2 = self.grid.nodes();
        (0..self.components).map(|c| self.values[c * n2 + k].norm_sqr()).sum()
    }

    /// `h² Σ |v|²`.
    pub fn norm_sqr(&self) -> f64 {
        let h = self.grid.spacing();
        h * h * self.values.iter().map(Complex64::norm_sqr).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `h² Σ conj(self) · other`.
    pub fn inner(&self, other: &Field) -> Result<Complex64, LatticeError> {
        if self.values.len() != other.values.len() {
            return Err(LatticeError::DimensionMismatch { expected: self.values.len(), got: other.values.len() });
        }
        let h = self.grid.spacing();
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * h * h)
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { grid: self.grid, components: self.components, values: self.values.iter().map(|v| v * s).collect() }
    }

    /// Share of the L² mass inside the open disk `|z| < radius`.
    pub fn localization_fraction(&self, radius: f64) -> Result<f64, LatticeError> {
        localization_fraction(self, radius)
    }
}

/// Samples one ansatz as a single-component field.
pub fn sample(grid: &GridSpec, f: &GaussianAnsatz) -> Field {
    Field::from_fn(*grid, 1, |_, z| f.evaluate(z))
}

/// Samples a column of ansatz functions, one component each.
pub fn sample_vector(grid: &GridSpec, f: &GaussianVector) -> Field {
    Field::from_fn(*grid, f.len(), |c, z| f.components()[c].evaluate(z))
}

pub fn localization_fraction(field: &Field, radius: f64) -> Result<f64, LatticeError> {
    let half_width = field.grid.half_width();
    if !(radius > 0.0 && radius <= half_width) {
        return Err(LatticeError::BadRadius { radius, half_width });
    }
    let total: f64 = (0..field.grid.nodes()).map(|k| field.node_density(k)).sum();
    if total == 0.0 {
        return Err(LatticeError::ZeroNorm);
    }
    let inside: f64 = field
        .grid
        .coords()
        .enumerate()
        .filter(|(_, z)| z.norm() < radius)
        .map(|(k, _)| field.node_density(k))
        .sum();
    Ok(inside / total)
}
