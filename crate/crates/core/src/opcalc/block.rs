//! Matrices of scalar operator expressions.

use std::fmt;

use super::coeff::Coeff;
use super::expr::OperatorExpression;
use super::gaussian::{GaussianAnsatz, GaussianVector};
use crate::error::OpcalcError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOperator {
    rows: usize,
    cols: usize,
    entries: Vec<OperatorExpression>,
}

impl BlockOperator {
    /// Row-major construction; `entries.len()` must equal `rows * cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<OperatorExpression>) -> Result<Self, OpcalcError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(OpcalcError::Shape { rows, cols, entries: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows<const R: usize, const C: usize>(rows: [[OperatorExpression; C]; R]) -> Self {
        let entries = rows.into_iter().flatten().collect();
        Self { rows: R, cols: C, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![OperatorExpression::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.entries[i * n + i] = OperatorExpression::one();
        }
        out
    }

    /// `expr · I_n`.
    pub fn scalar(n: usize, expr: &OperatorExpression) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.entries[i * n + i] = expr.clone();
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &OperatorExpression {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[OperatorExpression] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&OperatorExpression) -> OperatorExpression) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self, OpcalcError> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OpcalcError> {
        self.same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    fn same_shape(&self, other: &Self) -> Result<(), OpcalcError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(OpcalcError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Matrix product `self ∘ right` with every scalar product normal-ordered.
    pub fn compose(&self, right: &Self) -> Result<Self, OpcalcError> {
        if self.cols != right.rows {
            return Err(OpcalcError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (right.rows, right.cols),
            });
        }
        let mut entries = Vec::with_capacity(self.rows * right.cols);
        for i in 0..self.rows {
            for j in 0..right.cols {
                let terms = (0..self.cols)
                    .flat_map(|k| self.entry(i, k).compose(right.entry(k, j)).terms().to_vec());
                entries.push(OperatorExpression::from_terms(terms));
            }
        }
        Ok(Self { rows: self.rows, cols: right.cols, entries })
    }

    /// Formal L² adjoint: transpose, then adjoint of each entry.
    pub fn adjoint(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entry(i, j).adjoint());
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }

    /// Entries strictly on or below the diagonal are all zero.
    pub fn is_strictly_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i + 1)).all(|j| self.entry(i, j).is_zero()))
    }

    pub fn max_derivative_order(&self) -> u32 {
        self.entries.iter().map(OperatorExpression::max_derivative_order).max().unwrap_or(0)
    }

    /// Applies the block operator to a column of Gaussian ansatz functions
    /// sharing one decay rate.
    pub fn apply_gaussian(&self, input: &GaussianVector) -> Result<GaussianVector, OpcalcError> {
        if input.len() != self.cols {
            return Err(OpcalcError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (input.len(), 1),
            });
        }
        let alpha = input.alpha().clone();
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = GaussianAnsatz::zero(alpha.clone())?;
            for (k, f) in input.components().iter().enumerate() {
                acc = acc.add(&self.entry(i, k).apply_gaussian(f))?;
            }
            out.push(acc);
        }
        GaussianVector::new(out)
    }
}

impl fmt::Display for BlockOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                writeln!(f, "[{i},{j}] {}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}
