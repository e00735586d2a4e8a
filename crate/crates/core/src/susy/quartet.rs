//! The `N = 2` supersymmetric quartet on the doubled space `H⁺ ⊕ H⁻`.

use num_complex::Complex64;

use crate::error::SusyError;
use crate::lattice::SparseMatrix;

#[derive(Debug, Clone)]
pub struct SusyQuartet {
    /// `[[0, D], [0, 0]]`
    pub q: SparseMatrix,
    /// `[[0, 0], [D†, 0]]`
    pub q_dag: SparseMatrix,
    /// `[[D D†, 0], [0, D† D]]`
    pub ham: SparseMatrix,
    /// `[[I, 0], [0, −I]]`
    pub w: SparseMatrix,
}

impl SusyQuartet {
    pub fn build(d: &SparseMatrix) -> Result<Self, SusyError> {
        if !d.is_square() {
            return Err(SusyError::NotSquare { rows: d.rows(), cols: d.cols() });
        }
        let n = d.rows();
        let zero = SparseMatrix::zeros(n, n);
        let d_adj = d.adjoint();
        let q = SparseMatrix::from_blocks(2, 2, &[zero.clone(), d.clone(), zero.clone(), zero.clone()])?;
        let q_dag = SparseMatrix::from_blocks(2, 2, &[zero.clone(), zero.clone(), d_adj.clone(), zero.clone()])?;
        let h_plus = d.matmul(&d_adj)?;
        let h_minus = d_adj.matmul(d)?;
        let ham = SparseMatrix::from_blocks(2, 2, &[h_plus, zero.clone(), zero.clone(), h_minus])?;
        Ok(Self { q, q_dag, ham, w: witten_parity(n) })
    }

    /// Dimension of one sector.
    pub fn sector_dim(&self) -> usize {
        self.w.rows() / 2
    }
}

/// `W = diag(I_n, −I_n)`.
pub fn witten_parity(sector_dim: usize) -> SparseMatrix {
    SparseMatrix::diagonal(
        (0..2 * sector_dim)
            .map(|i| Complex64::new(if i < sector_dim { 1.0 } else { -1.0 }, 0.0))
            .collect(),
    )
}

/// `[[0, A], [0, 0]]`, the odd embedding of a sector operator.
pub fn odd_embedding(a: &SparseMatrix) -> Result<SparseMatrix, SusyError> {
    if !a.is_square() {
        return Err(SusyError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let z = SparseMatrix::zeros(a.rows(), a.cols());
    Ok(SparseMatrix::from_blocks(2, 2, &[z.clone(), a.clone(), z.clone(), z])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{discretize, GridSpec};
    use crate::opcalc::defect_dirac;

    #[test]
    fn block_structure() {
        let g = GridSpec::new(3.0, 8).unwrap();
        let d = discretize(&defect_dirac(), &g);
        let q = SusyQuartet::build(&d).unwrap();
        let n = d.rows();
        assert_eq!(q.sector_dim(), n);
        assert_eq!(q.q.rows(), 2 * n);
        assert_eq!(q.w.matmul(&q.w).unwrap(), SparseMatrix::identity(2 * n));
        assert!(q.q.matmul(&q.q).unwrap().nnz() == 0);
        let anti = q.q.matmul(&q.q_dag).unwrap().add(&q.q_dag.matmul(&q.q).unwrap()).unwrap();
        assert_eq!(anti.max_abs_diff(&q.ham).unwrap(), 0.0);
    }

    #[test]
    fn rejects_rectangular_operator() {
        let d = SparseMatrix::zeros(2, 3);
        assert!(matches!(SusyQuartet::build(&d), Err(SusyError::NotSquare { .. })));
    }
}
