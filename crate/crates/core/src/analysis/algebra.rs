//! Residuals of the supersymmetry algebra on a discretized quartet.

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;
use crate::lattice::SparseMatrix;
use crate::susy::SusyQuartet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub q_squared: f64,
    pub q_dag_squared: f64,
    /// `{Q, Q†} − H`.
    pub anticommutator: f64,
    /// `[W, H]`.
    pub w_ham_commutator: f64,
    /// `{W, Q}`.
    pub w_q_anticommutator: f64,
    /// `{W, Q†}`.
    pub w_q_dag_anticommutator: f64,
    /// `W² − I`.
    pub w_squared: f64,
    pub dimension: usize,
}

impl AlgebraReport {
    pub fn residuals(&self) -> [(&'static str, f64); 7] {
        [
            ("Q^2", self.q_squared),
            ("(Q^dag)^2", self.q_dag_squared),
            ("{Q,Q^dag}-H", self.anticommutator),
            ("[W,H]", self.w_ham_commutator),
            ("{W,Q}", self.w_q_anticommutator),
            ("{W,Q^dag}", self.w_q_dag_anticommutator),
            ("W^2-I", self.w_squared),
        ]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals().iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

fn relative(residual: &SparseMatrix, scale: f64) -> f64 {
    let r = residual.max_abs();
    if scale > 0.0 {
        r / scale
    } else {
        r
    }
}

/// Max-norm residual of every identity, relative to the max-norm of the
/// operators involved.
pub fn algebra_check(q: &SusyQuartet) -> Result<AlgebraReport, LatticeError> {
    let (qm, qd, h, w) = (&q.q, &q.q_dag, &q.ham, &q.w);
    let sq = qm.max_abs();
    let sd = qd.max_abs();
    let sh = h.max_abs();
    let n = w.rows();
    let anti = |a: &SparseMatrix, b: &SparseMatrix| -> Result<SparseMatrix, LatticeError> { a.matmul(b)?.add(&b.matmul(a)?) };
    Ok(AlgebraReport {
        q_squared: relative(&qm.matmul(qm)?, sq * sq),
        q_dag_squared: relative(&qd.matmul(qd)?, sd * sd),
        anticommutator: relative(&anti(qm, qd)?.sub(h)?, sh.max(sq * sd)),
        w_ham_commutator: relative(&w.matmul(h)?.sub(&h.matmul(w)?)?, sh),
        w_q_anticommutator: relative(&anti(w, qm)?, sq),
        w_q_dag_anticommutator: relative(&anti(w, qd)?, sd),
        w_squared: relative(&w.matmul(w)?.sub(&SparseMatrix::identity(n))?, 1.0),
        dimension: n,
    })
}
