//! Finite-difference realization of normal-ordered block operators.
//!
//! A term `c · z^a z̄^b ∂^p ∂̄^q` becomes `diag(c z^a z̄^b) · Lq^m · Dz^(p−m) · Dz̄^(q−m)`
//! with `m = min(p, q)`. `Dz = ½(Dx − iDy)` and `Dz̄ = ½(Dx + iDy)` use central
//! differences; each matched `∂∂̄` pair uses the compact five-point operator
//! `Lq = ¼Δ₅` instead of `Dz·Dz̄`, whose wide stencil splits the lattice into
//! four decoupled sublattices and copies every low mode four times. Values
//! outside the box are zero.

use std::collections::HashMap;

use num_complex::Complex64;

use super::grid::GridSpec;
use super::sparse::SparseMatrix;
use crate::opcalc::{coeff, BlockOperator, OperatorExpression, Powers};

/// First- and second-order difference matrices on one scalar component.
#[derive(Debug, Clone)]
pub struct DifferenceOperators {
    grid: GridSpec,
    pub dx: SparseMatrix,
    pub dy: SparseMatrix,
    pub dz: SparseMatrix,
    pub dzbar: SparseMatrix,
    /// `¼Δ₅`, the compact realization of `∂∂̄`.
    pub quarter_laplacian: SparseMatrix,
}

impl DifferenceOperators {
    pub fn new(grid: &GridSpec) -> Self {
        let n = grid.n();
        let h = grid.spacing();
        let nodes = grid.nodes();
        let half = Complex64::new(0.5 / h, 0.0);
        let mut dx = Vec::with_capacity(2 * nodes);
        let mut dy = Vec::with_capacity(2 * nodes);
        let mut lap = Vec::with_capacity(5 * nodes);
        let w = Complex64::new(0.25 / (h * h), 0.0);
        for k in 0..nodes {
            let (i, j) = (k % n, k / n);
            lap.push((k, k, w * -4.0));
            if i + 1 < n {
                dx.push((k, k + 1, half));
                lap.push((k, k + 1, w));
            }
            if i > 0 {
                dx.push((k, k - 1, -half));
                lap.push((k, k - 1, w));
            }
            if j + 1 < n {
                dy.push((k, k + n, half));
                lap.push((k, k + n, w));
            }
            if j > 0 {
                dy.push((k, k - n, -half));
                lap.push((k, k - n, w));
            }
        }
        let dx = SparseMatrix::from_triplets(nodes, nodes, dx);
        let dy = SparseMatrix::from_triplets(nodes, nodes, dy);
        let i_dy = dy.scale(Complex64::new(0.0, 1.0));
        let dz = dx.sub(&i_dy).expect("same shape").scale(Complex64::new(0.5, 0.0));
        let dzbar = dx.add(&i_dy).expect("same shape").scale(Complex64::new(0.5, 0.0));
        let quarter_laplacian = SparseMatrix::from_triplets(nodes, nodes, lap);
        Self { grid: *grid, dx, dy, dz, dzbar, quarter_laplacian }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
}

/// Discretizes block operators on one grid, caching derivative products.
pub struct Discretizer {
    ops: DifferenceOperators,
    cache: HashMap<(u32, u32, u32), SparseMatrix>,
}

impl Discretizer {
    pub fn new(grid: &GridSpec) -> Self {
        Self { ops: DifferenceOperators::new(grid), cache: HashMap::new() }
    }

    pub fn grid(&self) -> &GridSpec {
        self.ops.grid()
    }

    pub fn difference_operators(&self) -> &DifferenceOperators {
        &self.ops
    }

    fn derivative_part(&mut self, powers: Powers) -> Option<&SparseMatrix> {
        let m = powers.d.min(powers.dbar);
        let key = (m, powers.d - m, powers.dbar - m);
        if key == (0, 0, 0) {
            return None;
        }
        if !self.cache.contains_key(&key) {
            let factors = std::iter::repeat(&self.ops.quarter_laplacian)
                .take(key.0 as usize)
                .chain(std::iter::repeat(&self.ops.dz).take(key.1 as usize))
                .chain(std::iter::repeat(&self.ops.dzbar).take(key.2 as usize));
            let mut prod: Option<SparseMatrix> = None;
            for f in factors {
                prod = Some(match prod {
                    None => f.clone(),
                    Some(p) => p.matmul(f).expect("square factors"),
                });
            }
            self.cache.insert(key, prod.expect("at least one factor"));
        }
        self.cache.get(&key)
    }

    /// Scalar expression as an `n² × n²` matrix.
    pub fn expression(&mut self, expr: &OperatorExpression) -> SparseMatrix {
        let grid = *self.grid();
        let nodes = grid.nodes();
        let mut triplets = Vec::new();
        for term in expr.terms() {
            let c = coeff::to_complex64(&term.coeff);
            let p = term.powers;
            let mult: Vec<Complex64> = grid
                .coords()
                .map(|z| c * z.powu(p.z) * z.conj().powu(p.zbar))
                .collect();
            match self.derivative_part(p) {
                None => triplets.extend(mult.into_iter().enumerate().map(|(k, v)| (k, k, v))),
                Some(d) => triplets.extend(d.triplets().map(|(r, col, v)| (r, col, mult[r] * v))),
            }
        }
        SparseMatrix::from_triplets(nodes, nodes, triplets)
    }

    /// Block operator as a `(rows·n²) × (cols·n²)` matrix, blocks row-major.
    pub fn block(&mut self, op: &BlockOperator) -> SparseMatrix {
        let blocks: Vec<SparseMatrix> = op.entries().iter().map(|e| self.expression(e)).collect();
        SparseMatrix::from_blocks(op.rows(), op.cols(), &blocks).expect("uniform block shapes")
    }
}

/// One-shot discretization of a block operator.
pub fn discretize(op: &BlockOperator, grid: &GridSpec) -> SparseMatrix {
    Discretizer::new(grid).block(op)
}
