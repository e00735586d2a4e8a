//! Lowest eigenpairs of sparse Hermitian matrices.
//!
//! Small problems go through a dense Hermitian eigendecomposition. Larger ones
//! use a block Krylov space of `(A − σI)⁻¹`, with `σ` certified below the
//! spectrum by a successful Cholesky factorization, and Rayleigh–Ritz
//! projection of `A` itself onto that space.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::SpectralError;
use crate::lattice::{Field, GridSpec, SparseMatrix};

type C = Complex64;

pub const DENSE_LIMIT: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    pub k: usize,
    /// Bound on `‖Av − λv‖` for unit `v`.
    pub tol: f64,
    pub seed: u64,
    pub dense_limit: usize,
    /// Upper bound on the Krylov basis before a thick restart.
    pub max_basis: usize,
    pub max_iterations: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { k: 6, tol: 1e-8, seed: 0, dense_limit: DENSE_LIMIT, max_basis: 160, max_iterations: 400 }
    }
}

impl EigenOptions {
    pub fn with_k(k: usize) -> Self {
        Self { k, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    Dense,
    ShiftInvertKrylov,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenReport {
    pub matrix_id: String,
    pub eigenvalues: Vec<f64>,
    /// Unit-norm (Euclidean) eigenvectors, in eigenvalue order.
    #[serde(skip)]
    pub vectors: Vec<Vec<C>>,
    pub residuals: Vec<f64>,
    /// `max|A − A†|` before symmetrization.
    pub hermitian_defect: f64,
    pub method: SolverMethod,
    pub iterations: usize,
}

impl EigenReport {
    pub fn empty(matrix_id: impl Into<String>) -> Self {
        Self {
            matrix_id: matrix_id.into(),
            eigenvalues: Vec::new(),
            vectors: Vec::new(),
            residuals: Vec::new(),
            hermitian_defect: 0.0,
            method: SolverMethod::Dense,
            iterations: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvector `i` as a field on `grid`, components inferred from length.
    pub fn mode_field(&self, i: usize, grid: &GridSpec) -> Result<Field, SpectralError> {
        let v = &self.vectors[i];
        let nodes = grid.nodes();
        if v.len() % nodes != 0 {
            return Err(SpectralError::InvalidParameter(format!(
                "eigenvector of length {} does not fit a grid of {nodes} nodes",
                v.len()
            )));
        }
        Ok(Field::new(*grid, v.len() / nodes, v.clone())?)
    }
}

/// The `k` smallest eigenpairs of the Hermitian part of `a`.
pub fn low_spectrum(a: &SparseMatrix, matrix_id: &str, opts: &EigenOptions) -> Result<EigenReport, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !(opts.tol > 0.0) {
        return Err(SpectralError::InvalidParameter(format!("tol must be positive, got {}", opts.tol)));
    }
    let (herm, defect) = a.hermitian_part();
    let dim = herm.rows();
    let k = opts.k.min(dim);
    let mut report = if k == 0 {
        EigenReport::empty(matrix_id)
    } else if dim <= opts.dense_limit {
        dense(&herm, k)?
    } else {
        krylov(&herm, k, opts)?
    };
    report.matrix_id = matrix_id.to_string();
    report.hermitian_defect = defect;
    if let Some(worst) = report.residuals.iter().copied().reduce(f64::max) {
        if worst > opts.tol {
            return Err(SpectralError::NoConvergence { iterations: report.iterations, basis: k, worst_residual: worst, tol: opts.tol });
        }
    }
    Ok(report)
}

fn residual(a: &SparseMatrix, lambda: f64, v: &[C]) -> f64 {
    let av = a.matvec(v);
    let r: f64 = av.iter().zip(v).map(|(x, y)| (x - y * lambda).norm_sqr()).sum();
    (r / norm_sqr(v)).sqrt()
}

fn norm_sqr(v: &[C]) -> f64 {
    v.iter().map(C::norm_sqr).sum()
}

fn dense(a: &SparseMatrix, k: usize) -> Result<EigenReport, SpectralError> {
    let n = a.rows();
    let mut m = Mat::<C>::zeros(n, n);
    for (r, c, v) in a.triplets() {
        m[(r, c)] = v;
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| SpectralError::Factorization(format!("dense eigendecomposition: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut eigenvalues = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for j in 0..k {
        let lambda = s[j].re;
        let v: Vec<C> = (0..n).map(|i| u[(i, j)]).collect();
        residuals.push(residual(a, lambda, &v));
        eigenvalues.push(lambda);
        vectors.push(v);
    }
    Ok(EigenReport {
        matrix_id: String::new(),
        eigenvalues,
        vectors,
        residuals,
        hermitian_defect: 0.0,
        method: SolverMethod::Dense,
        iterations: 1,
    })
}

/// Lower bound on the spectrum of a Hermitian matrix.
pub fn gershgorin_lower_bound(a: &SparseMatrix) -> f64 {
    (0..a.rows())
        .map(|r| {
            let (diag, off) = a.row(r).fold((0.0, 0.0), |(d, o), (c, v)| if c == r { (d + v.re, o) } else { (d, o + v.norm()) });
            diag - off
        })
        .fold(f64::INFINITY, f64::min)
}

enum Factor {
    Cholesky(faer::sparse::linalg::solvers::Llt<usize, C>),
    Lu(faer::sparse::linalg::solvers::Lu<usize, C>),
}

impl Factor {
    fn shifted(a: &SparseMatrix, shift: f64) -> Result<SparseColMat<usize, C>, SpectralError> {
        let n = a.rows();
        let shifted = a
            .sub(&SparseMatrix::identity(n).scale(C::new(shift, 0.0)))
            .map_err(|e| SpectralError::Factorization(e.to_string()))?;
        let triplets: Vec<Triplet<usize, usize, C>> = shifted.triplets().map(|(row, col, val)| Triplet { row, col, val }).collect();
        SparseColMat::<usize, C>::try_new_from_triplets(n, n, &triplets).map_err(|e| SpectralError::Factorization(format!("{e:?}")))
    }

    /// Cholesky of `A − σI`; `None` when it is not positive definite.
    fn cholesky(a: &SparseMatrix, shift: f64) -> Result<Option<Self>, SpectralError> {
        Ok(Self::shifted(a, shift)?.sp_cholesky(Side::Lower).ok().map(Factor::Cholesky))
    }

    fn lu(a: &SparseMatrix, shift: f64) -> Result<Self, SpectralError> {
        Self::shifted(a, shift)?.sp_lu().map(Factor::Lu).map_err(|e| SpectralError::Factorization(format!("{e:?}")))
    }

    fn solve(&self, block: &[Vec<C>]) -> Vec<Vec<C>> {
        let n = block[0].len();
        let mut rhs = Mat::<C>::from_fn(n, block.len(), |i, j| block[j][i]);
        match self {
            Factor::Cholesky(f) => f.solve_in_place(rhs.as_mut()),
            Factor::Lu(f) => f.solve_in_place(rhs.as_mut()),
        }
        (0..block.len()).map(|j| (0..n).map(|i| rhs[(i, j)]).collect()).collect()
    }
}

/// Picks the shift closest to zero among a few candidates for which
/// `A − σI` admits a Cholesky factor, which certifies `σ` below the whole
/// spectrum. The Gershgorin bound is the last resort.
fn shift_and_factor(a: &SparseMatrix) -> Result<(f64, Factor), SpectralError> {
    let floor = gershgorin_lower_bound(a).min(0.0) - 1.0;
    for shift in [-0.1, -1.0, -10.0, -100.0] {
        if shift > floor {
            if let Some(f) = Factor::cholesky(a, shift)? {
                return Ok((shift, f));
            }
        }
    }
    match Factor::cholesky(a, floor)? {
        Some(f) => Ok((floor, f)),
        // rounding at the bound; LU still gives a valid inverse
        None => Ok((floor, Factor::lu(a, floor)?)),
    }
}

fn dot(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Orthogonalizes `v` against `basis` twice; `None` when nothing is left.
fn orthogonalize(v: &mut [C], basis: &[Vec<C>]) -> Option<()> {
    let start = norm_sqr(v).sqrt();
    if start == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let p = dot(b, v);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
    }
    let norm = norm_sqr(v).sqrt();
    if norm <= 1e-10 * start {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(())
}

/// Orthonormal basis, its images under `A` and the projection `VᴴAV`, grown
/// one column at a time.
struct Space {
    basis: Vec<Vec<C>>,
    images: Vec<Vec<C>>,
    proj: Vec<Vec<C>>,
}

impl Space {
    fn new() -> Self {
        Self { basis: Vec::new(), images: Vec::new(), proj: Vec::new() }
    }

    fn len(&self) -> usize {
        self.basis.len()
    }

    fn push(&mut self, v: Vec<C>, av: Vec<C>) {
        let col: Vec<C> = self.basis.iter().map(|b| dot(b, &av)).collect();
        for (row, c) in self.proj.iter_mut().zip(&col) {
            row.push(*c);
        }
        let mut last: Vec<C> = col.iter().map(|c| c.conj()).collect();
        last.push(C::new(dot(&v, &av).re, 0.0));
        self.proj.push(last);
        self.basis.push(v);
        self.images.push(av);
    }

    /// Replaces the space by Ritz pairs, whose projection is diagonal.
    fn restart(&mut self, ritz: Ritz) {
        let m = ritz.values.len();
        self.proj = (0..m)
            .map(|i| (0..m).map(|j| if i == j { C::new(ritz.values[i], 0.0) } else { C::new(0.0, 0.0) }).collect())
            .collect();
        self.basis = ritz.vectors;
        self.images = ritz.images;
    }
}

struct Ritz {
    values: Vec<f64>,
    vectors: Vec<Vec<C>>,
    images: Vec<Vec<C>>,
    residuals: Vec<f64>,
}

/// Rayleigh–Ritz on the space for the `count` smallest Ritz pairs.
fn rayleigh_ritz(space: &Space, count: usize) -> Result<Ritz, SpectralError> {
    let m = space.len();
    let t = Mat::<C>::from_fn(m, m, |i, j| (space.proj[i][j] + space.proj[j][i].conj()) * 0.5);
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| SpectralError::Factorization(format!("projected eigendecomposition: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let n = space.basis[0].len();
    let count = count.min(m);
    let pairs: Vec<(f64, Vec<C>, Vec<C>, f64)> = (0..count)
        .into_par_iter()
        .map(|j| {
            let theta = s[j].re;
            let mut y = vec![C::new(0.0, 0.0); n];
            let mut ay = vec![C::new(0.0, 0.0); n];
            for i in 0..m {
                let c = u[(i, j)];
                y.iter_mut().zip(&space.basis[i]).for_each(|(a, b)| *a += c * b);
                ay.iter_mut().zip(&space.images[i]).for_each(|(a, b)| *a += c * b);
            }
            let r: f64 = ay.iter().zip(&y).map(|(a, b)| (a - b * theta).norm_sqr()).sum();
            let res = (r / norm_sqr(&y)).sqrt();
            (theta, y, ay, res)
        })
        .collect();
    let mut out = Ritz { values: Vec::new(), vectors: Vec::new(), images: Vec::new(), residuals: Vec::new() };
    for (theta, y, ay, r) in pairs {
        out.values.push(theta);
        out.vectors.push(y);
        out.images.push(ay);
        out.residuals.push(r);
    }
    Ok(out)
}

fn random_block(rng: &mut ChaCha8Rng, n: usize, width: usize) -> Vec<Vec<C>> {
    (0..width)
        .map(|_| (0..n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect()
}

fn krylov(a: &SparseMatrix, k: usize, opts: &EigenOptions) -> Result<EigenReport, SpectralError> {
    let n = a.rows();
    let width = (k + 2).max(4).min(n);
    let max_basis = opts.max_basis.max(3 * width).min(n);
    let (_, factor) = shift_and_factor(a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut space = Space::new();
    let mut block = random_block(&mut rng, n, width);
    let mut last = Ritz { values: Vec::new(), vectors: Vec::new(), images: Vec::new(), residuals: vec![f64::INFINITY] };

    for iteration in 1..=opts.max_iterations {
        let mut added = Vec::new();
        for mut v in block.drain(..) {
            if orthogonalize(&mut v, &space.basis).is_some() {
                let av = a.matvec(&v);
                space.push(v, av);
                added.push(space.len() - 1);
            }
        }
        if space.len() >= k {
            last = rayleigh_ritz(&space, k)?;
            if last.residuals.iter().all(|&r| r <= opts.tol) {
                return Ok(EigenReport {
                    matrix_id: String::new(),
                    eigenvalues: last.values,
                    vectors: last.vectors.into_iter().map(normalized).collect(),
                    residuals: last.residuals,
                    hermitian_defect: 0.0,
                    method: SolverMethod::ShiftInvertKrylov,
                    iterations: iteration,
                });
            }
        }
        if added.is_empty() {
            // invariant subspace without convergence: inject fresh directions
            block = random_block(&mut rng, n, width);
            continue;
        }
        if space.len() + width > max_basis {
            space.restart(rayleigh_ritz(&space, (k + width).min(space.len()))?);
            let seeds: Vec<Vec<C>> = space.basis.iter().take(width).cloned().collect();
            block = factor.solve(&seeds);
            continue;
        }
        let seeds: Vec<Vec<C>> = added.iter().map(|&i| space.basis[i].clone()).collect();
        block = factor.solve(&seeds);
    }
    let worst = last.residuals.iter().copied().fold(0.0, f64::max);
    Err(SpectralError::NoConvergence { iterations: opts.max_iterations, basis: space.len(), worst_residual: worst, tol: opts.tol })
}

fn normalized(mut v: Vec<C>) -> Vec<C> {
    let norm = norm_sqr(&v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SparseMatrix {
        let t = (0..n).flat_map(|i| {
            let mut v = vec![(i, i, C::new(2.0, 0.0))];
            if i > 0 {
                v.push((i, i - 1, C::new(-1.0, 0.0)));
            }
            if i + 1 < n {
                v.push((i, i + 1, C::new(-1.0, 0.0)));
            }
            v
        });
        SparseMatrix::from_triplets(n, n, t)
    }

    fn exact_laplacian_eigs(n: usize, k: usize) -> Vec<f64> {
        (1..=k)
            .map(|j| 2.0 - 2.0 * (j as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect()
    }

    #[test]
    fn identity_spectrum() {
        let r = low_spectrum(&SparseMatrix::identity(10), "I", &EigenOptions::with_k(3)).unwrap();
        assert_eq!(r.eigenvalues.len(), 3);
        for (l, res) in r.eigenvalues.iter().zip(&r.residuals) {
            assert!((l - 1.0).abs() < 1e-14);
            assert!(*res < 1e-14);
        }
    }

    #[test]
    fn dense_and_krylov_agree_with_closed_form() {
        let n = 300;
        let a = laplacian_1d(n);
        let want = exact_laplacian_eigs(n, 4);
        let dense = low_spectrum(&a, "lap", &EigenOptions::with_k(4)).unwrap();
        let opts = EigenOptions { dense_limit: 10, ..EigenOptions::with_k(4) };
        let kry = low_spectrum(&a, "lap", &opts).unwrap();
        assert_eq!(dense.method, SolverMethod::Dense);
        assert_eq!(kry.method, SolverMethod::ShiftInvertKrylov);
        for i in 0..4 {
            assert!((dense.eigenvalues[i] - want[i]).abs() < 1e-10);
            assert!((kry.eigenvalues[i] - want[i]).abs() < 1e-10, "{:?} vs {want:?}", kry.eigenvalues);
        }
    }

    #[test]
    fn krylov_resolves_degenerate_pairs() {
        // two identical decoupled copies: every eigenvalue doubles
        let a = laplacian_1d(200);
        let z = SparseMatrix::zeros(200, 200);
        let b = SparseMatrix::from_blocks(2, 2, &[a.clone(), z.clone(), z, a]).unwrap();
        let opts = EigenOptions { dense_limit: 10, ..EigenOptions::with_k(4) };
        let r = low_spectrum(&b, "pair", &opts).unwrap();
        let want = exact_laplacian_eigs(200, 2);
        assert!((r.eigenvalues[0] - want[0]).abs() < 1e-10);
        assert!((r.eigenvalues[1] - want[0]).abs() < 1e-10);
        assert!((r.eigenvalues[2] - want[1]).abs() < 1e-10);
        assert!((r.eigenvalues[3] - want[1]).abs() < 1e-10);
    }

    #[test]
    fn shift_is_certified_below_an_indefinite_spectrum() {
        let n = 150;
        let a = laplacian_1d(n).sub(&SparseMatrix::identity(n).scale(C::new(5.0, 0.0))).unwrap();
        let (shift, _) = shift_and_factor(&a).unwrap();
        assert!(shift < -5.0);
        let opts = EigenOptions { dense_limit: 10, ..EigenOptions::with_k(3) };
        let r = low_spectrum(&a, "a", &opts).unwrap();
        for (got, want) in r.eigenvalues.iter().zip(exact_laplacian_eigs(n, 3)) {
            assert!((got - (want - 5.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn krylov_is_deterministic() {
        let a = laplacian_1d(120);
        let opts = EigenOptions { dense_limit: 10, seed: 7, ..EigenOptions::with_k(3) };
        let r1 = low_spectrum(&a, "a", &opts).unwrap();
        let r2 = low_spectrum(&a, "a", &opts).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn non_hermitian_input_is_symmetrized() {
        let a = SparseMatrix::from_dense(2, 2, &[C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)]);
        let r = low_spectrum(&a, "a", &EigenOptions::with_k(2)).unwrap();
        assert_eq!(r.hermitian_defect, 1.0);
        assert!((r.eigenvalues[0] - 0.5).abs() < 1e-14);
        assert!((r.eigenvalues[1] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn iteration_budget_exhaustion_is_reported() {
        let a = laplacian_1d(400);
        let opts = EigenOptions { dense_limit: 10, max_iterations: 1, tol: 1e-14, ..EigenOptions::with_k(3) };
        assert!(matches!(low_spectrum(&a, "a", &opts), Err(SpectralError::NoConvergence { .. })));
    }

    #[test]
    fn rectangular_input_is_rejected() {
        let a = SparseMatrix::zeros(2, 3);
        assert!(matches!(low_spectrum(&a, "a", &EigenOptions::default()), Err(SpectralError::NotSquare { .. })));
    }
}
