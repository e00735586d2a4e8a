//! Complex sparse matrices assembled from coordinate triplets and stored
//! row-compressed.

use num_complex::Complex64;

use crate::error::LatticeError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseMatrix {
    /// Duplicate `(row, col)` pairs are summed in input order; exact zeros
    /// are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut t: Vec<_> = triplets.into_iter().collect();
        // stable sort keeps input order among duplicates
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(t.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(t.len());
        let mut i = 0;
        while i < t.len() {
            let (r, c, mut v) = t[i];
            assert!(r < rows && c < cols, "triplet ({r}, {c}) outside {rows}x{cols}");
            let mut j = i + 1;
            while j < t.len() && t[j].0 == r && t[j].1 == c {
                v += t[j].2;
                j += 1;
            }
            if v != ZERO {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
            }
            i = j;
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { rows, cols, row_ptr, col_idx, values }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, row_ptr: vec![0; rows + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| Complex64::new(1.0, 0.0)).collect())
    }

    pub fn diagonal(diag: Vec<Complex64>) -> Self {
        let n = diag.len();
        Self::from_triplets(n, n, diag.into_iter().enumerate().map(|(i, v)| (i, i, v)))
    }

    /// Dense row-major input, mostly for small test matrices.
    pub fn from_dense(rows: usize, cols: usize, data: &[Complex64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self::from_triplets(rows, cols, (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).map(|(r, c)| (r, c, data[r * cols + c])))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(self.values[span].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.row(r).find(|&(cc, _)| cc == c).map_or(ZERO, |(_, v)| v)
    }

    /// Returns a copy with entry `(r, c)` replaced.
    pub fn with_entry(&self, r: usize, c: usize, value: Complex64) -> Self {
        let t = self.triplets().filter(|&(rr, cc, _)| (rr, cc) != (r, c)).chain([(r, c, value)]);
        Self::from_triplets(self.rows, self.cols, t)
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.rows * self.cols];
        for (r, c, v) in self.triplets() {
            out[r * self.cols + c] = v;
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_triplets(self.rows, self.cols, self.triplets().map(|(r, c, v)| (r, c, v * s)))
    }

    /// `diag(d) · self`.
    pub fn scale_rows(&self, d: &[Complex64]) -> Self {
        assert_eq!(d.len(), self.rows);
        Self::from_triplets(self.rows, self.cols, self.triplets().map(|(r, c, v)| (r, c, d[r] * v)))
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_same_shape(other)?;
        Ok(Self::from_triplets(self.rows, self.cols, self.triplets().chain(other.triplets())))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), LatticeError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LatticeError::DimensionMismatch { expected: self.rows * self.cols, got: other.rows * other.cols });
        }
        Ok(())
    }

    /// Sparse product `self · other`, accumulated row by row in column order.
    pub fn matmul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut acc = vec![ZERO; other.cols];
        let mut touched = vec![false; other.cols];
        let mut cols_in_row = Vec::new();
        let mut row_ptr = vec![0usize; self.rows + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        cols_in_row.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols_in_row.sort_unstable();
            for &c in &cols_in_row {
                if acc[c] != ZERO {
                    col_idx.push(c);
                    values.push(acc[c]);
                }
                acc[c] = ZERO;
                touched[c] = false;
            }
            cols_in_row.clear();
            row_ptr[r + 1] = col_idx.len();
        }
        Ok(Self { rows: self.rows, cols: other.cols, row_ptr, col_idx, values })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, LatticeError> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Row `r` of `self − other` as a max-abs value.
    pub fn row_max_abs_diff(&self, other: &Self, r: usize) -> f64 {
        let mut entries: Vec<(usize, Complex64)> = self.row(r).collect();
        entries.extend(other.row(r).map(|(c, v)| (c, -v)));
        entries.sort_by_key(|&(c, _)| c);
        let mut worst = 0.0f64;
        let mut i = 0;
        while i < entries.len() {
            let mut v = entries[i].1;
            let mut j = i + 1;
            while j < entries.len() && entries[j].0 == entries[i].0 {
                v += entries[j].1;
                j += 1;
            }
            worst = worst.max(v.norm());
            i = j;
        }
        worst
    }

    /// Assembles a block matrix from row-major blocks of uniform shape.
    pub fn from_blocks(block_rows: usize, block_cols: usize, blocks: &[Self]) -> Result<Self, LatticeError> {
        if blocks.len() != block_rows * block_cols || blocks.is_empty() {
            return Err(LatticeError::DimensionMismatch { expected: block_rows * block_cols, got: blocks.len() });
        }
        let (br, bc) = (blocks[0].rows, blocks[0].cols);
        if let Some(b) = blocks.iter().find(|b| (b.rows, b.cols) != (br, bc)) {
            return Err(LatticeError::DimensionMismatch { expected: br * bc, got: b.rows * b.cols });
        }
        let t = blocks.iter().enumerate().flat_map(|(i, b)| {
            let (ro, co) = ((i / block_cols) * br, (i % block_cols) * bc);
            b.triplets().map(move |(r, c, v)| (r + ro, c + co, v))
        });
        Ok(Self::from_triplets(block_rows * br, block_cols * bc, t))
    }

    /// `(A + A†)/2` together with the hermiticity defect `max|A − A†|`.
    pub fn hermitian_part(&self) -> (Self, f64) {
        let adj = self.adjoint();
        let defect = self.max_abs_diff(&adj).unwrap_or(f64::INFINITY);
        let sym = Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().chain(adj.triplets()).map(|(r, c, v)| (r, c, v * 0.5)),
        );
        (sym, defect)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = SparseMatrix::from_triplets(2, 2, [(0, 1, c(1.0, 0.0)), (0, 1, c(2.0, 1.0)), (1, 0, c(1.0, 0.0)), (1, 0, c(-1.0, 0.0))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), c(3.0, 1.0));
        assert_eq!(m.get(1, 0), c(0.0, 0.0));
    }

    #[test]
    fn product_matches_dense() {
        let a = SparseMatrix::from_dense(2, 3, &[c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 1.0), c(3.0, 0.0)]);
        let b = SparseMatrix::from_dense(3, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)]);
        let p = a.matmul(&b).unwrap();
        // row 0: [1, 2i, 0]·B ; row 1: [0, 1+i, 3]·B
        assert_eq!(p.get(0, 0), c(1.0, 0.0) + c(0.0, 2.0) * c(0.0, 1.0));
        assert_eq!(p.get(0, 1), c(2.0, 0.0));
        assert_eq!(p.get(1, 0), c(1.0, 1.0) * c(0.0, 1.0) + c(3.0, 0.0));
        assert_eq!(p.get(1, 1), c(0.0, -3.0));
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = SparseMatrix::from_triplets(2, 3, [(0, 2, c(1.0, 2.0))]);
        let h = a.adjoint();
        assert_eq!((h.rows(), h.cols()), (3, 2));
        assert_eq!(h.get(2, 0), c(1.0, -2.0));
    }

    #[test]
    fn blocks_and_hermitian_part() {
        let i = SparseMatrix::identity(2);
        let z = SparseMatrix::zeros(2, 2);
        let m = SparseMatrix::from_blocks(2, 2, &[z.clone(), i.clone(), z.clone(), z]).unwrap();
        assert_eq!(m.get(0, 2), c(1.0, 0.0));
        let (h, defect) = m.hermitian_part();
        assert_eq!(defect, 1.0);
        assert_eq!(h.get(0, 2), c(0.5, 0.0));
        assert_eq!(h.get(2, 0), c(0.5, 0.0));
    }

    #[test]
    fn row_difference() {
        let a = SparseMatrix::from_triplets(2, 2, [(0, 0, c(1.0, 0.0)), (1, 1, c(2.0, 0.0))]);
        let b = SparseMatrix::from_triplets(2, 2, [(0, 0, c(1.0, 0.0)), (1, 0, c(0.5, 0.0))]);
        assert_eq!(a.row_max_abs_diff(&b, 0), 0.0);
        assert_eq!(a.row_max_abs_diff(&b, 1), 2.0);
    }
}
