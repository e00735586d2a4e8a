//! Witten-parity grading: graded vectors, even/odd operators and the module
//! action of operators on the two sectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::SusyError;
use crate::lattice::{Field, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Indefinite,
}

impl Parity {
    /// `Z₂` product: equal parities give even, different ones odd.
    pub fn compose(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Indefinite, _) | (_, Parity::Indefinite) => Parity::Indefinite,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

pub const DEFAULT_PARITY_TOL: f64 = 1e-10;

/// Classifies `A` against the grading `W` by the relative size of its
/// commutator and anticommutator (Frobenius norms).
pub fn parity_classify(a: &SparseMatrix, w: &SparseMatrix, tol: f64) -> Result<Parity, SusyError> {
    if a.rows() != w.rows() || a.cols() != w.cols() {
        return Err(SusyError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let aw = a.matmul(w)?;
    let wa = w.matmul(a)?;
    let scale = a.frobenius();
    if wa.sub(&aw)?.frobenius() <= tol * scale {
        Ok(Parity::Even)
    } else if wa.add(&aw)?.frobenius() <= tol * scale {
        Ok(Parity::Odd)
    } else {
        Ok(Parity::Indefinite)
    }
}

/// Element of `H⁺ ⊕ H⁻`; `W` acts as `+1` on `plus` and `−1` on `minus`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedVector {
    pub plus: Field,
    pub minus: Field,
}

impl GradedVector {
    pub fn new(plus: Field, minus: Field) -> Result<Self, SusyError> {
        if plus.grid() != minus.grid() || plus.components() != minus.components() {
            return Err(SusyError::Components { expected: plus.components(), got: minus.components() });
        }
        Ok(Self { plus, minus })
    }

    pub fn sector_dim(&self) -> usize {
        self.plus.values().len()
    }

    /// Concatenation `[plus; minus]`.
    pub fn stacked(&self) -> Vec<Complex64> {
        self.plus.values().iter().chain(self.minus.values()).copied().collect()
    }

    fn from_stacked(&self, v: Vec<Complex64>) -> Self {
        let n = self.sector_dim();
        let plus = Field::new(*self.plus.grid(), self.plus.components(), v[..n].to_vec()).expect("same shape");
        let minus = Field::new(*self.plus.grid(), self.plus.components(), v[n..].to_vec()).expect("same shape");
        Self { plus, minus }
    }

    pub fn norm(&self) -> f64 {
        (self.plus.norm_sqr() + self.minus.norm_sqr()).sqrt()
    }

    pub fn is_pure(&self, sign: Sign) -> bool {
        match sign {
            Sign::Plus => self.minus.values().iter().all(|v| v.norm() == 0.0),
            Sign::Minus => self.plus.values().iter().all(|v| v.norm() == 0.0),
        }
    }

    /// `W` eigenvalue if the vector lies in one sector.
    pub fn witten_eigenvalue(&self) -> Option<f64> {
        let plus_zero = self.is_pure(Sign::Minus);
        let minus_zero = self.is_pure(Sign::Plus);
        match (plus_zero, minus_zero) {
            (true, false) => Some(-1.0),
            (false, true) => Some(1.0),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let v = self.stacked().iter().zip(other.stacked()).map(|(a, b)| a + b).collect();
        self.from_stacked(v)
    }

    fn apply_w(&self) -> Vec<Complex64> {
        let n = self.sector_dim();
        self.stacked().into_iter().enumerate().map(|(i, v)| if i < n { v } else { -v }).collect()
    }
}

/// `P± = (I ± W)/2`.
pub fn project(v: &GradedVector, sign: Sign) -> GradedVector {
    let s = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    let projected = v.stacked().iter().zip(v.apply_w()).map(|(a, wa)| (a + wa * s) * 0.5).collect();
    v.from_stacked(projected)
}

/// Operator on the doubled space with a declared parity.
#[derive(Debug, Clone)]
pub struct GradedOperator {
    matrix: SparseMatrix,
    parity: Parity,
}

impl GradedOperator {
    /// Classifies `matrix` against the standard grading of its dimension.
    pub fn classify(matrix: SparseMatrix, tol: f64) -> Result<Self, SusyError> {
        if !matrix.is_square() || matrix.rows() % 2 != 0 {
            return Err(SusyError::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let w = super::quartet::witten_parity(matrix.rows() / 2);
        let parity = parity_classify(&matrix, &w, tol)?;
        Ok(Self { matrix, parity })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn compose(&self, other: &Self, tol: f64) -> Result<Self, SusyError> {
        Self::classify(self.matrix.matmul(&other.matrix)?, tol)
    }
}

/// Relative norm of the part of `A v` that lands in the sector forbidden by
/// the module table (even keeps sectors, odd swaps them).
pub fn sector_leakage(a: &GradedOperator, v: &GradedVector) -> Result<f64, SusyError> {
    let (out_from_plus, out_from_minus) = split_action(a, v)?;
    let n = v.sector_dim();
    let (allowed_plus, allowed_minus) = match a.parity {
        Parity::Even => (0..n, n..2 * n),
        Parity::Odd => (n..2 * n, 0..n),
        Parity::Indefinite => return Err(SusyError::IndefiniteParity),
    };
    let leak_sq: f64 = out_from_plus
        .iter()
        .enumerate()
        .filter(|(i, _)| !allowed_plus.contains(i))
        .chain(out_from_minus.iter().enumerate().filter(|(i, _)| !allowed_minus.contains(i)))
        .map(|(_, x)| x.norm_sqr())
        .sum();
    let total_sq: f64 = out_from_plus.iter().chain(&out_from_minus).map(Complex64::norm_sqr).sum();
    Ok(if total_sq == 0.0 { 0.0 } else { (leak_sq / total_sq).sqrt() })
}

fn split_action(a: &GradedOperator, v: &GradedVector) -> Result<(Vec<Complex64>, Vec<Complex64>), SusyError> {
    let n = v.sector_dim();
    if a.matrix.rows() != 2 * n {
        return Err(SusyError::Components { expected: a.matrix.rows(), got: 2 * n });
    }
    let plus_part = project(v, Sign::Plus).stacked();
    let minus_part = project(v, Sign::Minus).stacked();
    Ok((a.matrix.matvec(&plus_part), a.matrix.matvec(&minus_part)))
}

/// Module action `A·v`, checked against the parity table with `tol`.
pub fn graded_apply(a: &GradedOperator, v: &GradedVector, tol: f64) -> Result<GradedVector, SusyError> {
    if a.parity == Parity::Indefinite {
        return Err(SusyError::IndefiniteParity);
    }
    let leak = sector_leakage(a, v)?;
    if leak > tol {
        return Err(SusyError::ParityLeak(leak));
    }
    Ok(v.from_stacked(a.matrix.matvec(&v.stacked())))
}

/// Places a two-component fermion pair in the odd sector.
pub fn physical_state_embed(pair: &Field) -> Result<GradedVector, SusyError> {
    if pair.components() != 2 {
        return Err(SusyError::Components { expected: 2, got: pair.components() });
    }
    GradedVector::new(Field::zeros(*pair.grid(), 2), pair.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::GridSpec;
    use crate::susy::quartet::{odd_embedding, witten_parity};

    fn grid() -> GridSpec {
        GridSpec::new(2.0, 8).unwrap()
    }

    fn field(seed: f64) -> Field {
        Field::from_fn(grid(), 2, |c, z| Complex64::new(z.re * seed + c as f64, z.im - seed))
    }

    #[test]
    fn projections() {
        let psi = GradedVector::new(field(1.0), Field::zeros(grid(), 2)).unwrap();
        assert_eq!(project(&psi, Sign::Plus), psi);
        assert!(project(&psi, Sign::Minus).stacked().iter().all(|v| v.norm() == 0.0));
        let v = GradedVector::new(field(0.3), field(-2.0)).unwrap();
        assert_eq!(project(&v, Sign::Plus).add(&project(&v, Sign::Minus)), v);
        let p = project(&v, Sign::Plus);
        assert_eq!(project(&p, Sign::Plus), p);
    }

    #[test]
    fn module_table_on_pure_vectors() {
        let n = 2 * grid().nodes();
        let a = SparseMatrix::from_triplets(n, n, (0..n).map(|i| (i, (i * 7) % n, Complex64::new(1.0, i as f64))));
        let even = GradedOperator::classify(SparseMatrix::from_blocks(2, 2, &[a.clone(), SparseMatrix::zeros(n, n), SparseMatrix::zeros(n, n), a.clone()]).unwrap(), 1e-12).unwrap();
        let odd = GradedOperator::classify(odd_embedding(&a).unwrap(), 1e-12).unwrap();
        assert_eq!(even.parity(), Parity::Even);
        assert_eq!(odd.parity(), Parity::Odd);
        let psi = GradedVector::new(field(1.0), Field::zeros(grid(), 2)).unwrap();
        let out_even = graded_apply(&even, &psi, 1e-12).unwrap();
        assert!(out_even.is_pure(Sign::Plus));
        // odd embedding only maps the minus sector into plus; use its adjoint
        let odd_up = GradedOperator::classify(odd_embedding(&a).unwrap().adjoint(), 1e-12).unwrap();
        let out_odd = graded_apply(&odd_up, &psi, 1e-12).unwrap();
        assert!(out_odd.is_pure(Sign::Minus));
        assert_eq!(odd.compose(&odd_up, 1e-12).unwrap().parity(), Parity::Even);
        assert_eq!(Parity::Odd.compose(Parity::Odd), Parity::Even);
    }

    #[test]
    fn indefinite_operator_is_rejected() {
        let n = 2 * grid().nodes();
        let mixed = SparseMatrix::identity(2 * n).add(&odd_embedding(&SparseMatrix::identity(n)).unwrap()).unwrap();
        let op = GradedOperator::classify(mixed, 1e-10).unwrap();
        assert_eq!(op.parity(), Parity::Indefinite);
        let v = GradedVector::new(field(1.0), field(2.0)).unwrap();
        assert_eq!(graded_apply(&op, &v, 1e-12), Err(SusyError::IndefiniteParity));
    }

    #[test]
    fn physical_embedding_sits_in_odd_sector() {
        let pair = field(0.5);
        let v = physical_state_embed(&pair).unwrap();
        assert_eq!(v.witten_eigenvalue(), Some(-1.0));
        assert_eq!(project(&v, Sign::Minus).minus, pair);
        let zero = physical_state_embed(&Field::zeros(grid(), 2)).unwrap();
        assert_eq!(zero.norm(), 0.0);
        let single = Field::zeros(grid(), 1);
        assert!(physical_state_embed(&single).is_err());
    }

    #[test]
    fn classify_checks_dimensions() {
        let w = witten_parity(3);
        assert!(parity_classify(&SparseMatrix::identity(4), &w, 1e-10).is_err());
    }
}
