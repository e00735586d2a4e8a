//! The defect operator family and its partner Hamiltonians.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::SusyError;
use crate::lattice::{Discretizer, GridSpec, SparseMatrix};
use crate::opcalc::{coeff, defect_dirac, defect_dirac_with_multiplier, BlockOperator, GaussianAnsatz, GaussianVector};

/// Parameters of the reduced model at a frozen point along the matter curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    /// Higgs-profile coupling; the reduced model fixes it to 1.
    pub t: f64,
    pub epsilon: f64,
    pub f1_value: f64,
    /// Coefficients of `ε², ε³, …` in the mass multiplier.
    #[serde(default)]
    pub f1_series: Vec<f64>,
    /// Recorded only; it does not enter the reduced operator.
    #[serde(default)]
    pub f2_value: f64,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self { t: 1.0, epsilon: 0.0, f1_value: 0.0, f1_series: Vec::new(), f2_value: 0.0 }
    }
}

impl ModelSpec {
    /// `ε = 1`, `f₁ = c`: a model whose linear coupling is exactly `c`.
    pub fn with_coupling(c: f64) -> Self {
        Self { epsilon: 1.0, f1_value: c, ..Self::default() }
    }

    /// `c = ε f₁ + ε² f₁⁽¹⁾ + ε³ f₁⁽²⁾ + …`.
    pub fn coupling(&self) -> f64 {
        let higher: f64 = self
            .f1_series
            .iter()
            .enumerate()
            .map(|(j, a)| a * self.epsilon.powi(j as i32 + 2))
            .sum();
        self.epsilon * self.f1_value + higher
    }

    /// Exact counterpart of [`ModelSpec::coupling`].
    pub fn coupling_exact(&self) -> Result<BigRational, SusyError> {
        let conv = |name: &str, v: f64| {
            coeff::rational_from_f64(v).ok_or_else(|| SusyError::InvalidModel(format!("{name} = {v} is not finite")))
        };
        let eps = conv("epsilon", self.epsilon)?;
        let mut c = &eps * conv("f1", self.f1_value)?;
        let mut power = &eps * &eps;
        for (j, a) in self.f1_series.iter().enumerate() {
            c += &power * conv(&format!("f1_series[{j}]"), *a)?;
            power *= &eps;
        }
        Ok(c)
    }

    /// Decay rate `√(1 − c)` of the zero mode.
    pub fn predicted_decay(&self) -> f64 {
        (1.0 - self.coupling()).sqrt()
    }

    pub fn validate(&self) -> Result<(), SusyError> {
        let finite = [self.t, self.epsilon, self.f1_value, self.f2_value]
            .iter()
            .chain(&self.f1_series)
            .all(|v| v.is_finite());
        if !finite {
            return Err(SusyError::InvalidModel("all model parameters must be finite".into()));
        }
        if self.t != 1.0 {
            return Err(SusyError::InvalidModel(format!("t is fixed to 1 in the reduced model, got {}", self.t)));
        }
        if self.epsilon < 0.0 {
            return Err(SusyError::InvalidModel(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if self.coupling_exact()? >= BigRational::one() {
            return Err(SusyError::InvalidModel(format!(
                "coupling epsilon*f1 (+ higher orders) = {} must be < 1",
                self.coupling()
            )));
        }
        Ok(())
    }
}

/// `[[∂, z̄(1 − c)], [z, ∂̄]]` with `c` the exact coupling of the model.
pub fn build_defect_operator(spec: &ModelSpec) -> Result<BlockOperator, SusyError> {
    spec.validate()?;
    Ok(defect_dirac_with_multiplier(&multiplier(spec)?))
}

/// Symbolic operator set: the defect operator, its adjoint, its deviation from
/// the unperturbed operator and both partner Hamiltonians.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectOperatorSet {
    pub d: BlockOperator,
    pub d_adj: BlockOperator,
    /// `D − D_F`.
    pub k: BlockOperator,
    /// `D† D`.
    pub h_minus: BlockOperator,
    /// `D D†`.
    pub h_plus: BlockOperator,
    pub model: Option<ModelSpec>,
}

impl DefectOperatorSet {
    pub fn from_model(spec: &ModelSpec) -> Result<Self, SusyError> {
        let mut set = Self::from_operator(build_defect_operator(spec)?)?;
        set.model = Some(spec.clone());
        Ok(set)
    }

    /// Any square 2×2 block operator in place of the defect operator.
    pub fn from_operator(d: BlockOperator) -> Result<Self, SusyError> {
        if d.rows() != d.cols() {
            return Err(SusyError::NotSquare { rows: d.rows(), cols: d.cols() });
        }
        let d_adj = d.adjoint();
        let h_minus = d_adj.compose(&d)?;
        let h_plus = d.compose(&d_adj)?;
        let k = if d.rows() == 2 { d.sub(&defect_dirac())? } else { BlockOperator::zeros(d.rows(), d.cols()) };
        Ok(Self { d, d_adj, k, h_minus, h_plus, model: None })
    }

    pub fn components(&self) -> usize {
        self.d.rows()
    }

    /// Discretizes every member on one grid. The Hamiltonians come from their
    /// symbolic compositions, not from products of the discrete `D`.
    pub fn discretize(&self, grid: &GridSpec) -> DiscreteDefectSet {
        let mut disc = Discretizer::new(grid);
        DiscreteDefectSet {
            grid: *grid,
            d: disc.block(&self.d),
            d_adj: disc.block(&self.d_adj),
            k: disc.block(&self.k),
            h_minus: disc.block(&self.h_minus),
            h_plus: disc.block(&self.h_plus),
        }
    }

    pub fn k_is_zero(&self) -> bool {
        self.k.entries().iter().all(|e| e.is_zero())
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteDefectSet {
    pub grid: GridSpec,
    pub d: SparseMatrix,
    pub d_adj: SparseMatrix,
    pub k: SparseMatrix,
    pub h_minus: SparseMatrix,
    pub h_plus: SparseMatrix,
}

/// The exact zero mode `(α, 1)·e^{−α|z|²}` with `α = √(1 − c)`, when that
/// root is rational.
pub fn zero_mode_ansatz(spec: &ModelSpec) -> Result<Option<GaussianVector>, SusyError> {
    let m = multiplier(spec)?;
    let root = |x: &BigInt| {
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    };
    let (Some(p), Some(q)) = (root(m.numer()), root(m.denom())) else { return Ok(None) };
    let alpha = BigRational::new(p, q);
    let first = GaussianAnsatz::scaled(alpha.clone(), coeff::real(alpha.clone()))?;
    let second = GaussianAnsatz::plain(alpha)?;
    Ok(Some(GaussianVector::new(vec![first, second])?))
}

/// Exact mass multiplier `1 − c`.
pub fn multiplier(spec: &ModelSpec) -> Result<BigRational, SusyError> {
    Ok(BigRational::one() - spec.coupling_exact()?)
}
