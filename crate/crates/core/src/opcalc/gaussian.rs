//! Polynomial-times-Gaussian functions `p(z, z̄) · exp(−α|z|²)`.
//!
//! The family is closed under multiplication by `z`, `z̄` and under `∂`, `∂̄`,
//! so any normal-ordered operator can be applied exactly.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::{self, Coeff};
use super::expr::{OperatorExpression, OperatorTerm};
use crate::error::OpcalcError;

/// Bivariate polynomial in `(z, z̄)` keyed by `(pow_z, pow_zbar)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: BTreeMap<(u32, u32), Coeff>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Coeff) -> Self {
        Self::from_monomials([((0, 0), c)])
    }

    pub fn from_monomials(items: impl IntoIterator<Item = ((u32, u32), Coeff)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in items {
            p.add_monomial(k, c);
        }
        p
    }

    fn add_monomial(&mut self, key: (u32, u32), c: Coeff) {
        let slot = self.coeffs.entry(key).or_insert_with(Coeff::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&(u32, u32), &Coeff)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_monomial(k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::from_monomials(self.coeffs.iter().map(|(&k, v)| (k, v * c)))
    }

    fn shift(&self, dz: u32, dzbar: u32) -> Self {
        Self::from_monomials(self.coeffs.iter().map(|(&(a, b), v)| ((a + dz, b + dzbar), v.clone())))
    }

    fn d_holo(&self) -> Self {
        Self::from_monomials(
            self.coeffs
                .iter()
                .filter(|((a, _), _)| *a > 0)
                .map(|(&(a, b), v)| ((a - 1, b), v * coeff::int(a as i64))),
        )
    }

    fn d_anti(&self) -> Self {
        Self::from_monomials(
            self.coeffs
                .iter()
                .filter(|((_, b), _)| *b > 0)
                .map(|(&(a, b), v)| ((a, b - 1), v * coeff::int(b as i64))),
        )
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&(a, b), c)| coeff::to_complex64(c) * z.powu(a) * z.conj().powu(b))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianAnsatz {
    alpha: BigRational,
    poly: Polynomial,
}

impl GaussianAnsatz {
    pub fn new(alpha: BigRational, poly: Polynomial) -> Result<Self, OpcalcError> {
        if !alpha.is_positive() {
            return Err(OpcalcError::NonPositiveDecay(alpha.to_string()));
        }
        Ok(Self { alpha, poly })
    }

    /// `c · exp(−α|z|²)`.
    pub fn scaled(alpha: BigRational, c: Coeff) -> Result<Self, OpcalcError> {
        Self::new(alpha, Polynomial::constant(c))
    }

    /// `exp(−α|z|²)`.
    pub fn plain(alpha: BigRational) -> Result<Self, OpcalcError> {
        Self::scaled(alpha, Coeff::one())
    }

    pub fn zero(alpha: BigRational) -> Result<Self, OpcalcError> {
        Self::new(alpha, Polynomial::zero())
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self, OpcalcError> {
        if self.alpha != other.alpha {
            return Err(OpcalcError::DecayMismatch(self.alpha.to_string(), other.alpha.to_string()));
        }
        Ok(Self { alpha: self.alpha.clone(), poly: self.poly.add(&other.poly) })
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self { alpha: self.alpha.clone(), poly: self.poly.scale(c) }
    }

    /// `∂(p e^{−α z z̄}) = (∂p − α z̄ p) e^{−α z z̄}`.
    pub fn d(&self) -> Self {
        let a = coeff::real(self.alpha.clone());
        let poly = self.poly.d_holo().add(&self.poly.shift(0, 1).scale(&-a));
        Self { alpha: self.alpha.clone(), poly }
    }

    /// `∂̄(p e^{−α z z̄}) = (∂̄p − α z p) e^{−α z z̄}`.
    pub fn dbar(&self) -> Self {
        let a = coeff::real(self.alpha.clone());
        let poly = self.poly.d_anti().add(&self.poly.shift(1, 0).scale(&-a));
        Self { alpha: self.alpha.clone(), poly }
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.poly.evaluate(z) * (-coeff::to_f64(&self.alpha) * z.norm_sqr()).exp()
    }

    fn apply_term(&self, t: &OperatorTerm) -> Self {
        let mut f = self.clone();
        for _ in 0..t.powers.dbar {
            f = f.dbar();
        }
        for _ in 0..t.powers.d {
            f = f.d();
        }
        Self {
            alpha: f.alpha,
            poly: f.poly.shift(t.powers.z, t.powers.zbar).scale(&t.coeff),
        }
    }
}

impl OperatorExpression {
    /// Exact application to `p · exp(−α|z|²)`.
    pub fn apply_gaussian(&self, f: &GaussianAnsatz) -> GaussianAnsatz {
        let poly = self
            .terms()
            .iter()
            .fold(Polynomial::zero(), |acc, t| acc.add(&f.apply_term(t).poly));
        GaussianAnsatz { alpha: f.alpha.clone(), poly }
    }
}

/// Free-function form of [`OperatorExpression::apply_gaussian`].
pub fn gaussian_apply(a: &OperatorExpression, f: &GaussianAnsatz) -> GaussianAnsatz {
    a.apply_gaussian(f)
}

/// Column of ansatz functions with a common decay rate, the input of a block
/// operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianVector {
    components: Vec<GaussianAnsatz>,
}

impl GaussianVector {
    pub fn new(components: Vec<GaussianAnsatz>) -> Result<Self, OpcalcError> {
        let first = components.first().ok_or(OpcalcError::EmptyVector)?;
        if let Some(bad) = components.iter().find(|c| c.alpha != first.alpha) {
            return Err(OpcalcError::DecayMismatch(first.alpha.to_string(), bad.alpha.to_string()));
        }
        Ok(Self { components })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.components[0].alpha
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[GaussianAnsatz] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GaussianAnsatz::is_zero)
    }
}
