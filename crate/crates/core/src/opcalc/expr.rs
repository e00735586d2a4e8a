//! Normal-ordered differential operators in `z`, `z̄`, `∂ = ∂/∂z` and `∂̄ = ∂/∂z̄`.
//!
//! A monomial `c · z^a z̄^b ∂^c ∂̄^d` always has every multiplication to the
//! left of every differentiation. Products are brought back to this form with
//! the Wirtinger rules `[∂, z] = [∂̄, z̄] = 1` and `[∂, z̄] = [∂̄, z] = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::{self, binomial, falling, Coeff};
use crate::error::ParseError;

/// Power signature `(pow_z, pow_zbar, pow_d, pow_dbar)`; canonical expressions
/// are sorted by it lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Powers {
    pub z: u32,
    pub zbar: u32,
    pub d: u32,
    pub dbar: u32,
}

impl Powers {
    pub const fn new(z: u32, zbar: u32, d: u32, dbar: u32) -> Self {
        Self { z, zbar, d, dbar }
    }

    pub fn derivative_order(&self) -> u32 {
        self.d + self.dbar
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTerm {
    pub coeff: Coeff,
    pub powers: Powers,
}

impl OperatorTerm {
    pub fn new(coeff: Coeff, powers: Powers) -> Self {
        Self { coeff, powers }
    }

    pub fn monomial(z: u32, zbar: u32, d: u32, dbar: u32) -> Self {
        Self::new(Coeff::one(), Powers::new(z, zbar, d, dbar))
    }

    /// Formal L² adjoint: `z† = z̄`, `∂† = −∂̄`, `∂̄† = −∂`, order reversed,
    /// coefficient conjugated.
    pub fn adjoint(&self) -> OperatorExpression {
        let p = self.powers;
        let mut c = self.coeff.conj();
        if (p.d + p.dbar) % 2 == 1 {
            c = -c;
        }
        // (z^a z̄^b ∂^c ∂̄^d)† = (−∂)^d (−∂̄)^c z^b z̄^a
        let derivs = OperatorTerm::monomial(0, 0, p.dbar, p.d);
        let mults = OperatorTerm::new(c, Powers::new(p.zbar, p.z, 0, 0));
        normal_order(&derivs, &mults)
    }
}

/// Canonical form of the operator product `left ∘ right`.
///
/// Uses `∂^c ∘ z^e = Σ_j C(c, j) · e!/(e−j)! · z^(e−j) ∂^(c−j)` and its
/// conjugate; `∂` commutes with `z̄` and `∂̄` with `z`.
pub fn normal_order(left: &OperatorTerm, right: &OperatorTerm) -> OperatorExpression {
    let (l, r) = (left.powers, right.powers);
    let base = &left.coeff * &right.coeff;
    let mut acc = BTreeMap::new();
    for j in 0..=l.d.min(r.z) {
        let holo = binomial(l.d, j) * falling(r.z, j);
        for k in 0..=l.dbar.min(r.zbar) {
            let anti = binomial(l.dbar, k) * falling(r.zbar, k);
            let factor = BigRational::from_integer(&holo * anti);
            let powers = Powers::new(
                l.z + r.z - j,
                l.zbar + r.zbar - k,
                l.d - j + r.d,
                l.dbar - k + r.dbar,
            );
            accumulate(&mut acc, powers, &base * coeff::real(factor));
        }
    }
    OperatorExpression::from_map(acc)
}

fn accumulate(acc: &mut BTreeMap<Powers, Coeff>, powers: Powers, c: Coeff) {
    let slot = acc.entry(powers).or_insert_with(Coeff::zero);
    *slot = &*slot + c;
}

/// Sum of normal-ordered monomials with distinct power signatures and
/// nonzero coefficients, sorted by signature.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorExpression {
    terms: Vec<OperatorTerm>,
}

impl OperatorExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::from_terms([OperatorTerm::new(c, Powers::default())])
    }

    pub fn z() -> Self {
        Self::from_terms([OperatorTerm::monomial(1, 0, 0, 0)])
    }

    pub fn zbar() -> Self {
        Self::from_terms([OperatorTerm::monomial(0, 1, 0, 0)])
    }

    pub fn d() -> Self {
        Self::from_terms([OperatorTerm::monomial(0, 0, 1, 0)])
    }

    pub fn dbar() -> Self {
        Self::from_terms([OperatorTerm::monomial(0, 0, 0, 1)])
    }

    /// Canonicalizes an arbitrary list of (already normal-ordered) monomials:
    /// like signatures are merged and zero coefficients dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = OperatorTerm>) -> Self {
        let mut acc = BTreeMap::new();
        for t in terms {
            accumulate(&mut acc, t.powers, t.coeff);
        }
        Self::from_map(acc)
    }

    fn from_map(acc: BTreeMap<Powers, Coeff>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(powers, coeff)| OperatorTerm { coeff, powers })
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term differentiates.
    pub fn is_multiplication(&self) -> bool {
        self.terms.iter().all(|t| t.powers.derivative_order() == 0)
    }

    pub fn max_derivative_order(&self) -> u32 {
        self.terms.iter().map(|t| t.powers.derivative_order()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::from_terms(self.terms.iter().map(|t| OperatorTerm::new(&t.coeff * c, t.powers)))
    }

    pub fn compose(&self, right: &Self) -> Self {
        let mut acc = BTreeMap::new();
        for a in &self.terms {
            for b in &right.terms {
                for t in normal_order(a, b).terms {
                    accumulate(&mut acc, t.powers, t.coeff);
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn adjoint(&self) -> Self {
        let mut acc = BTreeMap::new();
        for t in &self.terms {
            for a in t.adjoint().terms {
                accumulate(&mut acc, a.powers, a.coeff);
            }
        }
        Self::from_map(acc)
    }

    /// Evaluates a derivative-free expression at a point.
    pub fn evaluate(&self, z: num_complex::Complex64) -> Option<num_complex::Complex64> {
        if !self.is_multiplication() {
            return None;
        }
        Some(
            self.terms
                .iter()
                .map(|t| {
                    coeff::to_complex64(&t.coeff)
                        * z.powu(t.powers.z)
                        * z.conj().powu(t.powers.zbar)
                })
                .sum(),
        )
    }
}

impl Add for &OperatorExpression {
    type Output = OperatorExpression;
    fn add(self, rhs: Self) -> OperatorExpression {
        OperatorExpression::from_terms(self.terms.iter().chain(&rhs.terms).cloned())
    }
}

impl Neg for &OperatorExpression {
    type Output = OperatorExpression;
    fn neg(self) -> OperatorExpression {
        self.scale(&coeff::int(-1))
    }
}

impl Sub for &OperatorExpression {
    type Output = OperatorExpression;
    fn sub(self, rhs: Self) -> OperatorExpression {
        self + &(-rhs)
    }
}

impl Mul for &OperatorExpression {
    type Output = OperatorExpression;
    fn mul(self, rhs: Self) -> OperatorExpression {
        self.compose(rhs)
    }
}

impl fmt::Display for OperatorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.powers;
        write!(
            f,
            "{}*z^{}*zb^{}*d^{}*db^{}",
            coeff::render(&self.coeff),
            p.z,
            p.zbar,
            p.d,
            p.dbar
        )
    }
}

impl fmt::Display for OperatorExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for OperatorTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseError::new(format!("malformed operator term `{s}`"));
        let mut parts = s.trim().split('*');
        let coeff = coeff::parse(parts.next().ok_or_else(err)?).ok_or_else(err)?;
        let mut pow = |name: &str| -> Result<u32, ParseError> {
            let part = parts.next().ok_or_else(err)?;
            let (sym, exp) = part.split_once('^').ok_or_else(err)?;
            if sym != name {
                return Err(err());
            }
            exp.parse().map_err(|_| err())
        };
        let powers = Powers::new(pow("z")?, pow("zb")?, pow("d")?, pow("db")?);
        if parts.next().is_some() {
            return Err(err());
        }
        Ok(Self { coeff, powers })
    }
}

impl FromStr for OperatorExpression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let terms = s
            .split(" + ")
            .map(str::parse)
            .collect::<Result<Vec<OperatorTerm>, _>>()?;
        Ok(Self::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcalc::coeff::int;

    fn term(c: i64, z: u32, zbar: u32, d: u32, dbar: u32) -> OperatorTerm {
        OperatorTerm::new(int(c), Powers::new(z, zbar, d, dbar))
    }

    #[test]
    fn d_after_z_picks_up_commutator() {
        let got = normal_order(&term(1, 0, 0, 1, 0), &term(1, 1, 0, 0, 0));
        let want = OperatorExpression::from_terms([term(1, 1, 0, 1, 0), term(1, 0, 0, 0, 0)]);
        assert_eq!(got, want);
    }

    #[test]
    fn already_ordered_product_is_unchanged() {
        let got = normal_order(&term(1, 1, 0, 0, 0), &term(1, 0, 0, 1, 0));
        assert_eq!(got, OperatorExpression::from_terms([term(1, 1, 0, 1, 0)]));
    }

    #[test]
    fn dbar_after_zbar_squared() {
        let got = normal_order(&term(1, 0, 0, 0, 1), &term(1, 0, 2, 0, 0));
        let want = OperatorExpression::from_terms([term(1, 0, 2, 0, 1), term(2, 0, 1, 0, 0)]);
        assert_eq!(got, want);
    }

    #[test]
    fn mixed_variables_commute() {
        // ∂ z̄ = z̄ ∂ and ∂̄ z = z ∂̄
        assert_eq!(
            normal_order(&term(1, 0, 0, 1, 0), &term(1, 0, 1, 0, 0)),
            OperatorExpression::from_terms([term(1, 0, 1, 1, 0)])
        );
        assert_eq!(
            normal_order(&term(1, 0, 0, 0, 1), &term(1, 1, 0, 0, 0)),
            OperatorExpression::from_terms([term(1, 1, 0, 0, 1)])
        );
    }

    #[test]
    fn canonical_form_merges_and_drops_zeros() {
        let e = OperatorExpression::from_terms([term(2, 1, 0, 0, 0), term(-2, 1, 0, 0, 0), term(3, 0, 0, 1, 0)]);
        assert_eq!(e.terms().len(), 1);
        assert_eq!(OperatorExpression::from_terms(e.terms().to_vec()), e);
    }

    #[test]
    fn term_adjoints() {
        assert_eq!(OperatorExpression::d().adjoint(), -&OperatorExpression::dbar());
        assert_eq!(OperatorExpression::z().adjoint(), OperatorExpression::zbar());
        // (z̄ ∂̄)† = −∂ z = −z∂ − 1
        let e = OperatorExpression::from_terms([term(1, 0, 1, 0, 1)]);
        let want = OperatorExpression::from_terms([term(-1, 1, 0, 1, 0), term(-1, 0, 0, 0, 0)]);
        assert_eq!(e.adjoint(), want);
    }

    #[test]
    fn rendering_matches_documented_format() {
        let e = OperatorExpression::from_terms([term(-1, 0, 1, 0, 0)]);
        assert_eq!(e.to_string(), "(-1+0i)*z^0*zb^1*d^0*db^0");
        assert_eq!(OperatorExpression::zero().to_string(), "0");
        let parsed: OperatorExpression = e.to_string().parse().unwrap();
        assert_eq!(parsed, e);
        assert!("(1+0i)*z^1*d^0".parse::<OperatorExpression>().is_err());
        assert!("1*z^0*zb^0*d^0*db^0".parse::<OperatorExpression>().is_err());
    }

    #[test]
    fn evaluate_requires_multiplication_operator() {
        let z = num_complex::Complex64::new(0.5, -2.0);
        assert_eq!(OperatorExpression::z().evaluate(z), Some(z));
        assert_eq!(OperatorExpression::d().evaluate(z), None);
    }
}
