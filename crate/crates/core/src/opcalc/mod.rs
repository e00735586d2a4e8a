//! Exact symbolic calculus for polynomial-coefficient differential operators
//! in one complex variable.

pub mod block;
pub mod coeff;
pub mod expr;
pub mod gaussian;
pub mod random;

pub use block::BlockOperator;
pub use coeff::Coeff;
pub use expr::{normal_order, OperatorExpression, OperatorTerm, Powers};
pub use gaussian::{gaussian_apply, GaussianAnsatz, GaussianVector, Polynomial};

use num_rational::BigRational;

/// Defect Dirac operator `[[∂, m·z̄], [z, ∂̄]]`; `m = 1` is the unperturbed case.
pub fn defect_dirac_with_multiplier(multiplier: &BigRational) -> BlockOperator {
    let mass = OperatorExpression::zbar().scale(&coeff::real(multiplier.clone()));
    BlockOperator::from_rows([
        [OperatorExpression::d(), mass],
        [OperatorExpression::z(), OperatorExpression::dbar()],
    ])
}

/// `[[∂, z̄], [z, ∂̄]]`.
pub fn defect_dirac() -> BlockOperator {
    defect_dirac_with_multiplier(&BigRational::from_integer(1.into()))
}

/// `−∂∂̄ + z z̄`, the scalar part shared by both partner Hamiltonians.
pub fn oscillator() -> OperatorExpression {
    OperatorExpression::from_terms([
        OperatorTerm::new(coeff::int(-1), Powers::new(0, 0, 1, 1)),
        OperatorTerm::new(coeff::int(1), Powers::new(1, 1, 0, 0)),
    ])
}
