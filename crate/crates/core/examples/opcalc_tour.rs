//! Exact Wirtinger algebra: normal ordering, adjoints and the partner
//! Hamiltonians of the defect operator.

use dil::opcalc::coeff::{int, rational};
use dil::opcalc::{defect_dirac, gaussian_apply, GaussianAnsatz, GaussianVector, OperatorExpression, Polynomial};

fn main() {
    let d = OperatorExpression::d();
    let z = OperatorExpression::z();
    println!("∂∘z          = {}", d.compose(&z));
    println!("(z∂)†        = {}", z.compose(&d).adjoint());

    let parsed: OperatorExpression = "(1+0i)*z^1*zb^0*d^1*db^0 + (1/2+0i)*z^0*zb^2*d^0*db^1".parse().expect("valid expression");
    println!("parsed       = {parsed}");

    let df = defect_dirac();
    println!("D_F          = {df}");
    println!("D_F† D_F     = {}", df.adjoint().compose(&df).unwrap());
    println!("D_F D_F†     = {}", df.compose(&df.adjoint()).unwrap());

    let g = GaussianAnsatz::plain(rational(1, 1)).unwrap();
    let chain = GaussianAnsatz::new(rational(1, 1), Polynomial::from_monomials([((0, 1), int(-1))])).unwrap();
    println!("∂ e^(-|z|²) = -z̄ e^(-|z|²): {}", gaussian_apply(&d, &g) == chain);
    let pair = GaussianVector::new(vec![g.clone(), g]).unwrap();
    println!("D_F (1,1)ᵀg annihilated: {}", df.apply_gaussian(&pair).unwrap().is_zero());
}
