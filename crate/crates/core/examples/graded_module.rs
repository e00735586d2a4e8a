//! Witten-parity grading: classifying the supercharges and applying them to
//! a physical state.

use dil::lattice::{sample_vector, GridSpec};
use dil::opcalc::coeff::{int, rational};
use dil::opcalc::{defect_dirac, GaussianAnsatz, GaussianVector};
use dil::susy::{graded_apply, physical_state_embed, DefectOperatorSet, GradedOperator, SusyQuartet, DEFAULT_PARITY_TOL};

fn main() {
    let grid = GridSpec::new(4.0, 24).unwrap();
    let disc = DefectOperatorSet::from_operator(defect_dirac()).unwrap().discretize(&grid);
    let quartet = SusyQuartet::build(&disc.d).unwrap();
    let q = GradedOperator::classify(quartet.q.clone(), DEFAULT_PARITY_TOL).unwrap();
    let ham = GradedOperator::classify(quartet.ham.clone(), DEFAULT_PARITY_TOL).unwrap();
    println!("Q is {:?}, H is {:?}", q.parity(), ham.parity());

    let g = GaussianAnsatz::plain(rational(1, 1)).unwrap();
    // (1, −1)ᵀ is not annihilated by D, so Q carries it into the even sector
    let pair = sample_vector(&grid, &GaussianVector::new(vec![g.clone(), g.scale(&int(-1))]).unwrap());
    let state = physical_state_embed(&pair).unwrap();
    println!("physical state W = {:?}", state.witten_eigenvalue());
    let moved = graded_apply(&q, &state, 1e-12).unwrap();
    println!("Q state W = {:?}, norm {:.3e}", moved.witten_eigenvalue(), moved.norm());
}
