//! Builds `Q`, `Q†`, `H` and `W` on a grid and prints every algebra residual.

use dil::analysis::algebra_check;
use dil::lattice::GridSpec;
use dil::opcalc::defect_dirac;
use dil::susy::{DefectOperatorSet, SusyQuartet};

fn main() {
    let grid = GridSpec::new(5.0, 48).unwrap();
    let disc = DefectOperatorSet::from_operator(defect_dirac()).unwrap().discretize(&grid);
    let quartet = SusyQuartet::build(&disc.d).unwrap();
    let report = algebra_check(&quartet).unwrap();
    for (name, value) in report.residuals() {
        println!("{name:<28} {value:.3e}");
    }
    println!("passes at 1e-12: {}", report.passes(1e-12));
}
