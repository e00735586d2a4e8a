//! Observed discretization order of the first excited `H₋` level.

use dil::analysis::{convergence_study, convergence_to_csv};
use dil::lattice::GridSpec;
use dil::spectral::EigenOptions;
use dil::susy::ModelSpec;

fn main() {
    let grids: Vec<GridSpec> = [24, 48, 96].iter().map(|&n| GridSpec::new(5.0, n).unwrap()).collect();
    let report = convergence_study(&grids, &ModelSpec::default(), &EigenOptions::with_k(4)).unwrap();
    print!("{}", convergence_to_csv(&report));
    println!("order {:.3}, monotone {}", report.order_second, report.monotone_first);
    for w in &report.warnings {
        println!("warning: {w}");
    }
}
