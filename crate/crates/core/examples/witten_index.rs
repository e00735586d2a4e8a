//! Witten index of the unperturbed defect operator on the desk grid.

use dil::lattice::GridSpec;
use dil::spectral::{witten_index, IndexParams};
use dil::susy::{DefectOperatorSet, ModelSpec};

fn main() {
    let grid = GridSpec::desk();
    let set = DefectOperatorSet::from_model(&ModelSpec::default()).unwrap();
    let r = witten_index(&set, &grid, &IndexParams::default()).unwrap();
    println!("n- = {}, n+ = {}, delta = {}", r.n_minus, r.n_plus, r.delta);
    println!("winding = {:?} (agrees: {:?})", r.winding, r.winding_agrees);
    println!("H- low: {:.5?}", r.spectrum_minus.eigenvalues);
    println!("H+ low: {:.5?}", r.spectrum_plus.eigenvalues);
}
