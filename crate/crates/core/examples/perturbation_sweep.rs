//! Index and decay rate as the mass multiplier `1 − c` is lowered.

use dil::analysis::{perturbation_sweep, sweep_to_csv};
use dil::lattice::GridSpec;
use dil::spectral::IndexParams;

fn main() {
    let grid = GridSpec::new(4.0, 48).unwrap();
    let rows = perturbation_sweep(&[0.0, 0.2, 0.4], &grid, &IndexParams::default());
    print!("{}", sweep_to_csv(&rows));
}
