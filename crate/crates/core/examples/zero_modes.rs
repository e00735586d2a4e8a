//! The localized zero mode: Gaussian decay fit, localization and the exact
//! ansatz at a perturbed coupling.

use dil::analysis::fit_gaussian_decay;
use dil::lattice::GridSpec;
use dil::spectral::{low_spectrum, EigenOptions};
use dil::susy::{zero_mode_ansatz, DefectOperatorSet, ModelSpec};

fn main() {
    let grid = GridSpec::desk();
    let model = ModelSpec::with_coupling(0.19);
    let disc = DefectOperatorSet::from_model(&model).unwrap().discretize(&grid);
    let spectrum = low_spectrum(&disc.h_minus, "H_minus", &EigenOptions::with_k(3)).unwrap();
    let mode = spectrum.mode_field(0, &grid).unwrap();
    let fit = fit_gaussian_decay(&mode).unwrap();
    println!("lowest H- eigenvalue {:.3e}", spectrum.eigenvalues[0]);
    println!("alpha fit {:.4} (predicted {:.4}), r² {:.5}", fit.alpha, model.predicted_decay(), fit.r_squared);
    println!("mass inside |z| < 2: {:.5}", mode.localization_fraction(2.0).unwrap());
    if let Some(exact) = zero_mode_ansatz(&model).unwrap() {
        println!("exact zero mode (alpha, 1)·exp(-alpha|z|²) with alpha = {}", exact.alpha());
    }
}
