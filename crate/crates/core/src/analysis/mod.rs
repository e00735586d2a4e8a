//! Experiments built on the spectral layer: decay fits, perturbation sweeps,
//! convergence studies and the algebra check.

pub mod algebra;
pub mod convergence;
pub mod decay;
pub mod sweep;

pub use algebra::{algebra_check, AlgebraReport};
pub use convergence::{convergence_study, convergence_to_csv, default_grids, ConvergenceReport, ConvergenceRow};
pub use decay::{fit_gaussian_decay, fit_gaussian_decay_in, DecayFit};
pub use sweep::{perturbation_sweep, sweep_models, sweep_to_csv, SweepRow};
