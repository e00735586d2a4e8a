//! Symbolic and lattice tools for the supersymmetric structure of a
//! two-dimensional defect Dirac operator.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod opcalc;
pub mod spectral;
pub mod susy;
