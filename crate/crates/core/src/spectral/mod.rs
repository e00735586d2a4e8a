//! Low-lying spectra, zero-mode counting and the Witten index.

pub mod eigen;
pub mod index;
pub mod winding;

pub use eigen::{gershgorin_lower_bound, low_spectrum, EigenOptions, EigenReport, SolverMethod};
pub use index::{count_zero_modes, pairing_check, witten_index, IndexParams, PairingReport, WittenIndexReport, ZeroModeCount};
pub use winding::winding_number;
