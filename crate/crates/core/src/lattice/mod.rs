//! Square-lattice discretization of the complex plane.

pub mod csv;
pub mod field;
pub mod grid;
pub mod sparse;
pub mod stencil;

pub use field::{localization_fraction, sample, sample_vector, Field};
pub use grid::GridSpec;
pub use sparse::SparseMatrix;
pub use stencil::{discretize, DifferenceOperators, Discretizer};
