//! Defect operator family, the supersymmetric quartet and the Witten-parity
//! graded layer.

pub mod graded;
pub mod model;
pub mod quartet;

pub use graded::{
    graded_apply, parity_classify, physical_state_embed, project, sector_leakage, GradedOperator, GradedVector,
    Parity, Sign, DEFAULT_PARITY_TOL,
};
pub use model::{build_defect_operator, multiplier, zero_mode_ansatz, DefectOperatorSet, DiscreteDefectSet, ModelSpec};
pub use quartet::{odd_embedding, witten_parity, SusyQuartet};
