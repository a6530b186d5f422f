//! Schur-complement analysis of symmetric indefinite 2x2 block operators
//! and its application to discretized radial Dirac-Coulomb channels.
//!
//! * [`blockop`]: block operators `H = [[P, Tᵀ], [T, -S]]`, the forms
//!   `q_α`, their positivity margins and the critical constant `c2`.
//! * [`solver`]: the elimination solve of `H (u, v) = (F1, F2)` and
//!   shift-invert gap eigenvalues built on it.
//! * [`dirac`]: radial grids, Dirac-Coulomb channels, the Sommerfeld
//!   oracle and Hardy-type coupling sweeps.
//! * [`sample`]: random structured operators for testing.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*F64`
//! aliases below fix the scalar type to `f64`, which is what the stated
//! tolerances assume.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons reject NaN on purpose

pub mod blockop;
pub mod dirac;
pub mod error;
pub mod linalg;
pub mod sample;
mod scalar;
pub mod solver;

pub use blockop::{BlockOperator, C1Policy, Embedding, FormReport, StateVector, Tolerances};
pub use dirac::{
    AdmissibilityReport, C2Consistency, DiracChannelSpec, GridScheme, RadialGrid, SweepReport,
    SweepRow,
};
pub use error::{Error, Result};
pub use linalg::{BandMatrix, DenseMatrix};
pub use scalar::Scalar;
pub use solver::{EigenOptions, RhsPair, SchurSolver, SolveReport, SymmetryCheck};

pub type BlockOperatorF64 = BlockOperator<f64>;
pub type StateVectorF64 = StateVector<f64>;
pub type BandMatrixF64 = BandMatrix<f64>;
pub type RadialGridF64 = RadialGrid<f64>;
pub type DiracChannelSpecF64 = DiracChannelSpec<f64>;
pub type SweepReportF64 = SweepReport<f64>;
pub type SolveReportF64 = SolveReport<f64>;
