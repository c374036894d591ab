//! Sequential telecloning with unsharp Bell measurements.
//!
//! A sender shares the optimal 1→M telecloning resource with M receivers.
//! Instead of a projective Bell measurement she performs an unsharp one of
//! sharpness λ, so that if receivers decline to finish a round the residual
//! state can be reused. The crate simulates the resulting channel exactly on
//! density matrices and provides the closed-form fidelity recursions,
//! maximal attempting numbers, and entanglement diagnostics that describe it.

pub mod analysis;
pub mod entanglement;
pub mod error;
pub mod figures;
pub mod linalg;
pub mod measurement;
pub mod protocol;
pub mod report;
pub mod scenario;
pub mod states;
pub mod tables;
pub mod tolerances;

pub use error::{Error, Result};
