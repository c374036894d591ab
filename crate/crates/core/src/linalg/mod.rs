//! Dense complex linear algebra sized for a handful of qubits.
//!
//! Matrices are stored row-major. Eigen- and singular-value decompositions
//! are delegated to `nalgebra`; everything tensor-shaped (Kronecker
//! products, partial traces, partial transposes, local operator
//! application) is done directly on the index arithmetic of a
//! [`SubsystemLayout`].

pub(crate) mod density;
mod layout;
mod matrix;

pub use density::{partial_transpose, DensityMatrix};
pub use layout::{Slot, SubsystemLayout};
pub use matrix::{herm_eig, herm_eigenvalues, herm_sqrt, kron, trace_norm, ComplexMatrix, HermitianEigen};

pub use num_complex::Complex64;

/// Shorthand for a purely real complex number.
#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
