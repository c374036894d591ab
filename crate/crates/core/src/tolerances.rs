//! Numerical tolerances shared by every module.
//!
//! Tests and runtime validation read from this table only, so calibration
//! happens in one place.

/// Maximum `|m - m†|` entry for a matrix to count as Hermitian.
pub const HERMITIAN: f64 = 1e-10;

/// Allowed deviation of a density-matrix trace from 1.
pub const TRACE: f64 = 1e-10;

/// Allowed deviation of a state-vector norm from 1.
pub const NORM: f64 = 1e-10;

/// Eigenvalues down to `-PSD_CLAMP` are treated as round-off and clamped to 0.
pub const PSD_CLAMP: f64 = 1e-9;

/// Entrywise agreement expected of `sqrt(m)^2` against `m`.
pub const SQRT_RESIDUAL: f64 = 1e-9;

/// Default `|f_sim - f_closed|` threshold used by `simulate --verify`.
pub const VERIFY: f64 = 1e-8;

/// Environment variable overriding [`VERIFY`].
pub const VERIFY_ENV: &str = "TELECLONING_VERIFY_TOL";

/// Best teleportation fidelity achievable without entanglement.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Offset used for "just above the classical bound".
pub const CLASSICAL_EPSILON: f64 = 1e-6;

/// Width at which MAN boundary bisection stops.
pub const BISECTION: f64 = 1e-12;

/// Slack allowed on closed-form radicands before they count as negative.
pub const RADICAND: f64 = 1e-12;

/// Rounding slack when a minimal λ lands just above 1 (e.g. `f_l = 5/6`).
pub const LAMBDA_SLACK: f64 = 1e-12;
