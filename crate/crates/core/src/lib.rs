//! Integrable heavy-top and elastic-curve dynamics on the groups E3, SO(4)
//! and SO(1,3).
//!
//! The state is a point `(h, H)` of the dual Lie algebra; the Hamiltonian is
//! `½ Σ H_i²/c_i + a·h` and the curvature `k ∈ {0, 1, -1}` selects the group.
//!
//! - [`lie`]: basis and bracket table, vector field, conserved quantities,
//!   frame reconstruction and adaptive integration.
//! - [`reduction`]: the rescaled Kowalewski coordinates and the polynomial
//!   relations that cut out the invariant variety.
//! - [`elliptic`]: biquadratic forms of a quartic, Euler's solutions and
//!   Weil's addition maps.
//! - [`quadrature`]: separating variables and the quintic quadrature.
//! - [`painleve`]: Laurent-series analysis in complex time and the
//!   meromorphic classification.
//! - [`cli`]: configuration, presets and the report-producing commands used
//!   by the `kowalewski` binary.

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod lie;
pub mod painleve;
pub mod quadrature;
pub mod reduction;

pub use error::{Error, Result};
pub use num_complex::Complex64;
