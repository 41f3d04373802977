//! Riemannian geometry of positive-definite and density matrices.
//!
//! - [`matkern`]: Hermitian kernel (spectral calculus, Fréchet derivatives, validation).
//! - [`metrics`]: monotone metrics from operator-monotone functions, including the WYD family.
//! - [`divergences`]: geometric mean, quasi-entropies, generalized relative entropies.
//! - [`geodesics`]: closed-form Bures and Wigner–Yanase geodesics, the RLD upper bound,
//!   curve lengths and the RLD geodesic-equation residual.
//! - [`verify`]: random instances, random channels and the property suites.

pub mod divergences;
pub mod error;
pub mod geodesics;
pub mod matkern;
pub mod metrics;
pub mod numfmt;
pub mod verify;

pub use error::{Error, Result};
pub use matkern::{HermitianMatrix, MatrixJson, ScalarFunctionSpec, SpectralDecomposition, StateMatrix};
pub use metrics::MetricKind;
