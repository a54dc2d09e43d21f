//! High-order regularization of singular sources given as weighted sums of
//! Dirac deltas, and a Chebyshev collocation harness that measures how the
//! regularization affects spectral solutions of advection and Burgers
//! equations.
//!
//! * [`kernel`] builds the polynomial delta approximations `P^{m,k}`.
//! * [`regularizer`] approximates `S * δ_ε` by Newton-Cotes quadrature over
//!   particles and picks the optimal `ε`.
//! * [`spectral`] holds the collocation machinery.
//! * [`experiments`] defines the model problems, error regions and
//!   convergence studies.

pub mod error;
pub mod experiments;
pub mod kernel;
pub mod quadrature;
mod rational;
pub mod regularizer;
pub mod spectral;

pub use error::{Error, Result};
pub use kernel::{evaluate_delta, weighted_moment, DeltaKernel, KernelResiduals, KernelSpec};
pub use quadrature::QuadratureRule;
pub use regularizer::{
    convolve_oracle, optimal_epsilon, validate_exactness_constraint, ParticleField, QuadratureMode,
    RegularizedSource,
};
pub use spectral::{Interval, SpectralOperator};
