//! Exact computation of weight-graded relative Gel'fand-Fuks cohomology of
//! formal Hamiltonian vector fields on the plane.
//!
//! The Lie algebra of formal Hamiltonian vector fields on ℝ² is identified
//! with formal power series in x, y modulo constants under the Poisson
//! bracket, graded by the symmetric powers SᵏH of H = ℝ². This crate builds,
//! for a fixed weight w, the finite-dimensional relative Chevalley-Eilenberg
//! complex of Sp(2,ℝ)-invariant cochains (relative to sp(2) = S²H), computes
//! its cohomology with exact rational arithmetic, constructs the
//! distinguished cocycles ω, γ₁, p₁, η, and certifies the factorizations
//! p₁ = γ₁∧ω and GKF = η∧ω. A constant-term product formula for the Euler
//! characteristic generating function provides an independent cross-check of
//! the chain-level dimensions.
//!
//! Everything is exact: matrices are sparse rational, ranks come from
//! fraction-free elimination over arbitrary-precision integers, and every
//! reported equality is an equality of integers or reduced fractions.

pub mod characteristic;
pub mod complex;
pub mod genfun;
pub mod invariants;
pub mod linalg;
pub mod poisson;
pub mod verify;

pub use complex::{Variant, WeightSlice};
pub use linalg::{Rat, RatMatrix};

use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Error)]
pub enum GfcError {
    /// A wedge-monomial space exceeded the configured dimension budget.
    #[error("budget exceeded building {what}: size {size} > budget {budget}")]
    BudgetExceeded {
        what: String,
        size: usize,
        budget: usize,
    },
    /// Bracket of total degree < 2 requested.
    #[error("Poisson bracket underflow: degrees {k} and {l} with k+l < 2")]
    DegreeUnderflow { k: usize, l: usize },
    /// Incompatible dimensions in a linear-algebra call.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// An internal consistency check failed; indicates a bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    /// Unsupported parameter (e.g. n ≥ 2 where only n = 1 is implemented).
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, GfcError>;
