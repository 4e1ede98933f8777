//! Numerical analysis of lightlike submanifolds of indefinite almost contact
//! metric manifolds.
//!
//! The crate evaluates parametrized submanifolds given as coordinate
//! expressions, builds quasi-orthonormal null frames along them, computes the
//! Gauss-Weingarten data with forward-mode derivatives and certifies the
//! QGCR, ascreen and co-screen classifications together with distribution
//! properties.

pub mod ambient;
pub mod analysis;
pub mod classify;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod report;
pub mod reproduce;
pub mod scalar;
pub mod scenario;
pub mod submanifold;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
