//! Exact Eynard–Orantin topological recursion on genus-zero spectral curves,
//! with machine verification of the associated Virasoro constraints.
//!
//! The crate is generic over the coefficient field: an exact backend
//! (rational functions over Q with an optional algebraic generator) and an
//! arbitrary-precision complex backend are provided; see [`ExactScalar`] and
//! [`BigScalar`].

pub mod error;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::{BackendKind, FieldSpec, GeneratorSpec, Scalar};

/// Exact coefficient field element (rational functions over Q, one generator).
pub type ExactScalar = scalar::Exact;
/// Arbitrary-precision complex coefficient.
pub type BigScalar = scalar::BigC;
