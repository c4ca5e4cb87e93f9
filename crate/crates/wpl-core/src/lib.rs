//! Exact computations on weighted projective lines.
//!
//! The crate is `no_std` with `alloc`. Scalars are arbitrary precision
//! rationals; integer matrices use checked `i64` arithmetic.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod homcat;
pub mod k0;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod rep;
pub mod tilting;
pub mod tubular;
pub mod concrete;

pub use error::{Error, Result};
pub use lattice::{LVector, Monomial, MonomialBasis, WeightDescriptor};
pub use linalg::{IntMatrix, QMatrix, Q};
pub use poly::IntPoly;
