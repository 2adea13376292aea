//! Rational filters for contour-style eigensolvers and a FEAST subspace
//! iteration built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`elliptic`]: complete elliptic integral `K` and Jacobi `sn`/`cn`/`dn`.
//! - [`filters`]: Gauss, trapezoid and Zolotarev rational filters in
//!   partial-fraction form, evaluation and JSON serialization.
//! - [`analysis`]: worst-case and effective convergence factors, shape
//!   optimization and the factor table.
//! - [`linalg`]: dense/CSR complex matrices, shifted solves, the reduced
//!   generalized Hermitian eigensolver and Matrix Market I/O.
//! - [`feast`]: the subspace iteration itself plus verification harnesses.
//! - [`loadbalance`]: partitions covered by translated Zolotarev filters.

pub mod analysis;
pub mod elliptic;
mod error;
pub mod feast;
pub mod filters;
pub mod json;
pub mod linalg;
pub mod loadbalance;
mod search;

pub use error::{Error, Result};
pub use num_complex::Complex64;
