//! Heinz means, matrix monotone functions, and numerical checkers for the
//! singular value and Loewner-order inequalities relating them.
//!
//! All matrices are small, dense and complex; every decomposition is
//! implemented in-crate with Jacobi methods so that results are reproducible
//! bit for bit across platforms.

pub mod campaign;
pub mod error;
pub mod inequality;
pub mod linalg;
pub mod means;
pub mod monotone;
pub mod quadrature;
pub mod verdict;

pub use error::{HeinzError, Result};
