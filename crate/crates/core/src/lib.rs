//! Quaternion linear algebra built on row and column determinants.
//!
//! The crate provides quaternion matrices over an exact rational or `f64`
//! backend, row/column determinants, determinantal representations of
//! inverses and (weighted) Moore-Penrose inverses, Cramer-rule solvers for
//! the restricted equations `AXB = D`, `AX = D` and `XB = D`, and an
//! independent numerical oracle based on the complex adjoint representation.

pub mod commands;
pub mod det;
pub mod error;
pub mod geninv;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod quaternion;
pub mod roots;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use matrix::{enumerate_index_sets, IndexSet, QMatrix};
pub use quaternion::Quaternion;
pub use scalar::{Rational, Scalar};
