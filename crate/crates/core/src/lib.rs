//! Sparse operator algebras of infinite qubit systems.
//!
//! The input side is the algebra of operator strings (finitely many
//! non-identity 2×2 factors) acting on states that deviate from a reference
//! product family at finitely many sites. The output side is the convolution
//! algebra of the action groupoid of finitely supported ℤ₂ flips, together
//! with its group-algebra subalgebra and its representation on sections of
//! the trivial Hilbert bundle over flip patterns.
//!
//! Every construction can be cross-checked against [`oracle`], which builds
//! dense Kronecker-product matrices on a finite truncation of the sites.

pub mod bundle;
pub mod car;
pub mod cli;
pub mod convolution;
pub mod equivalence;
mod error;
pub mod flips;
pub mod groupoid;
pub mod io;
pub mod oracle;
pub mod report;
pub mod sampling;
pub mod site;
pub mod strings;
pub mod theta;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;

/// Coefficients with modulus below this are dropped from every sparse map.
pub const PRUNE_TOL: f64 = 1e-14;

/// Reference-family vectors must have unit norm to this tolerance.
pub const FAMILY_NORM_TOL: f64 = 1e-12;

/// Looser normalization tolerance accepted by single-vector helpers.
pub const VECTOR_NORM_TOL: f64 = 1e-9;
