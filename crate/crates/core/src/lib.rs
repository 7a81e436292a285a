//! Vector-valued Maclaurin and Newton inequalities.
//!
//! Wedge volumes `|v_{i_1} ^ ... ^ v_{i_k}|` of a family of vectors play the
//! role that products play in the classical Maclaurin chain. This crate
//! evaluates the resulting symmetric power means for every exponent in
//! `[0, inf]`, checks the known inequalities between them with explicit
//! margins, computes intrinsic volumes of zonotopes and searches randomly
//! for violations of the open cases.

pub mod checks;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod search;
pub mod subsets;
pub mod summation;
pub mod sums;
pub mod zonotope;

pub use error::{Error, Result};
pub use linalg::{GramMatrix, VectorFamily};
pub use subsets::SubsetIndex;
pub use sums::{PowerExponent, SymmetricSumValue, WedgeSums};
