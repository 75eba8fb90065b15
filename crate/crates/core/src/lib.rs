//! Exact and floating-point tools for quadratic Lyapunov functions of
//! equal-neighbor consensus dynamics.

pub mod consensus;
pub mod error;
pub mod field;
pub mod graph;
pub mod interchange;
pub mod lyapunov;
pub mod matrix;
pub mod perm;
pub mod psd;
pub mod random;
pub mod rat;
pub mod search;

pub use error::{Error, Result};
pub use field::{Field, Mode, Scalar};
pub use graph::Graph;
pub use matrix::{Mat, Vector};
pub use perm::Permutation;
pub use psd::Psd;
pub use rat::Rat;
