//! Signatures, C-patterns, window bases and weights.

pub mod basis;
pub mod io;
pub mod pattern;
pub mod signature;
pub mod weight;

use thiserror::Error;

pub use basis::enumerate_basis;
pub use pattern::{CPattern, Violation};
pub use signature::{Param, Signature, XiParam};
pub use weight::{weight, WeightValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("index ({i}, {r}) is outside the pattern shape")]
    OutOfShape { i: i64, r: usize },
    #[error("malformed pattern: {0}")]
    Malformed(String),
}
