//! Error taxonomy shared by every module.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimension mismatch; names both shapes.
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    NotSquare {
        rows: usize,
        cols: usize,
    },
    /// A matrix that was required to be a fundamental symmetry is not one.
    InvalidSymmetry(String),
    /// Input outside the mathematical domain of the operation.
    Domain(String),
    /// A precondition of the call contract was violated.
    Contract(String),
    Grid(String),
    Unsupported(String),
    Singular(String),
    /// No indefiniteness witness exists (the involution is positive definite).
    NoWitness(String),
    /// Expression syntax error at a byte offset.
    Parse {
        offset: usize,
        message: String,
    },
    /// Generator index outside 1..=max, at a byte offset.
    IndexOutOfRange {
        offset: usize,
        index: usize,
        max: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape { op, left, right } => write!(
                f,
                "shape mismatch in {}: {}x{} vs {}x{}",
                op, left.0, left.1, right.0, right.1
            ),
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix is not square: {}x{}", rows, cols)
            }
            Error::InvalidSymmetry(m) => write!(f, "invalid fundamental symmetry: {}", m),
            Error::Domain(m) => write!(f, "domain error: {}", m),
            Error::Contract(m) => write!(f, "contract violation: {}", m),
            Error::Grid(m) => write!(f, "grid error: {}", m),
            Error::Unsupported(m) => write!(f, "unsupported: {}", m),
            Error::Singular(m) => write!(f, "singular matrix: {}", m),
            Error::NoWitness(m) => write!(f, "no witness: {}", m),
            Error::Parse { offset, message } => {
                write!(f, "syntax error at byte {}: {}", offset, message)
            }
            Error::IndexOutOfRange { offset, index, max } => write!(
                f,
                "generator index {} at byte {} out of range 1..={}",
                index, offset, max
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
