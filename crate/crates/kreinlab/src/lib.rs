//! Krein-space linear algebra at desk scale: indefinite inner products and
//! dagger adjoints, matrix-algebra involutions, truncated eta-CCR/eta-CAR and
//! FP-ghost representations, pseudo-Cuntz representations with a symbolic
//! word-rewriting oracle, and a small family of worked indefinite-metric
//! models. Every algebraic relation is checked numerically and reported with
//! named residuals.
//!
//! The numeric core is generic over the real scalar via [`Scalar`] (`f32` or
//! `f64`); concrete `f64` aliases live at the crate root and are what the CLI
//! uses.

use std::fmt;

use num_traits::{Float, FloatConst};

pub mod cli;
pub mod cmatrix;
pub mod cuntz;
pub mod error;
pub mod fock;
pub mod involutions;
pub mod krein;
pub mod models;
pub mod report;
pub mod words;

pub use cmatrix::CMatrix;
pub use error::{Error, Result};
pub use krein::{KreinTriplet, Representation};
pub use report::CheckReport;

/// Real scalar the whole crate is generic over.
pub trait Scalar: Float + FloatConst + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Lossy conversion from `f64`, for tolerances and literal constants.
    fn approx(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f32 {
    fn approx(x: f64) -> f32 {
        x as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn approx(x: f64) -> f64 {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
}

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type CMatrix32 = CMatrix<f32>;
pub type KreinTriplet64 = KreinTriplet<f64>;
