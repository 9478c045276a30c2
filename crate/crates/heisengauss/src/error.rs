//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("diffusion matrix is not symmetric: |B[{i}][{j}] - B[{j}][{i}]| = {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("diffusion matrix is not positive semidefinite: eigenvalue {eigenvalue:e} < -{tol:e}")]
    NotPsd { eigenvalue: f64, tol: f64 },

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("representation parameter lambda must be a positive finite real, got {0}")]
    InvalidLambda(f64),

    #[error("closed form requires an absolutely continuous measure (delta > 0)")]
    NotAbsolutelyContinuous,

    #[error("quadrature truncation tail bound {bound:e} exceeds the 1e-8 budget")]
    TruncationTooTight { bound: f64 },

    #[error("grid too coarse: need >= 8 points per kernel standard deviation {sigma:e}, step is {step:e}")]
    GridTooCoarse { sigma: f64, step: f64 },

    #[error("simulation budget exceeded: {requested} path-steps > budget {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    #[error("neither factor is supported on the center of the group")]
    NeitherCentral,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
