//! Gaussian measures on the 3-dimensional Heisenberg group: closed-form
//! Fourier transforms at the Schrödinger and one-dimensional
//! representations, exact convolution arithmetic with a complete
//! Gaussianity classifier, and Monte Carlo / quadrature oracles that verify
//! every closed form.
//!
//! Entry points:
//! * [`params`]: parameter validation, rank factorization, semigroup
//!   classification, support geometry;
//! * [`schrodinger`]: the kernel / shift-multiply forms of `μ̂(π_{±λ})`,
//!   `χ`-transforms, generator coefficients;
//! * [`euclid`]: the joint characteristic function of Wiener functionals,
//!   full and partial Euclidean transforms, the kernel route through them;
//! * [`conv`]: convolution parameters, transform of a convolution, the
//!   seven-case Gaussianity decision and its support-level form;
//! * [`mc`]: path and series simulation of the underlying functionals with
//!   reproducible parallel streams, empirical characteristic functions;
//! * [`quad`]: trapezoid application and composition of the operators;
//! * [`verify`]: the oracle suites wired into one runner.

pub mod cli;
pub mod conv;
pub mod corpus;
pub mod error;
pub mod euclid;
pub mod io;
pub mod mc;
pub mod params;
pub mod quad;
pub mod schrodinger;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use params::{validate_params, GaussianParams};
