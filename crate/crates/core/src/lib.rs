//! Spectral analysis of a coupled pair of Swanson oscillators.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: small dense complex matrices, characteristic polynomials,
//!   Aberth–Ehrlich root finding, discriminants, numerical rank and a
//!   characteristic-polynomial eigensolver.
//! * [`model`]: the 4×4 coupling matrix, its closed-form quartic
//!   coefficients and eigenvalues, the two δ constraints and the branch
//!   spectra they produce, plus phase classification.
//! * [`ep`]: transition and exceptional-point detection along one-parameter
//!   matrix families, Jordan-chain probing and branch tracking.
//! * [`sweep`] and [`verify`]: sweep orchestration, CSV and gnuplot output,
//!   and the randomized cross-validation suite used by the CLI.
//!
//! Grid evaluations run on rayon when the `parallel` feature is enabled
//! (default); see [`par::Execution`].

// `!(x < y)` is used so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ep;
pub mod error;
pub mod linalg;
pub mod model;
pub mod par;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
