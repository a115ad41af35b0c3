//! The coupled two-mode Swanson oscillator.
//!
//! The model is defined by the 4×4 coupling matrix
//!
//! ```text
//! | ω−iγ   ρ     ε    iδ  |
//! | −ρ    ω−iγ  −iδ   η   |
//! | ε     iδ    ω+iγ  ρ   |
//! | −iδ   η     −ρ    ω+iγ|
//! ```
//!
//! Its characteristic quartic has closed-form coefficients for all
//! parameters, and closed-form roots on the reduction `η = −ε`. Two
//! constraints on δ pin a pair of eigenvalues to ω; along each of them the
//! remaining pair passes through ω at an exceptional point.

mod closed_form;
mod family;
mod matrix;
mod params;
mod phase;

pub use closed_form::{
    branch_spectrum_minus, branch_spectrum_plus, char_coeffs_closed, closed_form_eigenvalues,
    delta_minus, delta_plus, CoeffFormula, QuarticCoeffs, ETA_GATE_TOL,
};
pub use family::{DeltaMode, EtaMode, SwansonFamily, SweepParam};
pub use matrix::{build_matrix, split_sym_antisym};
pub use params::ModelParams;
pub use phase::{classify_phase, classify_values, PhaseLabel};
