use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::linalg::{single_linkage, Spectrum};
use crate::Error;

/// Coarse spectral phase of a 4×4 coupling matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    AllRealSimple,
    RealWithDegeneracy,
    /// At least one complex-conjugate pair with nonzero imaginary part.
    Broken,
    /// All eigenvalues within one cluster radius of their mean.
    FullyCoalesced,
}

impl PhaseLabel {
    pub fn name(self) -> &'static str {
        match self {
            PhaseLabel::AllRealSimple => "AllRealSimple",
            PhaseLabel::RealWithDegeneracy => "RealWithDegeneracy",
            PhaseLabel::Broken => "Broken",
            PhaseLabel::FullyCoalesced => "FullyCoalesced",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PhaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        [
            PhaseLabel::AllRealSimple,
            PhaseLabel::RealWithDegeneracy,
            PhaseLabel::Broken,
            PhaseLabel::FullyCoalesced,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| Error::Input(format!("unknown phase label {s:?}")))
    }
}

/// Phase of a computed spectrum; `tol` is the relative threshold on
/// imaginary parts.
pub fn classify_phase(spec: &Spectrum, tol: f64) -> PhaseLabel {
    classify_values(&spec.eigenvalues, spec.cluster_radius, tol)
}

/// Phase of an explicit eigenvalue list. Broken takes precedence over the
/// coalescence tests.
pub fn classify_values(values: &[Complex64], radius: f64, tol: f64) -> PhaseLabel {
    if values.iter().any(|z| z.im.abs() > tol * (1.0 + z.re.abs())) {
        return PhaseLabel::Broken;
    }
    let mean = values.iter().sum::<Complex64>() / values.len() as f64;
    if values.iter().all(|z| (z - mean).norm() <= radius) {
        return PhaseLabel::FullyCoalesced;
    }
    let idx: Vec<usize> = (0..values.len()).collect();
    if single_linkage(values, &idx, radius)
        .iter()
        .any(|g| g.len() >= 2)
    {
        PhaseLabel::RealWithDegeneracy
    } else {
        PhaseLabel::AllRealSimple
    }
}
