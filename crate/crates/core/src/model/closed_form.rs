use num_complex::Complex64;

use super::ModelParams;
use crate::linalg::MonicPoly;
use crate::{Error, Result};

/// Tolerance on `|η + ε|` for the closed-form eigenvalues.
pub const ETA_GATE_TOL: f64 = 1e-12;

/// Coefficients of `λ⁴ + pλ³ + qλ² + rλ + s = det(M − λI)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoeffs {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
    pub s: Complex64,
}

impl QuarticCoeffs {
    pub fn to_poly(&self) -> MonicPoly {
        MonicPoly::new(vec![self.s, self.r, self.q, self.p]).expect("finite coefficients")
    }

    /// `[p, q, r, s]`.
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.p, self.q, self.r, self.s]
    }

    /// Reads `[p, q, r, s]` off a monic quartic.
    pub fn from_poly(poly: &MonicPoly) -> Result<Self> {
        match poly.coeffs() {
            &[s, r, q, p] => Ok(Self { p, q, r, s }),
            other => Err(Error::Input(format!(
                "expected a quartic, got degree {}",
                other.len()
            ))),
        }
    }
}

/// Signature shared by [`char_coeffs_closed`] and the test fixtures that
/// perturb it.
pub type CoeffFormula = fn(&ModelParams) -> QuarticCoeffs;

/// Closed-form characteristic coefficients, valid for every parameter set.
pub fn char_coeffs_closed(params: &ModelParams) -> QuarticCoeffs {
    let &ModelParams {
        omega: w,
        gamma: g,
        rho,
        epsilon: e,
        delta: d,
        eta: n,
    } = params;
    let (w2, g2, r2, e2, d2, n2) = (w * w, g * g, rho * rho, e * e, d * d, n * n);
    let c = |re: f64, im: f64| Complex64::new(re, im);

    let p = -4.0 * w;
    let q = 2.0 * g2 - 2.0 * d2 - e2 - n2 + 2.0 * r2 + 6.0 * w2;
    let r_im = 4.0 * d * (n + e) * rho;
    let r_re = 2.0 * w * (n2 + e2) - 4.0 * w * (r2 + g2 - d2) - 4.0 * w2 * w;
    let s_im = -4.0 * (e + n) * d * w * rho;
    let s_re = r2 * r2 + w2 * w2 + g2 * g2 + d2 * d2 + e2 * n2 + 2.0 * e * n * r2 + 2.0 * r2 * w2
        - w2 * (e2 + n2)
        - g2 * (2.0 * d2 + n2 + e2 + 2.0 * r2 - 2.0 * w2)
        - 2.0 * d2 * (e * n - r2 + w2);

    QuarticCoeffs {
        p: c(p, 0.0),
        q: c(q, 0.0),
        r: c(r_re, r_im),
        s: c(s_re, s_im),
    }
}

/// `ω ∓ √(A ± B)` with `A = −γ²+δ²+ε²−ρ²`, `B = 2√(γ²ρ²−δ²ρ²)`; principal
/// square roots throughout. Only valid on the reduction `η = −ε`.
///
/// Returned in the order `[ω−√(A+B), ω+√(A+B), ω−√(A−B), ω+√(A−B)]`, but
/// only the multiset is meaningful: swapping the sign of `B` permutes it.
pub fn closed_form_eigenvalues(params: &ModelParams) -> Result<[Complex64; 4]> {
    params.validate()?;
    let &ModelParams {
        omega,
        gamma,
        rho,
        epsilon,
        delta,
        eta,
    } = params;
    if (eta + epsilon).abs() > ETA_GATE_TOL {
        return Err(Error::Domain(format!(
            "closed-form eigenvalues require the reduction eta = -epsilon (got eta = {eta}, epsilon = {epsilon})"
        )));
    }
    let a = -gamma * gamma + delta * delta + epsilon * epsilon - rho * rho;
    let b = 2.0 * Complex64::new(gamma * gamma * rho * rho - delta * delta * rho * rho, 0.0).sqrt();
    let w = Complex64::new(omega, 0.0);
    let outer_plus = (a + b).sqrt();
    let outer_minus = (a - b).sqrt();
    Ok([
        w - outer_plus,
        w + outer_plus,
        w - outer_minus,
        w + outer_minus,
    ])
}

/// `γ² − s²` evaluated as `(|γ| − |s|)(|γ| + |s|)` so its sign is exact.
fn radicand(gamma: f64, shift: f64) -> f64 {
    let (g, s) = (gamma.abs(), shift.abs());
    (g - s) * (g + s)
}

/// δ that pins `E₁ = E₂ = ω`: `√(γ² − ε² − 2ερ − ρ²)`.
pub fn delta_minus(gamma: f64, epsilon: f64, rho: f64) -> Result<f64> {
    let rad = radicand(gamma, epsilon + rho);
    if rad < 0.0 || !rad.is_finite() {
        return Err(Error::Domain(format!(
            "delta_minus needs gamma^2 >= (epsilon + rho)^2; radicand is {rad} \
             (gamma = {gamma}, epsilon = {epsilon}, rho = {rho})"
        )));
    }
    Ok(rad.sqrt())
}

/// δ for the complementary condition: `√(γ² − ε² + 2ερ − ρ²)`.
pub fn delta_plus(gamma: f64, epsilon: f64, rho: f64) -> Result<f64> {
    let rad = radicand(gamma, epsilon - rho);
    if rad < 0.0 || !rad.is_finite() {
        return Err(Error::Domain(format!(
            "delta_plus needs gamma^2 >= (epsilon - rho)^2; radicand is {rad} \
             (gamma = {gamma}, epsilon = {epsilon}, rho = {rho})"
        )));
    }
    Ok(rad.sqrt())
}

/// Spectrum on the δ₍₋₎ branch: `{ω, ω, ω − 2√(−ερ−ρ²), ω + 2√(−ερ−ρ²)}`.
pub fn branch_spectrum_minus(
    omega: f64,
    gamma: f64,
    rho: f64,
    epsilon: f64,
) -> Result<[Complex64; 4]> {
    delta_minus(gamma, epsilon, rho)?;
    let w = Complex64::new(omega, 0.0);
    let split = 2.0 * Complex64::new(-epsilon * rho - rho * rho, 0.0).sqrt();
    Ok([w, w, w - split, w + split])
}

/// Spectrum on the δ₍₊₎ branch:
/// `{ω ± √(2ρ(ε−ρ) + 2ρ|ε−ρ|), ω ± √(2ρ(ε−ρ) − 2ρ|ε−ρ|)}`.
pub fn branch_spectrum_plus(
    omega: f64,
    gamma: f64,
    rho: f64,
    epsilon: f64,
) -> Result<[Complex64; 4]> {
    delta_plus(gamma, epsilon, rho)?;
    let w = Complex64::new(omega, 0.0);
    let lin = 2.0 * rho * (epsilon - rho);
    let abs = 2.0 * rho * (epsilon - rho).abs();
    let first = Complex64::new(lin + abs, 0.0).sqrt();
    let second = Complex64::new(lin - abs, 0.0).sqrt();
    Ok([w - first, w + first, w - second, w + second])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_multiset(got: &[Complex64], want: &[Complex64], tol: f64) {
        let mut used = vec![false; got.len()];
        for w in want {
            let hit = got
                .iter()
                .enumerate()
                .position(|(i, g)| !used[i] && (g - w).norm() <= tol)
                .unwrap_or_else(|| panic!("{w} not found in {got:?}"));
            used[hit] = true;
        }
    }

    #[test]
    fn uncoupled_coefficients() {
        // ((λ−2)² + 1)² = λ⁴ − 8λ³ + 26λ² − 40λ + 25
        let k = char_coeffs_closed(&ModelParams::new(2.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap());
        assert_eq!(
            k.as_array(),
            [c(-8.0, 0.0), c(26.0, 0.0), c(-40.0, 0.0), c(25.0, 0.0)]
        );
    }

    #[test]
    fn reduction_gives_real_coefficients() {
        let k = char_coeffs_closed(&ModelParams::new(1.3, 0.7, 1.1, -0.4, 1.9, 0.4).unwrap());
        assert!(k.as_array().iter().all(|z| z.im.abs() <= 1e-12));
        assert_eq!(k.p, c(-5.2, 0.0));
    }

    #[test]
    fn closed_form_on_delta_plus_branch() {
        let p = ModelParams::new(2.0, 1.0, 0.5, 1.0, 0.75f64.sqrt(), -1.0).unwrap();
        let e = closed_form_eigenvalues(&p).unwrap();
        assert_multiset(
            &e,
            &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            1e-7,
        );
    }

    #[test]
    fn closed_form_uncoupled() {
        let p = ModelParams::new(2.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let e = closed_form_eigenvalues(&p).unwrap();
        assert_multiset(
            &e,
            &[c(2.0, -1.0), c(2.0, -1.0), c(2.0, 1.0), c(2.0, 1.0)],
            1e-12,
        );
    }

    #[test]
    fn closed_form_on_delta_minus_branch() {
        let p = ModelParams::new(2.0, 2.0, 1.0, -2.0, 3f64.sqrt(), 2.0).unwrap();
        let e = closed_form_eigenvalues(&p).unwrap();
        assert_multiset(
            &e,
            &[c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)],
            1e-7,
        );
    }

    #[test]
    fn closed_form_requires_reduction() {
        let p = ModelParams::new(2.0, 1.0, 0.5, 1.0, 0.5, 1.0).unwrap();
        match closed_form_eigenvalues(&p) {
            Err(Error::Domain(msg)) => assert!(msg.contains("eta = -epsilon")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn delta_constraints() {
        assert!((delta_minus(2.0, -2.0, 1.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(delta_minus(0.7, 0.0, 0.7).unwrap(), 0.0);
        assert!(matches!(delta_minus(0.0, 1.0, 1.0), Err(Error::Domain(_))));

        assert!((delta_plus(1.0, 1.0, 0.5).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
        assert_eq!(delta_plus(1.0, 0.5, 0.5).unwrap(), 1.0);
        assert!(matches!(delta_plus(0.1, 2.0, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn minus_branch_spectra() {
        let s = branch_spectrum_minus(2.0, 2.0, 1.0, -2.0).unwrap();
        assert_multiset(
            &s,
            &[c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)],
            1e-14,
        );
        let s = branch_spectrum_minus(2.0, 1.0, 1.0, -1.0).unwrap();
        assert_multiset(&s, &[c(2.0, 0.0); 4], 0.0);
        let s = branch_spectrum_minus(2.0, 2.0, 1.0, 0.0).unwrap();
        assert_multiset(
            &s,
            &[c(2.0, 0.0), c(2.0, 0.0), c(2.0, -2.0), c(2.0, 2.0)],
            1e-14,
        );
    }

    #[test]
    fn plus_branch_spectra() {
        let s = branch_spectrum_plus(2.0, 1.0, 0.5, 1.0).unwrap();
        assert_multiset(
            &s,
            &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            1e-14,
        );
        let s = branch_spectrum_plus(2.0, 1.0, 0.5, 0.5).unwrap();
        assert_multiset(&s, &[c(2.0, 0.0); 4], 0.0);
        let s = branch_spectrum_plus(2.0, 1.0, 0.5, 0.0).unwrap();
        assert_multiset(
            &s,
            &[c(2.0, 0.0), c(2.0, 0.0), c(2.0, -1.0), c(2.0, 1.0)],
            1e-14,
        );
    }

    #[test]
    fn branch_spectra_propagate_domain_errors() {
        assert!(branch_spectrum_minus(2.0, 0.0, 1.0, 1.0).is_err());
        assert!(branch_spectrum_plus(2.0, 0.1, 0.5, 2.0).is_err());
    }
}
