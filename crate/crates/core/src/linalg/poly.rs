use num_complex::Complex64;

use super::{determinant, ensure_finite, ComplexMatrix};
use crate::{Error, Result};

/// Monic polynomial `x^d + c[d-1] x^(d-1) + ... + c[0]`.
///
/// Coefficients are stored lowest order first; the leading 1 is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPoly {
    coeffs: Vec<Complex64>,
}

impl MonicPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Input("monic polynomial needs degree >= 1".into()));
        }
        for &c in &coeffs {
            ensure_finite(c, "polynomial coefficient")?;
        }
        Ok(Self { coeffs })
    }

    /// Expands `prod (x - r)` over `roots`.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let mut full = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            ensure_finite(r, "root")?;
            let mut next = vec![Complex64::new(0.0, 0.0); full.len() + 1];
            for (k, &a) in full.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            full = next;
        }
        full.pop();
        Self::new(full)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Lower-order coefficients, constant term first.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// All `degree + 1` coefficients including the leading 1, constant first.
    pub fn full_coeffs(&self) -> Vec<Complex64> {
        let mut v = self.coeffs.clone();
        v.push(Complex64::new(1.0, 0.0));
        v
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative by a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(1.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |c_k| |z|^k` including the leading term; the natural scale for
    /// rounding errors in [`MonicPoly::eval`].
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(1.0, |acc, c| acc * r + c.norm())
    }

    /// Cauchy root bound `1 + max |c_k|`: every root has modulus below it.
    pub fn cauchy_bound(&self) -> f64 {
        1.0 + self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficients (constant first) of the `order`-th derivative. The
    /// result is not monic.
    pub fn derivative_coeffs(&self, order: usize) -> Vec<Complex64> {
        let mut full = self.full_coeffs();
        for _ in 0..order {
            if full.len() <= 1 {
                return vec![Complex64::new(0.0, 0.0)];
            }
            full = full
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect();
        }
        full
    }
}

/// Horner evaluation of a general (non-monic) coefficient list.
pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Maximum supported dimension for [`char_poly`].
const CHAR_POLY_MAX_DIM: usize = 16;

/// `det(x I - m)` by the Faddeev–LeVerrier trace recursion.
///
/// For even dimension this coincides with `det(m - x I)`.
pub fn char_poly(m: &ComplexMatrix) -> Result<MonicPoly> {
    let n = m.dim();
    if n > CHAR_POLY_MAX_DIM {
        return Err(Error::Input(format!(
            "char_poly supports n <= {CHAR_POLY_MAX_DIM}, got {n}"
        )));
    }
    if !m.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }

    // coeffs[k] multiplies x^k; coeffs[n] = 1.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut aux = ComplexMatrix::zeros(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m.matmul(&aux)?;
        for i in 0..n {
            next[(i, i)] += coeffs[n - k + 1];
        }
        let t = m.matmul(&next)?.trace();
        coeffs[n - k] = -t / k as f64;
        aux = next;
    }
    coeffs.pop();
    MonicPoly::new(coeffs)
}

/// Sylvester matrix of two polynomials given highest-order-first.
pub fn sylvester_matrix(p: &[Complex64], q: &[Complex64]) -> Result<ComplexMatrix> {
    if p.len() < 2 || q.len() < 2 {
        return Err(Error::Input("Sylvester matrix needs degrees >= 1".into()));
    }
    let m = p.len() - 1;
    let k = q.len() - 1;
    let size = m + k;
    let mut s = ComplexMatrix::zeros(size);
    for row in 0..k {
        for (j, &c) in p.iter().enumerate() {
            s[(row, row + j)] = c;
        }
    }
    for row in 0..m {
        for (j, &c) in q.iter().enumerate() {
            s[(k + row, row + j)] = c;
        }
    }
    Ok(s)
}

/// Discriminant of a monic quartic, `prod_{i<j} (r_i - r_j)^2`, computed as
/// the resultant of `p` and `p'` (7×7 Sylvester determinant).
pub fn discriminant_quartic(p: &MonicPoly) -> Result<Complex64> {
    if p.degree() != 4 {
        return Err(Error::Input(format!(
            "discriminant_quartic needs degree 4, got {}",
            p.degree()
        )));
    }
    let mut high: Vec<Complex64> = p.full_coeffs();
    high.reverse();
    let mut dp = p.derivative_coeffs(1);
    dp.reverse();
    let res = determinant(&sylvester_matrix(&high, &dp)?);
    // (-1)^{n(n-1)/2} = +1 for n = 4, leading coefficient 1.
    Ok(res)
}
