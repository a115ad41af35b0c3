use num_complex::Complex64;

use super::ModelParams;
use crate::linalg::ComplexMatrix;
use crate::Result;

/// The 4×4 coupling matrix for `params`.
pub fn build_matrix(params: &ModelParams) -> Result<ComplexMatrix> {
    params.validate()?;
    let &ModelParams {
        omega,
        gamma,
        rho,
        epsilon,
        delta,
        eta,
    } = params;
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let lower = Complex64::new(omega, -gamma);
    let upper = Complex64::new(omega, gamma);
    ComplexMatrix::from_rows(&[
        vec![lower, re(rho), re(epsilon), im(delta)],
        vec![re(-rho), lower, im(-delta), re(eta)],
        vec![re(epsilon), im(delta), upper, re(rho)],
        vec![im(-delta), re(eta), re(-rho), upper],
    ])
}

/// `((m + mᵀ)/2, (m − mᵀ)/2)`.
pub fn split_sym_antisym(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let t = m.transpose();
    let half = Complex64::new(0.5, 0.0);
    let sym = m.add(&t).expect("same dimension").scale(half);
    let anti = m.sub(&t).expect("same dimension").scale(half);
    (sym, anti)
}
