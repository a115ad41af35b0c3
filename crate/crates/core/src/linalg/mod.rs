//! Dense complex linear algebra for small matrices.

mod eig;
mod elim;
mod matrix;
mod poly;
mod roots;

pub(crate) use eig::single_linkage;
pub use eig::{cluster_radius, eig, Cluster, EigOptions, Spectrum};
pub use elim::{determinant, null_space, rank};
pub use matrix::{ComplexMatrix, ComplexVector};
pub use poly::{char_poly, discriminant_quartic, sylvester_matrix, MonicPoly};
pub use roots::{poly_roots, DEFAULT_MAX_ITER};

/// Scalar type used throughout the crate.
pub type ComplexScalar = num_complex::Complex64;

pub(crate) fn ensure_finite(z: ComplexScalar, what: &str) -> crate::Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::Input(format!("{what} is not finite: {z}")))
    }
}
