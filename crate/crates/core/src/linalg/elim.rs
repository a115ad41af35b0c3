use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector};

/// Row echelon form from Gaussian elimination with complete
/// (largest-modulus) pivoting, stopped as soon as the remaining block has no
/// entry above `threshold`.
struct Echelon {
    n: usize,
    /// Row-major working copy; the leading `rank` rows hold `U`.
    a: Vec<Complex64>,
    /// `col_perm[c]` is the original column stored at position `c`.
    col_perm: Vec<usize>,
    rank: usize,
}

impl Echelon {
    fn new(m: &ComplexMatrix, threshold: f64) -> Self {
        let n = m.dim();
        let mut a = m.as_slice().to_vec();
        let mut col_perm: Vec<usize> = (0..n).collect();
        let mut rank = 0;
        for k in 0..n {
            let mut best = (k, k, -1.0f64);
            for i in k..n {
                for j in k..n {
                    let v = a[i * n + j].norm();
                    if v > best.2 {
                        best = (i, j, v);
                    }
                }
            }
            let (pi, pj, pmax) = best;
            if !(pmax > threshold) {
                break;
            }
            if pi != k {
                for c in 0..n {
                    a.swap(k * n + c, pi * n + c);
                }
            }
            if pj != k {
                for r in 0..n {
                    a.swap(r * n + k, r * n + pj);
                }
                col_perm.swap(k, pj);
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                if f.norm() == 0.0 {
                    continue;
                }
                a[i * n + k] = Complex64::new(0.0, 0.0);
                for c in k + 1..n {
                    let t = a[k * n + c];
                    a[i * n + c] -= f * t;
                }
            }
            rank += 1;
        }
        Self {
            n,
            a,
            col_perm,
            rank,
        }
    }

    fn null_basis(&self) -> Vec<ComplexVector> {
        let n = self.n;
        let r = self.rank;
        (r..n)
            .map(|free| {
                let mut y = vec![Complex64::new(0.0, 0.0); n];
                y[free] = Complex64::new(1.0, 0.0);
                for i in (0..r).rev() {
                    let s: Complex64 = (i + 1..n).map(|c| self.a[i * n + c] * y[c]).sum();
                    y[i] = -s / self.a[i * n + i];
                }
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                for (c, &orig) in self.col_perm.iter().enumerate() {
                    x[orig] = y[c];
                }
                ComplexVector::new(x)
            })
            .collect()
    }
}

/// Numerical rank: the number of elimination pivots whose modulus exceeds
/// `tol * ||m||_inf`. Non-increasing in `tol`.
pub fn rank(m: &ComplexMatrix, tol: f64) -> usize {
    Echelon::new(m, tol * m.norm_inf()).rank
}

/// Orthonormal basis (`n - rank` vectors) of the numerical kernel of `m`.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> Vec<ComplexVector> {
    let basis = Echelon::new(m, tol * m.norm_inf()).null_basis();
    modified_gram_schmidt(basis)
}

fn modified_gram_schmidt(mut vs: Vec<ComplexVector>) -> Vec<ComplexVector> {
    let mut out: Vec<ComplexVector> = Vec::with_capacity(vs.len());
    for v in vs.drain(..) {
        let mut w: Vec<Complex64> = v.as_slice().to_vec();
        // two passes keep orthogonality near machine precision
        for _ in 0..2 {
            for q in &out {
                let proj: Complex64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, qi) in w.iter_mut().zip(q.iter()) {
                    *wi -= proj * qi;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            out.push(ComplexVector::new(
                w.into_iter().map(|z| z / norm).collect(),
            ));
        }
    }
    out
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    let n = m.dim();
    let mut a = m.as_slice().to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
            .unwrap();
        if a[p * n + k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = a[i * n + k] / pivot;
            for c in k + 1..n {
                let t = a[k * n + c];
                a[i * n + c] -= f * t;
            }
        }
    }
    det
}
