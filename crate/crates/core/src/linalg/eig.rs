use num_complex::Complex64;

use super::poly::horner;
use super::{char_poly, null_space, poly_roots, rank, ComplexMatrix, ComplexVector, MonicPoly};
use crate::Result;

/// Tolerances for [`eig`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigOptions {
    /// Residual tolerance handed to [`poly_roots`]; also sets the
    /// clustering radius.
    pub root_tol: f64,
    /// Relative pivot threshold for ranks and eigenvectors.
    pub rank_tol: f64,
    pub max_iter: usize,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            root_tol: 1e-12,
            rank_tol: 1e-8,
            max_iter: super::DEFAULT_MAX_ITER,
        }
    }
}

/// Backward-error level (relative to `sum |c_k| |z|^k`) below which a
/// cluster is indistinguishable from an exactly multiple root.
const SNAP_BACKWARD_ERROR: f64 = 256.0 * f64::EPSILON;

/// A group of eigenvalues closer than the clustering radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Best estimate of the common eigenvalue: the root of the
    /// `(k-1)`-th derivative of the characteristic polynomial nearest the
    /// member mean.
    pub center: Complex64,
    /// Indices into [`Spectrum::eigenvalues`].
    pub members: Vec<usize>,
    pub algebraic: usize,
    /// `n - rank(m - center I)`, clamped to `[1, algebraic]`.
    pub geometric: usize,
    pub eigenvectors: Vec<ComplexVector>,
}

/// Eigenvalues of a small matrix with multiplicity structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Raw polished roots of the characteristic polynomial.
    pub roots: Vec<Complex64>,
    /// Roots with numerically multiple groups collapsed onto their center;
    /// same order as `roots`.
    pub eigenvalues: Vec<Complex64>,
    /// `||m v - lambda v||` per eigenvalue using its cluster's eigenvectors.
    pub residuals: Vec<f64>,
    pub clusters: Vec<Cluster>,
    pub char_poly: MonicPoly,
    pub cluster_radius: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_abs_im(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    /// The cluster containing eigenvalue `i`.
    pub fn cluster_of(&self, i: usize) -> &Cluster {
        self.clusters
            .iter()
            .find(|c| c.members.contains(&i))
            .expect("every eigenvalue belongs to a cluster")
    }

    /// Cluster whose center is nearest to `z`.
    pub fn nearest_cluster(&self, z: Complex64) -> &Cluster {
        self.clusters
            .iter()
            .min_by(|a, b| (a.center - z).norm().total_cmp(&(b.center - z).norm()))
            .expect("spectrum has at least one cluster")
    }
}

/// Radius within which two roots are counted as one eigenvalue:
/// `max(1e-6, tol^(1/4)) * (1 + R)` with `R` the Cauchy bound.
pub fn cluster_radius(p: &MonicPoly, tol: f64) -> f64 {
    1e-6f64.max(tol.powf(0.25)) * (1.0 + p.cauchy_bound())
}

/// Eigen-decomposition through the characteristic polynomial.
pub fn eig(m: &ComplexMatrix, opts: &EigOptions) -> Result<Spectrum> {
    let p = char_poly(m)?;
    let roots = poly_roots(&p, opts.root_tol, opts.max_iter)?;
    let radius = cluster_radius(&p, opts.root_tol);
    let n = roots.len();

    let groups = single_linkage(&roots, &(0..n).collect::<Vec<_>>(), radius);

    let mut eigenvalues = roots.clone();
    let mut clusters = Vec::with_capacity(groups.len());
    for members in groups {
        let center = refine_center(&p, &roots, &members, radius);
        snap(&p, &roots, &members, radius, &mut eigenvalues);

        let shifted = m.shifted(center);
        let k = members.len();
        let geometric = (n - rank(&shifted, opts.rank_tol)).clamp(1, k);
        let eigenvectors = eigenvectors_at(&shifted, opts.rank_tol);
        clusters.push(Cluster {
            center,
            members,
            algebraic: k,
            geometric,
            eigenvectors,
        });
    }

    let mut residuals = vec![0.0; n];
    for c in &clusters {
        for &i in &c.members {
            residuals[i] = c
                .eigenvectors
                .iter()
                .map(|v| eigen_residual(m, eigenvalues[i], v))
                .fold(f64::INFINITY, f64::min);
        }
    }

    Ok(Spectrum {
        roots,
        eigenvalues,
        residuals,
        clusters,
        char_poly: p,
        cluster_radius: radius,
    })
}

fn eigen_residual(m: &ComplexMatrix, lambda: Complex64, v: &ComplexVector) -> f64 {
    let mv = m.mul_vec(v).expect("dimensions agree");
    mv.iter()
        .zip(v.iter())
        .map(|(a, b)| (a - lambda * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Kernel of `shifted`, loosening the threshold when the estimate of the
/// eigenvalue is too coarse for the requested one.
fn eigenvectors_at(shifted: &ComplexMatrix, rank_tol: f64) -> Vec<ComplexVector> {
    let mut tol = rank_tol;
    loop {
        let ns = null_space(shifted, tol);
        if !ns.is_empty() || tol >= 1e-2 {
            return ns;
        }
        tol *= 10.0;
    }
}

/// Connected components of the graph joining points closer than `radius`,
/// ordered by smallest member index.
pub(crate) fn single_linkage(points: &[Complex64], idx: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut label: Vec<usize> = (0..idx.len()).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if (points[idx[a]] - points[idx[b]]).norm() <= radius {
                let (ra, rb) = (find(&mut label, a), find(&mut label, b));
                if ra != rb {
                    label[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots_seen: Vec<usize> = Vec::new();
    for (a, &i) in idx.iter().enumerate() {
        let r = find(&mut label, a);
        match roots_seen.iter().position(|&x| x == r) {
            Some(g) => groups[g].push(i),
            None => {
                roots_seen.push(r);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

fn mean(points: &[Complex64], members: &[usize]) -> Complex64 {
    members.iter().map(|&i| points[i]).sum::<Complex64>() / members.len() as f64
}

/// A `k`-fold root of `p` is a simple root of `p^(k-1)`, which can be
/// located to full precision by Newton's method.
fn refine_center(p: &MonicPoly, roots: &[Complex64], members: &[usize], radius: f64) -> Complex64 {
    let start = mean(roots, members);
    let k = members.len();
    if k == 1 {
        return start;
    }
    let d = p.derivative_coeffs(k - 1);
    let mut z = start;
    let mut best = horner(&d, z).0.norm();
    for _ in 0..20 {
        let (v, dv) = horner(&d, z);
        if v.norm() == 0.0 || dv.norm() == 0.0 {
            break;
        }
        let next = z - v / dv;
        let val = horner(&d, next).0.norm();
        if !(val < best) || (next - start).norm() > radius {
            break;
        }
        z = next;
        best = val;
    }
    z
}

/// Collapses members onto their refined center when their spread is within
/// the perturbation an exactly multiple root would suffer from rounding in
/// the coefficients. Groups that are genuinely split are searched for
/// tighter sub-groups.
fn snap(p: &MonicPoly, roots: &[Complex64], members: &[usize], radius: f64, out: &mut [Complex64]) {
    let k = members.len();
    if k < 2 {
        return;
    }
    let center = refine_center(p, roots, members, radius);
    let taylor = horner(&p.derivative_coeffs(k), center).0.norm() / factorial(k);
    if taylor > 0.0 {
        let noise = (SNAP_BACKWARD_ERROR * p.abs_eval(center) / taylor).powf(1.0 / k as f64);
        if members.iter().all(|&i| (roots[i] - center).norm() <= noise) {
            for &i in members {
                out[i] = center;
            }
            return;
        }
    }
    let mut r = radius;
    while r > 1e-14 {
        r *= 0.1;
        let parts = single_linkage(roots, members, r);
        if parts.len() > 1 {
            for part in parts {
                snap(p, roots, &part, r, out);
            }
            return;
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}
