//! Spectral transitions along one-parameter matrix families.
//!
//! Two detectors run on a uniform grid and are then refined:
//!
//! * real↔complex boundaries, where the largest imaginary part crosses the
//!   tolerance (bisection);
//! * coalescences, where the largest pairwise eigenvalue gap has a local
//!   minimum (golden section).
//!
//! The quartic discriminant is not used to find degeneracies: on the δ
//! constraint branches two eigenvalues sit at ω identically, so it vanishes
//! along the whole branch. The largest gap only vanishes where all four
//! eigenvalues meet.

use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;

use crate::linalg::{
    char_poly, cluster_radius, eig, poly_roots, rank, ComplexMatrix, EigOptions, Spectrum,
};
use crate::par::{try_map_indexed, Execution};
use crate::{Error, Result};

/// A matrix-valued function of one real parameter.
pub trait MatrixFamily: Sync {
    fn evaluate(&self, t: f64) -> Result<ComplexMatrix>;

    fn parameter_name(&self) -> &str {
        "t"
    }

    /// Fails when part of `[lo, hi]` is outside the family's domain.
    fn validate_range(&self, _lo: f64, _hi: f64) -> Result<()> {
        Ok(())
    }
}

/// Adapts a closure to [`MatrixFamily`].
pub struct FnFamily<F> {
    name: String,
    f: F,
}

impl<F> FnFamily<F>
where
    F: Fn(f64) -> Result<ComplexMatrix> + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F> MatrixFamily for FnFamily<F>
where
    F: Fn(f64) -> Result<ComplexMatrix> + Sync,
{
    fn evaluate(&self, t: f64) -> Result<ComplexMatrix> {
        (self.f)(t)
    }

    fn parameter_name(&self) -> &str {
        &self.name
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpKind {
    RealComplexTransition,
    Degeneracy,
    ExceptionalPoint,
}

impl fmt::Display for EpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpKind::RealComplexTransition => "RealComplexTransition",
            EpKind::Degeneracy => "Degeneracy",
            EpKind::ExceptionalPoint => "ExceptionalPoint",
        })
    }
}

/// A refined transition point.
#[derive(Debug, Clone, PartialEq)]
pub struct EpCandidate {
    pub t_star: f64,
    /// Common eigenvalue of the coalescing cluster.
    pub cluster_value: Complex64,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    /// `None` when the candidate was not probed (only full coalescences are).
    pub jordan_chain_length: Option<usize>,
    /// Largest pairwise eigenvalue gap at `t_star`.
    pub max_gap_at_t: f64,
    pub kind: EpKind,
}

/// Gap statistics of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalescenceMetrics {
    pub min_gap: f64,
    /// All pairwise `|λ_i − λ_j|`, ascending.
    pub gaps: Vec<f64>,
    pub max_abs_im: f64,
}

impl CoalescenceMetrics {
    pub fn max_gap(&self) -> f64 {
        self.gaps.last().copied().unwrap_or(0.0)
    }
}

/// Gap statistics of the (resolved) eigenvalues of `spec`.
pub fn coalescence_metrics(spec: &Spectrum) -> CoalescenceMetrics {
    coalescence_metrics_of(&spec.eigenvalues)
}

pub fn coalescence_metrics_of(values: &[Complex64]) -> CoalescenceMetrics {
    let mut gaps: Vec<f64> = values
        .iter()
        .tuple_combinations()
        .map(|(a, b)| (a - b).norm())
        .collect();
    gaps.sort_by(f64::total_cmp);
    CoalescenceMetrics {
        min_gap: gaps.first().copied().unwrap_or(0.0),
        gaps,
        max_abs_im: values.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
    }
}

/// `n − rank(m − λI, tol)`.
pub fn geometric_multiplicity(m: &ComplexMatrix, lambda: Complex64, tol: f64) -> usize {
    m.dim() - rank(&m.shifted(lambda), tol)
}

/// Nilpotency index of `N = (m − λI)/‖m − λI‖∞`: the smallest `k` with
/// `‖N^k‖∞ ≤ tol`. Only defined when every eigenvalue of `m` lies within the
/// cluster radius of `λ`.
pub fn jordan_chain_length(m: &ComplexMatrix, lambda: Complex64, tol: f64) -> Result<usize> {
    let opts = EigOptions::default();
    let p = char_poly(m)?;
    let roots = poly_roots(&p, opts.root_tol, opts.max_iter)?;
    let radius = cluster_radius(&p, opts.root_tol);
    if let Some(far) = roots.iter().find(|z| (**z - lambda).norm() > radius) {
        return Err(Error::Domain(format!(
            "Jordan probe needs all eigenvalues within {radius:e} of {lambda}; found {far}"
        )));
    }

    let shifted = m.shifted(lambda);
    let norm = shifted.norm_inf();
    if norm == 0.0 {
        return Ok(1);
    }
    let n_mat = shifted.scale(Complex64::new(1.0 / norm, 0.0));
    let mut power = n_mat.clone();
    for k in 1..=m.dim() {
        if power.norm_inf() <= tol {
            return Ok(k);
        }
        power = power.matmul(&n_mat)?;
    }
    Err(Error::numerical(format!(
        "no power of the normalized shift fell below {tol:e}"
    )))
}

/// Tolerances and limits for [`find_transitions_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionOptions {
    pub eig: EigOptions,
    /// Threshold on the largest imaginary part for real↔complex boundaries.
    pub im_tol: f64,
    /// Rank threshold for multiplicities and Jordan probing near coalescence.
    pub ep_rank_tol: f64,
    /// Full coalescence when the largest gap is at most
    /// `coalescence_rel * (1 + |cluster value|)`.
    pub coalescence_rel: f64,
    pub golden_max_iter: usize,
    pub bisection_max_iter: usize,
    /// Refinement stops once a bracket is narrower than this fraction of the
    /// scanned range.
    pub rel_width: f64,
    pub exec: Execution,
}

impl Default for TransitionOptions {
    fn default() -> Self {
        Self {
            eig: EigOptions::default(),
            im_tol: 1e-8,
            ep_rank_tol: 1e-6,
            coalescence_rel: 1e-3,
            golden_max_iter: 200,
            bisection_max_iter: 100,
            rel_width: 1e-10,
            exec: Execution::default(),
        }
    }
}

/// [`find_transitions_with`] using default options and the given threshold
/// on imaginary parts.
pub fn find_transitions(
    family: &dyn MatrixFamily,
    t_lo: f64,
    t_hi: f64,
    steps: usize,
    tol: f64,
) -> Result<Vec<EpCandidate>> {
    let opts = TransitionOptions {
        im_tol: tol,
        ..TransitionOptions::default()
    };
    find_transitions_with(family, t_lo, t_hi, steps, &opts)
}

/// Scans `steps` equally spaced points of `[t_lo, t_hi]`, refines every
/// real↔complex boundary and every local minimum of the largest gap, and
/// classifies the results. Candidates are sorted by `t_star`.
pub fn find_transitions_with(
    family: &dyn MatrixFamily,
    t_lo: f64,
    t_hi: f64,
    steps: usize,
    opts: &TransitionOptions,
) -> Result<Vec<EpCandidate>> {
    if !(t_lo < t_hi) || !t_lo.is_finite() || !t_hi.is_finite() {
        return Err(Error::Input(format!("invalid range [{t_lo}, {t_hi}]")));
    }
    if steps < 3 {
        return Err(Error::Input(format!(
            "need at least 3 grid points, got {steps}"
        )));
    }
    family.validate_range(t_lo, t_hi)?;

    let scan = Scan { family, opts };
    let grid = grid(t_lo, t_hi, steps);
    let spectra = try_map_indexed(steps, opts.exec, |k| scan.spectrum(grid[k]))?;
    let span = t_hi - t_lo;
    let step = span / (steps - 1) as f64;
    let width = opts.rel_width * span;

    let max_im: Vec<f64> = spectra.iter().map(|s| s.max_abs_im()).collect();
    let max_gap: Vec<f64> = spectra.iter().map(raw_max_gap).collect();
    let min_gap: Vec<f64> = spectra
        .iter()
        .map(|s| coalescence_metrics(s).min_gap)
        .collect();

    let mut full = Vec::new();
    for k in strict_local_minima(&max_gap) {
        let (t, gap) = scan.golden(grid[k - 1], grid[k + 1], width, raw_max_gap)?;
        let spec = scan.spectrum(t)?;
        let center = mean(&spec.roots);
        if gap <= opts.coalescence_rel * (1.0 + center.norm()) {
            full.push(scan.full_coalescence(t, &spec)?);
        }
    }

    let near_full = |t: f64| {
        full.iter()
            .any(|c: &EpCandidate| (c.t_star - t).abs() <= step)
    };
    let mut out = full.clone();

    for k in 0..steps - 1 {
        if (max_im[k] > opts.im_tol) != (max_im[k + 1] > opts.im_tol) {
            let t = scan.bisect(grid[k], grid[k + 1], width)?;
            if !near_full(t) {
                out.push(scan.pair_candidate(t, EpKind::RealComplexTransition)?);
            }
        }
    }

    for k in strict_local_minima(&min_gap) {
        let (t, gap) = scan.golden(grid[k - 1], grid[k + 1], width, |s| {
            coalescence_metrics(s).min_gap
        })?;
        let spec = scan.spectrum(t)?;
        let cand = scan.pair_candidate(t, EpKind::Degeneracy)?;
        if gap <= opts.coalescence_rel * (1.0 + cand.cluster_value.norm())
            && !near_full(t)
            && spec.len() > 1
        {
            out.push(cand);
        }
    }

    out.sort_by(|a, b| a.t_star.total_cmp(&b.t_star));
    Ok(out)
}

/// `n` equally spaced points from `lo` to `hi` inclusive; endpoints exact.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| {
            if k == n - 1 {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn mean(values: &[Complex64]) -> Complex64 {
    values.iter().sum::<Complex64>() / values.len() as f64
}

/// Largest pairwise gap of the unresolved roots; collapsing clusters would
/// flatten the minimum this functional is meant to locate.
fn raw_max_gap(spec: &Spectrum) -> f64 {
    coalescence_metrics_of(&spec.roots).max_gap()
}

fn strict_local_minima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&k| values[k] < values[k - 1] && values[k] <= values[k + 1])
        .collect()
}

struct Scan<'a> {
    family: &'a dyn MatrixFamily,
    opts: &'a TransitionOptions,
}

impl Scan<'_> {
    fn spectrum(&self, t: f64) -> Result<Spectrum> {
        self.family
            .evaluate(t)
            .and_then(|m| eig(&m, &self.opts.eig))
            .map_err(|e| Error::at(t, e))
    }

    fn matrix(&self, t: f64) -> Result<ComplexMatrix> {
        self.family.evaluate(t).map_err(|e| Error::at(t, e))
    }

    /// Golden-section minimization of `f(spectrum(t))` on `[a, b]`. Returns
    /// the best point evaluated, which tolerates the noise floor near a
    /// multiple root.
    fn golden(
        &self,
        mut a: f64,
        mut b: f64,
        width: f64,
        f: impl Fn(&Spectrum) -> f64,
    ) -> Result<(f64, f64)> {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let eval = |t: f64| self.spectrum(t).map(|s| f(&s));
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = eval(c)?;
        let mut fd = eval(d)?;
        let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
        for _ in 0..self.opts.golden_max_iter {
            if b - a <= width {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = eval(c)?;
                if fc < best.1 {
                    best = (c, fc);
                }
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = eval(d)?;
                if fd < best.1 {
                    best = (d, fd);
                }
            }
        }
        Ok(best)
    }

    /// Bisection on the indicator `max |Im λ| > im_tol`.
    fn bisect(&self, mut a: f64, mut b: f64, width: f64) -> Result<f64> {
        let broken = |t: f64| self.spectrum(t).map(|s| s.max_abs_im() > self.opts.im_tol);
        let side_a = broken(a)?;
        if side_a == broken(b)? {
            return Err(Error::numerical(format!(
                "bisection bracket [{a}, {b}] lost its sign change"
            )));
        }
        for _ in 0..self.opts.bisection_max_iter {
            if b - a <= width {
                break;
            }
            let mid = 0.5 * (a + b);
            if broken(mid)? == side_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(0.5 * (a + b))
    }

    fn full_coalescence(&self, t: f64, spec: &Spectrum) -> Result<EpCandidate> {
        let m = self.matrix(t)?;
        let n = m.dim();
        let cluster = spec
            .clusters
            .iter()
            .max_by_key(|c| c.algebraic)
            .expect("nonempty spectrum");
        let center = if cluster.algebraic == n {
            cluster.center
        } else {
            mean(&spec.roots)
        };
        let geometric = geometric_multiplicity(&m, center, self.opts.ep_rank_tol).clamp(1, n);
        let jordan = jordan_chain_length(&m, center, self.opts.ep_rank_tol).ok();
        Ok(EpCandidate {
            t_star: t,
            cluster_value: center,
            algebraic_multiplicity: n,
            geometric_multiplicity: geometric,
            jordan_chain_length: jordan,
            max_gap_at_t: raw_max_gap(spec),
            kind: if geometric < n {
                EpKind::ExceptionalPoint
            } else {
                EpKind::Degeneracy
            },
        })
    }

    /// Candidate built around the closest pair of eigenvalues at `t`.
    fn pair_candidate(&self, t: f64, kind: EpKind) -> Result<EpCandidate> {
        let spec = self.spectrum(t)?;
        let m = self.matrix(t)?;
        let n = spec.len();
        let (i, _) = (0..n)
            .tuple_combinations()
            .map(|(i, j)| ((i, j), (spec.eigenvalues[i] - spec.eigenvalues[j]).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(ij, d)| (ij.0, d))
            .unwrap_or((0, 0.0));
        let cluster = spec.cluster_of(i);
        let geometric = geometric_multiplicity(&m, cluster.center, self.opts.ep_rank_tol)
            .clamp(1, cluster.algebraic);
        Ok(EpCandidate {
            t_star: t,
            cluster_value: cluster.center,
            algebraic_multiplicity: cluster.algebraic,
            geometric_multiplicity: geometric,
            jordan_chain_length: None,
            max_gap_at_t: raw_max_gap(&spec),
            kind,
        })
    }
}

/// Assigns eigenvalues to continuous branches.
///
/// At each step the new eigenvalues are matched to the previous branch
/// values by the permutation of least total distance (exhaustive; ties go to
/// the lexicographically first permutation, so the identity wins on
/// constant input). Returns one sequence per branch.
pub fn track_branches(spectra: &[Spectrum]) -> Vec<Vec<Complex64>> {
    let values: Vec<Vec<Complex64>> = spectra.iter().map(|s| s.eigenvalues.clone()).collect();
    track_values(&values)
}

pub fn track_values(steps: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let Some(first) = steps.first() else {
        return Vec::new();
    };
    let n = first.len();
    let mut branches: Vec<Vec<Complex64>> = first.iter().map(|&z| vec![z]).collect();
    let mut current = first.clone();
    for next in &steps[1..] {
        let perm = best_matching(&current, next);
        for (b, &src) in perm.iter().enumerate() {
            branches[b].push(next[src]);
        }
        current = perm.iter().map(|&src| next[src]).collect();
        debug_assert_eq!(current.len(), n);
    }
    branches
}

/// `perm[b]` is the index in `next` assigned to branch `b`.
pub fn best_matching(prev: &[Complex64], next: &[Complex64]) -> Vec<usize> {
    let n = prev.len();
    assert_eq!(n, next.len(), "spectra must have equal length");
    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in (0..n).permutations(n) {
        let cost: f64 = perm
            .iter()
            .enumerate()
            .map(|(b, &j)| (prev[b] - next[j]).norm())
            .sum();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, perm));
        }
    }
    best.map(|(_, p)| p).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn metrics_of_simple_sets() {
        let m = coalescence_metrics_of(&[r(1.0), r(2.0), r(2.0), r(3.0)]);
        assert_eq!((m.min_gap, m.max_abs_im), (0.0, 0.0));
        let m = coalescence_metrics_of(&[r(2.0), r(2.0), c(2.0, -1.0), c(2.0, 1.0)]);
        assert_eq!((m.min_gap, m.max_abs_im), (0.0, 1.0));
        let m = coalescence_metrics_of(&[r(0.0), r(2.0), r(2.0), r(4.0)]);
        assert_eq!(m.gaps, vec![0.0, 2.0, 2.0, 2.0, 2.0, 4.0]);
    }

    #[test]
    fn geometric_multiplicity_of_diagonal() {
        let m = ComplexMatrix::from_diagonal(&[r(2.0), r(2.0), r(3.0), r(5.0)]).unwrap();
        assert_eq!(geometric_multiplicity(&m, r(2.0), 1e-8), 2);
        assert_eq!(geometric_multiplicity(&m, r(4.0), 1e-8), 0);
    }

    #[test]
    fn jordan_probe() {
        let mut j = ComplexMatrix::zeros(4);
        for i in 0..3 {
            j[(i, i + 1)] = r(1.0);
        }
        assert_eq!(jordan_chain_length(&j, r(0.0), 1e-8).unwrap(), 4);
        let d = ComplexMatrix::identity(4).scale(r(2.0));
        assert_eq!(jordan_chain_length(&d, r(2.0), 1e-8).unwrap(), 1);
        let spread = ComplexMatrix::from_diagonal(&[r(1.0), r(2.0), r(3.0), r(4.0)]).unwrap();
        assert!(matches!(
            jordan_chain_length(&spread, r(2.5), 1e-8),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn constant_family_has_no_transitions() {
        let fam = FnFamily::new("t", |_t| {
            ComplexMatrix::from_diagonal(&[r(1.0), r(2.0), r(3.0), r(4.0)])
        });
        assert!(find_transitions(&fam, 0.0, 1.0, 11, 1e-8)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn rejects_bad_ranges() {
        let fam = FnFamily::new("t", |_t| Ok(ComplexMatrix::identity(2)));
        assert!(find_transitions(&fam, 1.0, 0.0, 11, 1e-8).is_err());
        assert!(find_transitions(&fam, 0.0, 1.0, 2, 1e-8).is_err());
    }

    #[test]
    fn constant_spectra_track_identically() {
        let step = vec![r(1.0), r(2.0), r(2.0), r(3.0)];
        let b = track_values(&[step.clone(), step.clone(), step.clone()]);
        for (k, branch) in b.iter().enumerate() {
            assert!(branch.iter().all(|z| *z == step[k]));
        }
    }

    #[test]
    fn crossing_lines_stay_continuous() {
        // x and -x sampled on a grid that misses the crossing at 0; eigenvalues
        // are presented sorted, so labels would jump without matching.
        let ts: Vec<f64> = (0..41).map(|k| -1.0 + 0.05 * k as f64 + 0.013).collect();
        let steps: Vec<Vec<Complex64>> = ts
            .iter()
            .map(|&t| {
                let mut v = vec![r(t), r(-t), r(5.0), r(7.0)];
                v.sort_by(|a, b| a.re.total_cmp(&b.re));
                v
            })
            .collect();
        let b = track_values(&steps);
        for branch in &b {
            for w in branch.windows(2) {
                assert!((w[1] - w[0]).norm() <= 0.1 + 1e-12);
            }
        }
        // the slope of a branch flips only at the step that straddles the
        // crossing
        let slopes: Vec<f64> = b[0].windows(2).map(|w| w[1].re - w[0].re).collect();
        let flips = slopes
            .windows(2)
            .filter(|s| s[0].signum() != s[1].signum())
            .count();
        assert!(flips <= 1, "{flips} slope flips");
    }
}
