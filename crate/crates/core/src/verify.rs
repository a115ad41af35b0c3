//! Randomized cross-validation of the closed-form model against the
//! numerical eigensolver.
//!
//! Every check draws parameters from a seeded ChaCha generator, so a
//! `(samples, seed)` pair always produces the same report.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ep::{best_matching, jordan_chain_length};
use crate::linalg::{char_poly, eig, rank, EigOptions, Spectrum};
use crate::model::{
    branch_spectrum_minus, branch_spectrum_plus, build_matrix, char_coeffs_closed,
    closed_form_eigenvalues, delta_minus, delta_plus, CoeffFormula, ModelParams, QuarticCoeffs,
};
use crate::par::{try_map_indexed, Execution};
use crate::Result;

/// Relative coefficient error allowed between the closed form and
/// `char_poly`.
pub const COEFF_TOL: f64 = 1e-10;
/// Eigenvalue agreement for eigenvalues at least [`SEPARATION`] away from
/// every other one.
pub const SIMPLE_TOL: f64 = 1e-8;
/// Eigenvalue agreement inside a coalescing group.
pub const CLUSTER_TOL: f64 = 1e-3;
pub const SEPARATION: f64 = 1e-2;
/// Rank thresholds the EP rank must be stable over.
pub const EP_RANK_TOLS: [f64; 3] = [1e-10, 1e-8, 1e-6];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Worst case, for diagnosis.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verify: samples = {}, seed = {}",
            self.samples, self.seed
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "[{}] {:<4} {:<44} n={:<5} max_dev={:<11.3e} tol={:<8.1e} {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.name,
                c.samples,
                c.max_deviation,
                c.tolerance,
                c.detail
            )?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all checks passed"
            } else {
                "verification FAILED"
            }
        )
    }
}

/// Runs the suite against the closed-form coefficients as implemented.
pub fn verify_suite(samples: usize, seed: u64) -> Result<VerifyReport> {
    verify_suite_with(samples, seed, char_coeffs_closed, Execution::default())
}

/// Runs the suite with an arbitrary coefficient formula; used to show that
/// a mistranscribed formula is caught.
pub fn verify_suite_with(
    samples: usize,
    seed: u64,
    formula: CoeffFormula,
    exec: Execution,
) -> Result<VerifyReport> {
    if samples == 0 {
        return Err(crate::Error::Input(
            "verify needs at least one sample".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = EigOptions::default();

    let mut checks = vec![coefficient_check(&mut rng, samples, formula, exec)?];
    checks.extend(closed_form_check(&mut rng, samples, &opts, exec)?);
    checks.push(branch_check(&mut rng, samples, &opts, exec, Branch::Minus)?);
    checks.push(branch_check(&mut rng, samples, &opts, exec, Branch::Plus)?);
    checks.push(ep_rank_check(&mut rng, samples, exec)?);

    Ok(VerifyReport {
        samples,
        seed,
        checks,
    })
}

fn params(omega: f64, gamma: f64, rho: f64, epsilon: f64, delta: f64, eta: f64) -> ModelParams {
    ModelParams {
        omega,
        gamma,
        rho,
        epsilon,
        delta,
        eta,
    }
}

/// `|a − b| / max(1, |b|)`: relative for large coefficients, absolute for
/// those that cancel to near zero.
pub fn coefficient_error(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Largest distance under the least-total-distance pairing, split by
/// whether the expected eigenvalue is separated from the others.
fn matched_errors(expected: &[Complex64], got: &[Complex64]) -> (f64, f64) {
    let perm = best_matching(expected, got);
    let mut simple = 0.0f64;
    let mut clustered = 0.0f64;
    for (i, &j) in perm.iter().enumerate() {
        let err = (expected[i] - got[j]).norm();
        let gap = expected
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, z)| (z - expected[i]).norm())
            .fold(f64::INFINITY, f64::min);
        if gap > SEPARATION {
            simple = simple.max(err);
        } else {
            clustered = clustered.max(err);
        }
    }
    (simple, clustered)
}

#[derive(Default)]
struct Worst {
    value: f64,
    detail: String,
}

impl Worst {
    fn offer(&mut self, value: f64, detail: impl FnOnce() -> String) {
        if value > self.value || (value.is_nan() && !self.value.is_nan()) {
            self.value = value;
            self.detail = detail();
        }
    }

    fn result(self, id: &'static str, name: &'static str, samples: usize, tol: f64) -> CheckResult {
        CheckResult {
            id,
            name,
            samples,
            max_deviation: self.value,
            tolerance: tol,
            passed: self.value <= tol,
            detail: self.detail,
        }
    }
}

fn coefficient_check(
    rng: &mut ChaCha8Rng,
    samples: usize,
    formula: CoeffFormula,
    exec: Execution,
) -> Result<CheckResult> {
    let mut draws = Vec::with_capacity(2 * samples);
    for signed in [false, true] {
        for _ in 0..samples {
            let omega = rng.gen_range(0.5..3.0);
            let gamma = rng.gen_range(0.0..2.0);
            let rho = rng.gen_range(0.0..2.0);
            let delta = rng.gen_range(0.0..2.0);
            let (epsilon, eta) = if signed {
                (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
            } else {
                (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0))
            };
            draws.push(params(omega, gamma, rho, epsilon, delta, eta));
        }
    }
    let errors = try_map_indexed(draws.len(), exec, |k| -> Result<[f64; 4]> {
        let numeric = QuarticCoeffs::from_poly(&char_poly(&build_matrix(&draws[k])?)?)?;
        let closed = formula(&draws[k]);
        let mut e = [0.0; 4];
        for (slot, (a, b)) in e
            .iter_mut()
            .zip(closed.as_array().iter().zip(numeric.as_array()))
        {
            *slot = coefficient_error(*a, b);
        }
        Ok(e)
    })?;

    let mut worst = Worst::default();
    for (k, e) in errors.iter().enumerate() {
        for (term, &err) in ["p", "q", "r", "s"].iter().zip(e) {
            worst.offer(err, || format!("worst term {term} at {:?}", draws[k]));
        }
    }
    Ok(worst.result(
        "1",
        "characteristic coefficients vs char_poly",
        draws.len(),
        COEFF_TOL,
    ))
}

fn closed_form_check(
    rng: &mut ChaCha8Rng,
    samples: usize,
    opts: &EigOptions,
    exec: Execution,
) -> Result<Vec<CheckResult>> {
    let draws: Vec<ModelParams> = (0..samples)
        .map(|_| {
            let epsilon = rng.gen_range(-2.0..2.0);
            params(
                rng.gen_range(0.5..3.0),
                rng.gen_range(0.0..2.0),
                rng.gen_range(0.0..2.0),
                epsilon,
                rng.gen_range(0.0..2.0),
                -epsilon,
            )
        })
        .collect();
    let errors = try_map_indexed(samples, exec, |k| -> Result<(f64, f64)> {
        let closed = closed_form_eigenvalues(&draws[k])?;
        let spec = eig(&build_matrix(&draws[k])?, opts)?;
        Ok(matched_errors(&closed, &spec.eigenvalues))
    })?;
    let mut simple = Worst::default();
    let mut clustered = Worst::default();
    for (k, (s, c)) in errors.iter().enumerate() {
        simple.offer(*s, || format!("at {:?}", draws[k]));
        clustered.offer(*c, || format!("at {:?}", draws[k]));
    }
    Ok(vec![
        simple.result(
            "2a",
            "closed-form eigenvalues (separated)",
            samples,
            SIMPLE_TOL,
        ),
        clustered.result(
            "2b",
            "closed-form eigenvalues (coalescing)",
            samples,
            CLUSTER_TOL,
        ),
    ])
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Branch {
    Minus,
    Plus,
}

/// Deviation of a branch spectrum from the computed one. Covers the pinned
/// pair (cluster center at ω with multiplicity ≥ 2), the matched branch
/// values, and on the broken side the conjugate pair with Re = ω.
fn branch_deviation(p: &ModelParams, spec: &Spectrum, branch: Branch) -> Result<f64> {
    let w = Complex64::new(p.omega, 0.0);
    let expected = match branch {
        Branch::Minus => branch_spectrum_minus(p.omega, p.gamma, p.rho, p.epsilon)?,
        Branch::Plus => branch_spectrum_plus(p.omega, p.gamma, p.rho, p.epsilon)?,
    };
    let pinned = spec.nearest_cluster(w);
    if pinned.algebraic < 2 {
        return Ok(f64::INFINITY);
    }
    let mut dev = (pinned.center - w).norm();

    let (simple, clustered) = matched_errors(&expected, &spec.eigenvalues);
    dev = dev.max(simple).max(clustered * (SIMPLE_TOL / CLUSTER_TOL));

    let split = expected.iter().map(|z| (z - w).norm()).fold(0.0, f64::max);
    if split > SEPARATION && expected.iter().any(|z| z.im.abs() > SEPARATION) {
        let complex: Vec<&Complex64> = spec
            .eigenvalues
            .iter()
            .filter(|z| z.im.abs() > SIMPLE_TOL)
            .collect();
        if complex.len() != 2 {
            return Ok(f64::INFINITY);
        }
        dev = dev
            .max((complex[0].re - p.omega).abs())
            .max((complex[1].re - p.omega).abs())
            .max((complex[0] - complex[1].conj()).norm());
    }
    Ok(dev)
}

fn branch_check(
    rng: &mut ChaCha8Rng,
    samples: usize,
    opts: &EigOptions,
    exec: Execution,
    branch: Branch,
) -> Result<CheckResult> {
    let mut draws = Vec::with_capacity(samples);
    for _ in 0..samples {
        let omega = rng.gen_range(0.5..3.0);
        let rho: f64 = rng.gen_range(0.0..2.0);
        let epsilon: f64 = rng.gen_range(-2.0..2.0);
        let shift = match branch {
            Branch::Minus => epsilon + rho,
            Branch::Plus => epsilon - rho,
        };
        let gamma = shift.abs() + rng.gen_range(0.0..2.0);
        let delta = match branch {
            Branch::Minus => delta_minus(gamma, epsilon, rho)?,
            Branch::Plus => delta_plus(gamma, epsilon, rho)?,
        };
        draws.push(params(omega, gamma, rho, epsilon, delta, -epsilon));
    }
    let devs = try_map_indexed(samples, exec, |k| {
        let spec = eig(&build_matrix(&draws[k])?, opts)?;
        branch_deviation(&draws[k], &spec, branch)
    })?;
    let mut worst = Worst::default();
    for (k, d) in devs.iter().enumerate() {
        worst.offer(*d, || format!("at {:?}", draws[k]));
    }
    Ok(match branch {
        Branch::Minus => worst.result("3", "delta(-) branch spectrum", samples, SIMPLE_TOL),
        Branch::Plus => worst.result("4", "delta(+) branch spectrum", samples, SIMPLE_TOL),
    })
}

/// At ε = ∓ρ on the δ₍∓₎ branch: `rank(M − ωI) = 3` for every threshold in
/// [`EP_RANK_TOLS`] and a single Jordan block of size 4. Deviation counts
/// failing draws.
fn ep_rank_check(rng: &mut ChaCha8Rng, samples: usize, exec: Execution) -> Result<CheckResult> {
    let mut draws = Vec::with_capacity(2 * samples);
    for _ in 0..samples {
        let omega = rng.gen_range(0.5..3.0);
        let gamma = rng.gen_range(0.25..2.0);
        let rho = rng.gen_range(0.25..2.0);
        draws.push(params(
            omega,
            gamma,
            rho,
            -rho,
            delta_minus(gamma, -rho, rho)?,
            rho,
        ));
        draws.push(params(
            omega,
            gamma,
            rho,
            rho,
            delta_plus(gamma, rho, rho)?,
            -rho,
        ));
    }
    let failures = try_map_indexed(draws.len(), exec, |k| -> Result<Option<String>> {
        let p = &draws[k];
        let m = build_matrix(p)?;
        let w = Complex64::new(p.omega, 0.0);
        let shifted = m.shifted(w);
        let ranks: Vec<usize> = EP_RANK_TOLS.iter().map(|&t| rank(&shifted, t)).collect();
        let chain = jordan_chain_length(&m, w, 1e-8).ok();
        Ok((ranks.iter().any(|&r| r != 3) || chain != Some(4))
            .then(|| format!("ranks {ranks:?}, chain {chain:?} at {p:?}")))
    })?;
    let failed: Vec<&String> = failures.iter().flatten().collect();
    Ok(CheckResult {
        id: "5",
        name: "EP rank 3 and Jordan chain 4 at epsilon = -+rho",
        samples: draws.len(),
        max_deviation: failed.len() as f64,
        tolerance: 0.0,
        passed: failed.is_empty(),
        detail: failed.first().map(|s| s.to_string()).unwrap_or_default(),
    })
}
