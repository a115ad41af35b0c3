//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the golden sweep CSVs.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use swanson_ep::ep::{find_transitions, jordan_chain_length, EpKind};
use swanson_ep::linalg::rank;
use swanson_ep::model::{build_matrix, char_coeffs_closed, ModelParams, PhaseLabel, QuarticCoeffs};
use swanson_ep::par::Execution;
use swanson_ep::sweep::{emit_csv, run_sweep, SweepConfig, SweepRow};
use swanson_ep::verify::{verify_suite, verify_suite_with, VerifyReport};

const SAMPLES: usize = 1000;
const SEED: u64 = 42;
const T_TOL: f64 = 1e-6;
const VALUE_TOL: f64 = 1e-3;
const PIN_TOL: f64 = 1e-8;
const IM_TOL: f64 = 1e-8;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn from_checks(report: &VerifyReport, ids: &[&str]) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for id in ids {
        match report.check(id) {
            Some(c) => {
                passed &= c.passed;
                parts.push(format!(
                    "[{id}] n={} max dev {:.3e} (tol {:.0e})",
                    c.samples, c.max_deviation, c.tolerance
                ));
            }
            None => {
                passed = false;
                parts.push(format!("[{id}] missing"));
            }
        }
    }
    outcome(passed, parts.join("; "))
}

/// (preset, expected t*, whether the real side lies below t*)
fn ep_cases() -> [(SweepConfig, f64, bool); 2] {
    [
        (SweepConfig::figure1(), -1.0, true),
        (SweepConfig::figure2(), 0.5, false),
    ]
}

fn criterion_ep_location() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (cfg, expected, _) in ep_cases() {
        let family = match cfg.family() {
            Ok(f) => f,
            Err(e) => return outcome(false, e.to_string()),
        };
        let cands = match find_transitions(&family, cfg.from, cfg.to, cfg.steps, IM_TOL) {
            Ok(c) => c,
            Err(e) => return outcome(false, e.to_string()),
        };
        let eps: Vec<_> = cands
            .iter()
            .filter(|c| c.kind == EpKind::ExceptionalPoint)
            .collect();
        let ok = eps.len() == 1 && {
            let c = eps[0];
            (c.t_star - expected).abs() <= T_TOL
                && (c.cluster_value - 2.0).norm() <= VALUE_TOL
                && c.algebraic_multiplicity == 4
                && c.geometric_multiplicity == 1
        };
        passed &= ok;
        match eps.first() {
            Some(c) => parts.push(format!(
                "{} EP(s), t*={:.9} value={:.2e} off 2, alg {} geo {}",
                eps.len(),
                c.t_star,
                (c.cluster_value - 2.0).norm(),
                c.algebraic_multiplicity,
                c.geometric_multiplicity
            )),
            None => parts.push("no EP".to_string()),
        }
    }
    outcome(passed, parts.join("; "))
}

fn ep_params() -> Vec<ModelParams> {
    ep_cases()
        .into_iter()
        .map(|(cfg, t, _)| {
            cfg.family()
                .and_then(|f| f.params_at(t))
                .expect("EP parameters")
        })
        .collect()
}

fn criterion_jordan() -> Outcome {
    let tols: Vec<f64> = (0..=8)
        .map(|k| 10f64.powf(-10.0 + 0.5 * k as f64))
        .collect();
    let mut passed = true;
    let mut parts = Vec::new();
    for p in ep_params() {
        let m = build_matrix(&p).expect("matrix");
        let shifted = m.shifted(p.omega.into());
        let ranks: Vec<usize> = tols.iter().map(|&t| rank(&shifted, t)).collect();
        let chains: Vec<String> = tols
            .iter()
            .map(|&t| match jordan_chain_length(&m, p.omega.into(), t) {
                Ok(k) => k.to_string(),
                Err(e) => format!("err({e})"),
            })
            .collect();
        let ok = ranks.iter().all(|&r| r == 3) && chains.iter().all(|k| k == "4");
        passed &= ok;
        parts.push(format!(
            "epsilon={}: ranks {:?}, chains [{}]",
            p.epsilon,
            ranks,
            chains.join(", ")
        ));
    }
    outcome(
        passed,
        format!("rank tol 1e-10..1e-6: {}", parts.join("; ")),
    )
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Violations of the region structure: real on one side of `t_ep`, broken on
/// the other, and two real eigenvalues pinned at `omega` on every row.
fn region_violations(rows: &[SweepRow], t_ep: f64, real_below: bool, omega: f64) -> Vec<String> {
    let mut bad = Vec::new();
    for r in rows {
        let pinned = r
            .branches
            .iter()
            .filter(|z| (z.re - omega).abs() <= PIN_TOL && z.im.abs() <= PIN_TOL)
            .count();
        if pinned < 2 {
            bad.push(format!("t={} pinned {}", r.t, pinned));
        }
        if (r.t - t_ep).abs() <= 1e-9 {
            continue;
        }
        let should_be_real = (r.t < t_ep) == real_below;
        let is_real = r.max_abs_im <= IM_TOL && r.phase != PhaseLabel::Broken;
        let is_broken = r.max_abs_im > IM_TOL && r.phase == PhaseLabel::Broken;
        if should_be_real && !is_real || !should_be_real && !is_broken {
            bad.push(format!("t={} im={:.2e} {}", r.t, r.max_abs_im, r.phase));
        }
    }
    bad
}

fn criterion_figures() -> Outcome {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut passed = true;
    let mut parts = Vec::new();
    for ((cfg, t_ep, real_below), name) in ep_cases().into_iter().zip(["fig1.csv", "fig2.csv"]) {
        let run = |exec| {
            let mut c = cfg.clone();
            c.exec = exec;
            run_sweep(&c).map(|rows| (emit_csv(&rows), rows))
        };
        let (first, rows) = match run(Execution::Parallel) {
            Ok(v) => v,
            Err(e) => return outcome(false, e.to_string()),
        };
        let second = run(Execution::Parallel).map(|v| v.0).unwrap_or_default();
        let sequential = run(Execution::Sequential).map(|v| v.0).unwrap_or_default();
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &first).expect("write golden");
        }
        let golden = std::fs::read_to_string(&path).unwrap_or_default();

        let bad = region_violations(&rows, t_ep, real_below, cfg.base.omega);
        let ok_rows = rows.len() == cfg.steps;
        let deterministic = first == second && first == sequential;
        let ok_golden = first == golden;
        passed &= ok_rows && bad.is_empty() && deterministic && ok_golden;
        parts.push(format!(
            "{name}: {} rows, {} violations{}, rerun {}, golden {}",
            rows.len(),
            bad.len(),
            bad.first()
                .map(|b| format!(" (first {b})"))
                .unwrap_or_default(),
            if deterministic {
                "identical"
            } else {
                "DIFFERS"
            },
            if ok_golden { "identical" } else { "DIFFERS" }
        ));
    }
    outcome(passed, parts.join("; "))
}

fn flipped_r_term(p: &ModelParams) -> QuarticCoeffs {
    let mut c = char_coeffs_closed(p);
    c.r.im -= 8.0 * p.delta * (p.eta + p.epsilon) * p.rho;
    c
}

fn criterion_negative_control() -> Outcome {
    match verify_suite_with(SAMPLES, SEED, flipped_r_term, Execution::default()) {
        Ok(report) => {
            let c1 = report.check("1").expect("coefficient check");
            outcome(
                !report.passed() && !c1.passed,
                format!(
                    "corrupted r term: suite {}, [1] max dev {:.3e} ({})",
                    if report.passed() { "passed" } else { "failed" },
                    c1.max_deviation,
                    c1.detail
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let report = match verify_suite(SAMPLES, SEED) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL verify suite could not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: Vec<Criterion> = vec![
        (
            "1 coefficient identity",
            Box::new(|| from_checks(&report, &["1"])),
        ),
        (
            "2 closed-form spectrum",
            Box::new(|| from_checks(&report, &["2a", "2b"])),
        ),
        (
            "3 delta(-) branch",
            Box::new(|| from_checks(&report, &["3"])),
        ),
        (
            "4 delta(+) branch",
            Box::new(|| from_checks(&report, &["4"])),
        ),
        ("5 EP location", Box::new(criterion_ep_location)),
        (
            "6 Jordan structure at EPs",
            Box::new(|| {
                let mut o = criterion_jordan();
                let c5 = from_checks(&report, &["5"]);
                o.passed &= c5.passed;
                o.detail = format!("{}; random draws {}", o.detail, c5.detail);
                o
            }),
        ),
        ("7 figure reproduction", Box::new(criterion_figures)),
        ("8 negative control", Box::new(criterion_negative_control)),
    ];

    let mut failures = 0;
    for (name, f) in &criteria {
        let o = f();
        if !o.passed {
            failures += 1;
        }
        println!(
            "{} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed in {:.2?}",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
