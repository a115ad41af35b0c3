//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure, 3 the verify suite found a mismatch.

// `!(x < y)` is used so that NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use swanson_ep::ep::{find_transitions_with, EpCandidate, EpKind, TransitionOptions};
use swanson_ep::linalg::{discriminant_quartic, eig};
use swanson_ep::model::{build_matrix, char_coeffs_closed, classify_phase, CoeffFormula};
use swanson_ep::par::Execution;
use swanson_ep::sweep::{emit_csv, emit_plot_script, run_sweep, PlotStyle, SweepConfig};
use swanson_ep::verify::verify_suite_with;
use swanson_ep::{Complex64, Error};

use crate::config::ConfigFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

const AFTER_HELP: &str = "\
Unspecified values come from --preset (default fig2), then built-in defaults.
Precedence: flags > --config file > preset.

Presets:
  fig1  omega=2 gamma=2.5 rho=1 delta=auto-minus eta=auto, epsilon in [-3, 1], 401 steps.
        gamma only has to keep the delta(-) radicand nonnegative over the range;
        with eta = -epsilon it does not change the spectrum.
  fig2  omega=2 gamma=1 rho=0.5 delta=auto-plus eta=auto, epsilon in [-0.4, 1.4], 181 steps.";

#[derive(Parser, Debug)]
#[command(name = "swanson-ep", version, about = "Spectra and exceptional points of coupled Swanson oscillators", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues, multiplicities and phase at one parameter point.
    Spectrum(ModelArgs),
    /// Sweep one parameter and write CSV (and optionally a gnuplot script).
    Sweep(SweepArgs),
    /// Locate real/complex transitions and exceptional points along a sweep.
    FindEp(FindEpArgs),
    /// Cross-check closed forms against numerical diagonalization.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
struct ModelArgs {
    /// key = value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// fig1 | fig2
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<String>,
    /// Number, auto-minus or auto-plus.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<String>,
    /// Number or auto (eta = -epsilon).
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<String>,
    #[arg(long)]
    root_tol: Option<String>,
    #[arg(long)]
    rank_tol: Option<String>,
    #[arg(long)]
    phase_tol: Option<String>,
    /// Evaluate grid points on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug, Default)]
struct RangeArgs {
    /// omega | gamma | rho | epsilon | delta | eta
    #[arg(long)]
    param: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    from: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<String>,
    #[arg(long)]
    steps: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// CSV destination (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write a gnuplot script here; needs --out.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// fig1 | fig2 (default follows the delta mode).
    #[arg(long)]
    style: Option<String>,
    /// Sorted eigenvalues instead of tracked branches.
    #[arg(long)]
    sorted: bool,
}

#[derive(Args, Debug)]
struct FindEpArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    range: RangeArgs,
    /// Threshold on max |Im| for real/complex boundaries.
    #[arg(long)]
    im_tol: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    sequential: bool,
}

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (including the program name) and runs the command against
/// the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Spectrum(a) => spectrum(&a, out),
        Command::Sweep(a) => sweep(&a, out),
        Command::FindEp(a) => find_ep(&a, out),
        Command::Verify(a) => verify(&a, char_coeffs_closed, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// The `verify` subcommand with an injectable coefficient formula.
pub fn verify_with_formula(
    samples: usize,
    seed: u64,
    formula: CoeffFormula,
    out: &mut dyn Write,
) -> i32 {
    match verify_report(samples, seed, formula, Execution::default(), out) {
        Ok(code) => code,
        Err(e) => e.code,
    }
}

fn load_config(path: Option<&Path>, allowed: &[&str]) -> CliResult<ConfigFile> {
    let cfg = match path {
        Some(p) => ConfigFile::load(p).map_err(CliError::usage)?,
        None => ConfigFile::default(),
    };
    cfg.check_keys(allowed).map_err(CliError::usage)?;
    Ok(cfg)
}

/// Flag value if present, else the config entry, parsed as `T`.
fn pick<T: FromStr>(flag: &Option<String>, cfg: &ConfigFile, key: &str) -> CliResult<Option<T>>
where
    T::Err: std::fmt::Display,
{
    let raw = flag.as_deref().or_else(|| cfg.get(key));
    raw.map(|s| {
        s.trim()
            .parse::<T>()
            .map_err(|e| CliError::usage(format!("--{key} {s:?}: {e}")))
    })
    .transpose()
}

fn pick_finite(flag: &Option<String>, cfg: &ConfigFile, key: &str) -> CliResult<Option<f64>> {
    match pick::<f64>(flag, cfg, key)? {
        Some(v) if !v.is_finite() => Err(CliError::usage(format!("--{key} must be finite"))),
        other => Ok(other),
    }
}

fn pick_bool(flag: bool, cfg: &ConfigFile, key: &str) -> CliResult<bool> {
    if flag {
        return Ok(true);
    }
    Ok(pick::<bool>(&None, cfg, key)?.unwrap_or(false))
}

const MODEL_KEYS: &[&str] = &[
    "preset",
    "omega",
    "gamma",
    "rho",
    "epsilon",
    "delta",
    "eta",
    "root-tol",
    "rank-tol",
    "phase-tol",
    "sequential",
];
const RANGE_KEYS: &[&str] = &["param", "from", "to", "steps"];

/// Resolves model and range settings into a sweep configuration.
fn resolve(
    model: &ModelArgs,
    range: Option<&RangeArgs>,
    cfg: &ConfigFile,
) -> CliResult<SweepConfig> {
    let mut sc = match pick::<String>(&model.preset, cfg, "preset")?.as_deref() {
        None | Some("fig2") => SweepConfig::figure2(),
        Some("fig1") => SweepConfig::figure1(),
        Some(other) => {
            return Err(CliError::usage(format!(
                "unknown preset {other:?} (fig1|fig2)"
            )))
        }
    };
    let b = &mut sc.base;
    for (flag, key, slot) in [
        (&model.omega, "omega", &mut b.omega),
        (&model.gamma, "gamma", &mut b.gamma),
        (&model.rho, "rho", &mut b.rho),
        (&model.epsilon, "epsilon", &mut b.epsilon),
    ] {
        if let Some(v) = pick_finite(flag, cfg, key)? {
            *slot = v;
        }
    }
    if let Some(d) = pick(&model.delta, cfg, "delta")? {
        sc.delta = d;
    }
    if let Some(e) = pick(&model.eta, cfg, "eta")? {
        sc.eta = e;
    }
    if let Some(v) = pick_finite(&model.root_tol, cfg, "root-tol")? {
        sc.eig.root_tol = v;
    }
    if let Some(v) = pick_finite(&model.rank_tol, cfg, "rank-tol")? {
        sc.eig.rank_tol = v;
    }
    if let Some(v) = pick_finite(&model.phase_tol, cfg, "phase-tol")? {
        sc.phase_tol = v;
    }
    for (name, v) in [
        ("root-tol", sc.eig.root_tol),
        ("rank-tol", sc.eig.rank_tol),
        ("phase-tol", sc.phase_tol),
    ] {
        if !(v > 0.0) {
            return Err(CliError::usage(format!("--{name} must be positive")));
        }
    }
    if pick_bool(model.sequential, cfg, "sequential")? {
        sc.exec = Execution::Sequential;
    }
    if let Some(r) = range {
        if let Some(p) = pick(&r.param, cfg, "param")? {
            sc.param = p;
        }
        if let Some(v) = pick_finite(&r.from, cfg, "from")? {
            sc.from = v;
        }
        if let Some(v) = pick_finite(&r.to, cfg, "to")? {
            sc.to = v;
        }
        if let Some(v) = pick::<usize>(&r.steps, cfg, "steps")? {
            sc.steps = v;
        }
    }
    // explicit delta/eta values are carried in the modes
    if let swanson_ep::model::DeltaMode::Value(v) = sc.delta {
        sc.base.delta = v;
    }
    if let swanson_ep::model::EtaMode::Value(v) = sc.eta {
        sc.base.eta = v;
    }
    Ok(sc)
}

fn fmt_c(z: Complex64) -> String {
    format!(
        "{:.12} {} {:.12}i",
        z.re,
        if z.im < 0.0 { '-' } else { '+' },
        z.im.abs()
    )
}

fn spectrum(a: &ModelArgs, out: &mut dyn Write) -> CliResult<i32> {
    let cfg = load_config(a.config.as_deref(), MODEL_KEYS)?;
    let sc = resolve(a, None, &cfg)?;
    let family = sc.family()?;
    let p = family.params_at(sc.base.value_of(sc.param))?;
    let m = build_matrix(&p)?;
    let spec = eig(&m, &sc.eig)?;
    let phase = classify_phase(&spec, sc.phase_tol);
    let disc = discriminant_quartic(&spec.char_poly)?;

    writeln!(
        out,
        "parameters: omega={} gamma={} rho={} epsilon={} delta={} eta={} (canonical: {})",
        p.omega,
        p.gamma,
        p.rho,
        p.epsilon,
        p.delta,
        p.eta,
        if p.is_canonical() { "yes" } else { "no" }
    )?;
    writeln!(out, "eigenvalues:")?;
    for (i, (z, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
        writeln!(out, "  E{} = {}   residual {:.3e}", i + 1, fmt_c(*z), r)?;
    }
    writeln!(out, "clusters:")?;
    for c in &spec.clusters {
        writeln!(
            out,
            "  {}   algebraic {}   geometric {}",
            fmt_c(c.center),
            c.algebraic,
            c.geometric
        )?;
    }
    writeln!(out, "discriminant: {:.6e}", disc.norm())?;
    writeln!(out, "phase: {phase}")?;
    Ok(EXIT_OK)
}

/// Current value of a sweepable parameter.
trait BaseValue {
    fn value_of(&self, param: swanson_ep::model::SweepParam) -> f64;
}

impl BaseValue for swanson_ep::model::ModelParams {
    fn value_of(&self, param: swanson_ep::model::SweepParam) -> f64 {
        use swanson_ep::model::SweepParam::*;
        match param {
            Omega => self.omega,
            Gamma => self.gamma,
            Rho => self.rho,
            Epsilon => self.epsilon,
            Delta => self.delta,
            Eta => self.eta,
        }
    }
}

fn first_ep(cands: &[EpCandidate]) -> Option<f64> {
    cands
        .iter()
        .find(|c| c.kind == EpKind::ExceptionalPoint)
        .map(|c| c.t_star)
}

fn transition_options(sc: &SweepConfig, im_tol: Option<f64>) -> TransitionOptions {
    TransitionOptions {
        eig: sc.eig,
        im_tol: im_tol.unwrap_or(sc.phase_tol),
        exec: sc.exec,
        ..TransitionOptions::default()
    }
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> CliResult<i32> {
    let allowed: Vec<&str> = MODEL_KEYS
        .iter()
        .chain(RANGE_KEYS)
        .chain(&["out", "plot", "style", "sorted"])
        .copied()
        .collect();
    let cfg = load_config(a.model.config.as_deref(), &allowed)?;
    let mut sc = resolve(&a.model, Some(&a.range), &cfg)?;
    sc.sorted = pick_bool(a.sorted, &cfg, "sorted")?;
    let out_path: Option<PathBuf> = a.out.clone().or_else(|| cfg.get("out").map(PathBuf::from));
    let plot_path: Option<PathBuf> = a
        .plot
        .clone()
        .or_else(|| cfg.get("plot").map(PathBuf::from));
    let style = match pick::<String>(&a.style, &cfg, "style")? {
        Some(s) => PlotStyle::from_str(&s)?,
        None if sc.delta == swanson_ep::model::DeltaMode::AutoMinus => PlotStyle::Fig1,
        None => PlotStyle::Fig2,
    };
    if plot_path.is_some() && out_path.is_none() {
        return Err(CliError::usage(
            "--plot needs --out so the script can reference the CSV",
        ));
    }

    let rows = run_sweep(&sc)?;
    let csv = emit_csv(&rows);
    match &out_path {
        Some(p) => std::fs::write(p, &csv)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display())))?,
        None => out.write_all(csv.as_bytes())?,
    }

    if let (Some(plot), Some(csv_path)) = (&plot_path, &out_path) {
        let ep = if sc.steps >= 3 {
            let family = sc.family()?;
            first_ep(&find_transitions_with(
                &family,
                sc.from,
                sc.to,
                sc.steps,
                &transition_options(&sc, None),
            )?)
        } else {
            None
        };
        let script = emit_plot_script(
            &rows,
            style,
            &csv_path.display().to_string(),
            sc.param.name(),
            ep,
        );
        std::fs::write(plot, script)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", plot.display())))?;
    }
    Ok(EXIT_OK)
}

fn find_ep(a: &FindEpArgs, out: &mut dyn Write) -> CliResult<i32> {
    let allowed: Vec<&str> = MODEL_KEYS
        .iter()
        .chain(RANGE_KEYS)
        .chain(&["im-tol"])
        .copied()
        .collect();
    let cfg = load_config(a.model.config.as_deref(), &allowed)?;
    let sc = resolve(&a.model, Some(&a.range), &cfg)?;
    let im_tol = pick_finite(&a.im_tol, &cfg, "im-tol")?;
    if sc.steps < 3 {
        return Err(CliError::usage("find-ep needs --steps >= 3"));
    }
    let family = sc.family()?;
    let cands = find_transitions_with(
        &family,
        sc.from,
        sc.to,
        sc.steps,
        &transition_options(&sc, im_tol),
    )?;
    if cands.is_empty() {
        writeln!(
            out,
            "no transitions found in {} in [{}, {}]",
            sc.param, sc.from, sc.to
        )?;
    }
    for c in &cands {
        writeln!(
            out,
            "{} {}={:.12} value={} algebraic={} geometric={} jordan={} max_gap={:.3e}",
            c.kind,
            sc.param,
            c.t_star,
            fmt_c(c.cluster_value),
            c.algebraic_multiplicity,
            c.geometric_multiplicity,
            c.jordan_chain_length
                .map_or("-".to_string(), |k| k.to_string()),
            c.max_gap_at_t
        )?;
    }
    Ok(EXIT_OK)
}

fn verify(a: &VerifyArgs, formula: CoeffFormula, out: &mut dyn Write) -> CliResult<i32> {
    let cfg = load_config(a.config.as_deref(), &["samples", "seed", "sequential"])?;
    let samples = pick::<usize>(&a.samples, &cfg, "samples")?.unwrap_or(1000);
    let seed = pick::<u64>(&a.seed, &cfg, "seed")?.unwrap_or(42);
    let exec = if pick_bool(a.sequential, &cfg, "sequential")? {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    verify_report(samples, seed, formula, exec, out)
}

fn verify_report(
    samples: usize,
    seed: u64,
    formula: CoeffFormula,
    exec: Execution,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let report = verify_suite_with(samples, seed, formula, exec)?;
    writeln!(out, "{report}")?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
