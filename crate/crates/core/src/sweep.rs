//! Parameter sweeps, CSV output and gnuplot scripts.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::ep::{coalescence_metrics, grid, track_branches};
use crate::linalg::{discriminant_quartic, eig, EigOptions, Spectrum};
use crate::model::{
    build_matrix, classify_phase, DeltaMode, EtaMode, ModelParams, PhaseLabel, SwansonFamily,
    SweepParam,
};
use crate::par::{try_map_indexed, Execution};
use crate::{Error, Result};

/// Everything needed to reproduce a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Fixed parameter values; the swept one and any auto-resolved δ/η are
    /// overwritten per point.
    pub base: ModelParams,
    pub delta: DeltaMode,
    pub eta: EtaMode,
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub eig: EigOptions,
    /// Relative threshold on imaginary parts for phase labels.
    pub phase_tol: f64,
    /// Emit eigenvalues sorted by (Re, Im) instead of tracked branches.
    pub sorted: bool,
    pub exec: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self::figure2()
    }
}

impl SweepConfig {
    /// δ₍₋₎ branch, EP at ε = −ρ. ω = 2 and ρ = 1 > 1/2; γ = 2.5 keeps
    /// γ² ≥ (ε + ρ)² on all of ε ∈ [−3, 1]. The branch spectrum does not
    /// depend on γ.
    pub fn figure1() -> Self {
        Self {
            base: ModelParams {
                omega: 2.0,
                gamma: 2.5,
                rho: 1.0,
                epsilon: 0.0,
                delta: 0.0,
                eta: 0.0,
            },
            delta: DeltaMode::AutoMinus,
            eta: EtaMode::Auto,
            param: SweepParam::Epsilon,
            from: -3.0,
            to: 1.0,
            steps: 401,
            eig: EigOptions::default(),
            phase_tol: 1e-8,
            sorted: false,
            exec: Execution::default(),
        }
    }

    /// δ₍₊₎ branch, EP at ε = ρ. ω = 2, ρ = 1/2, γ = 1 and
    /// ε ∈ [−0.4, 1.4] ⊂ [ρ − γ, ρ + γ].
    pub fn figure2() -> Self {
        Self {
            base: ModelParams {
                omega: 2.0,
                gamma: 1.0,
                rho: 0.5,
                epsilon: 0.0,
                delta: 0.0,
                eta: 0.0,
            },
            delta: DeltaMode::AutoPlus,
            eta: EtaMode::Auto,
            param: SweepParam::Epsilon,
            from: -0.4,
            to: 1.4,
            steps: 181,
            ..Self::figure1()
        }
    }

    pub fn family(&self) -> Result<SwansonFamily> {
        SwansonFamily::new(self.base, self.delta, self.eta, self.param)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Input(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if !(self.from.is_finite() && self.to.is_finite()) || !(self.from < self.to) {
            return Err(Error::Input(format!(
                "sweep range must satisfy from < to, got [{}, {}]",
                self.from, self.to
            )));
        }
        if !(self.phase_tol > 0.0) {
            return Err(Error::Input("phase tolerance must be positive".into()));
        }
        self.family()?.check_range(self.from, self.to)
    }
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub branches: [Complex64; 4],
    pub max_abs_im: f64,
    pub min_gap: f64,
    pub abs_disc: f64,
    pub phase: PhaseLabel,
}

pub const CSV_HEADER: &str =
    "t,re_e1,im_e1,re_e2,im_e2,re_e3,im_e3,re_e4,im_e4,max_abs_im,min_gap,abs_disc,phase";

/// Evaluates the sweep; rows are in ascending `t`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let family = cfg.family()?;
    let ts = grid(cfg.from, cfg.to, cfg.steps);

    let spectra: Vec<Spectrum> = try_map_indexed(ts.len(), cfg.exec, |k| {
        let t = ts[k];
        family
            .params_at(t)
            .and_then(|p| build_matrix(&p))
            .and_then(|m| eig(&m, &cfg.eig))
            .map_err(|e| Error::at(t, e))
    })?;
    for s in &spectra {
        if s.len() != 4 {
            return Err(Error::Input("sweeps are defined for 4x4 matrices".into()));
        }
    }

    let columns: Vec<Vec<Complex64>> = if cfg.sorted {
        spectra
            .iter()
            .map(|s| {
                let mut v = s.eigenvalues.clone();
                v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                v
            })
            .collect()
    } else {
        let branches = track_branches(&spectra);
        (0..spectra.len())
            .map(|k| branches.iter().map(|b| b[k]).collect())
            .collect()
    };

    ts.iter()
        .zip(&spectra)
        .zip(columns)
        .map(|((&t, spec), col)| {
            let metrics = coalescence_metrics(spec);
            let disc = discriminant_quartic(&spec.char_poly).map_err(|e| Error::at(t, e))?;
            Ok(SweepRow {
                t,
                branches: [col[0], col[1], col[2], col[3]],
                max_abs_im: metrics.max_abs_im,
                min_gap: metrics.min_gap,
                abs_disc: disc.norm(),
                phase: classify_phase(spec, cfg.phase_tol),
            })
        })
        .collect()
}

/// CSV with [`CSV_HEADER`]; floats in shortest round-trip form, LF line
/// endings.
pub fn emit_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        write!(out, "{:?}", row.t).unwrap();
        for z in &row.branches {
            write!(out, ",{:?},{:?}", z.re, z.im).unwrap();
        }
        writeln!(
            out,
            ",{:?},{:?},{:?},{}",
            row.max_abs_im, row.min_gap, row.abs_disc, row.phase
        )
        .unwrap();
    }
    out
}

/// Inverse of [`emit_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Input(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 13 {
                return Err(Error::Input(format!(
                    "line {}: expected 13 columns, got {}",
                    i + 2,
                    fields.len()
                )));
            }
            let num = |k: usize| {
                fields[k]
                    .parse::<f64>()
                    .map_err(|e| Error::Input(format!("line {}, column {}: {e}", i + 2, k + 1)))
            };
            let z = |k: usize| -> Result<Complex64> { Ok(Complex64::new(num(k)?, num(k + 1)?)) };
            Ok(SweepRow {
                t: num(0)?,
                branches: [z(1)?, z(3)?, z(5)?, z(7)?],
                max_abs_im: num(9)?,
                min_gap: num(10)?,
                abs_disc: num(11)?,
                phase: fields[12].parse()?,
            })
        })
        .collect()
}

/// Panel titles for the two plot styles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    /// δ₍₋₎ branch, EP at ε = −ρ.
    Fig1,
    /// δ₍₊₎ branch, EP at ε = ρ.
    Fig2,
}

impl std::str::FromStr for PlotStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(PlotStyle::Fig1),
            "fig2" => Ok(PlotStyle::Fig2),
            _ => Err(Error::Input(format!(
                "unknown plot style {s:?} (fig1|fig2)"
            ))),
        }
    }
}

/// Two-panel gnuplot script reading `csv_path`: real parts of the four
/// branches, then imaginary parts. A vertical line marks `ep` when given.
pub fn emit_plot_script(
    rows: &[SweepRow],
    style: PlotStyle,
    csv_path: &str,
    param: &str,
    ep: Option<f64>,
) -> String {
    let (re_title, im_title) = match style {
        PlotStyle::Fig1 => (
            "(a) Re E, delta(-) branch: E1,E2 pinned at omega",
            "(b) Im E3,E4 beyond epsilon = -rho",
        ),
        PlotStyle::Fig2 => (
            "(a) Re E, delta(+) branch: all four meet at epsilon = rho",
            "(b) Im E3,E4 below epsilon = rho",
        ),
    };
    let (lo, hi) = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) => (a.t, b.t),
        _ => (0.0, 1.0),
    };
    let path = csv_path.replace('\'', "");

    let mut s = String::new();
    writeln!(
        s,
        "# Generated by swanson-ep. Render with: gnuplot -persist <this file>"
    )
    .unwrap();
    writeln!(s, "# Data: {path} ({} rows)", rows.len()).unwrap();
    writeln!(s, "set datafile separator \",\"").unwrap();
    writeln!(s, "set xrange [{lo:?}:{hi:?}]").unwrap();
    writeln!(s, "set xlabel \"{param}\"").unwrap();
    if let Some(t) = ep {
        writeln!(
            s,
            "set arrow 1 from {t:?}, graph 0 to {t:?}, graph 1 nohead"
        )
        .unwrap();
    }
    writeln!(s, "set multiplot layout 1,2").unwrap();
    for (title, ylabel, offset) in [(re_title, "Re E", 2), (im_title, "Im E", 3)] {
        writeln!(s, "set title \"{title}\"").unwrap();
        writeln!(s, "set ylabel \"{ylabel}\"").unwrap();
        let series: Vec<String> = (0..4)
            .map(|b| {
                format!(
                    "'{path}' every ::1 using 1:{} with lines title \"E{}\"",
                    offset + 2 * b,
                    b + 1
                )
            })
            .collect();
        writeln!(s, "plot {}", series.join(", \\\n     ")).unwrap();
    }
    writeln!(s, "unset multiplot").unwrap();
    s
}
