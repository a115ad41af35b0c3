use std::fmt;
use std::str::FromStr;

use super::{build_matrix, delta_minus, delta_plus, ModelParams};
use crate::ep::MatrixFamily;
use crate::linalg::ComplexMatrix;
use crate::{Error, Result};

/// How δ is chosen at each point of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaMode {
    Value(f64),
    /// δ = δ₍₋₎(γ, ε, ρ), recomputed per point.
    AutoMinus,
    /// δ = δ₍₊₎(γ, ε, ρ), recomputed per point.
    AutoPlus,
}

/// How η is chosen at each point of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaMode {
    Value(f64),
    /// η = −ε.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Omega,
    Gamma,
    Rho,
    Epsilon,
    Delta,
    Eta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Omega => "omega",
            SweepParam::Gamma => "gamma",
            SweepParam::Rho => "rho",
            SweepParam::Epsilon => "epsilon",
            SweepParam::Delta => "delta",
            SweepParam::Eta => "eta",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "omega" => SweepParam::Omega,
            "gamma" => SweepParam::Gamma,
            "rho" => SweepParam::Rho,
            "epsilon" => SweepParam::Epsilon,
            "delta" => SweepParam::Delta,
            "eta" => SweepParam::Eta,
            _ => return Err(Error::Input(format!("unknown sweep parameter {s:?}"))),
        })
    }
}

impl fmt::Display for DeltaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaMode::Value(v) => write!(f, "{v}"),
            DeltaMode::AutoMinus => f.write_str("auto-minus"),
            DeltaMode::AutoPlus => f.write_str("auto-plus"),
        }
    }
}

impl FromStr for DeltaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto-minus" => Ok(DeltaMode::AutoMinus),
            "auto-plus" => Ok(DeltaMode::AutoPlus),
            _ => parse_finite(s, "delta").map(DeltaMode::Value),
        }
    }
}

impl fmt::Display for EtaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaMode::Value(v) => write!(f, "{v}"),
            EtaMode::Auto => f.write_str("auto"),
        }
    }
}

impl FromStr for EtaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(EtaMode::Auto),
            _ => parse_finite(s, "eta").map(EtaMode::Value),
        }
    }
}

fn parse_finite(s: &str, what: &str) -> Result<f64> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Input(format!(
            "{what}: expected a finite number, got {s:?}"
        ))),
    }
}

/// One-parameter family of coupling matrices: `base` with `param` replaced
/// by `t`, then δ and η resolved from their modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwansonFamily {
    pub base: ModelParams,
    pub delta: DeltaMode,
    pub eta: EtaMode,
    pub param: SweepParam,
}

impl SwansonFamily {
    pub fn new(
        base: ModelParams,
        delta: DeltaMode,
        eta: EtaMode,
        param: SweepParam,
    ) -> Result<Self> {
        base.validate()?;
        match (param, delta, eta) {
            (SweepParam::Delta, DeltaMode::AutoMinus | DeltaMode::AutoPlus, _) => Err(
                Error::Input("cannot sweep delta while it is derived from the auto mode".into()),
            ),
            (SweepParam::Eta, _, EtaMode::Auto) => Err(Error::Input(
                "cannot sweep eta while it is derived from epsilon".into(),
            )),
            _ => Ok(Self {
                base,
                delta,
                eta,
                param,
            }),
        }
    }

    /// Parameters at `t` before δ is resolved.
    fn raw_at(&self, t: f64) -> ModelParams {
        let mut p = self.base;
        match self.param {
            SweepParam::Omega => p.omega = t,
            SweepParam::Gamma => p.gamma = t,
            SweepParam::Rho => p.rho = t,
            SweepParam::Epsilon => p.epsilon = t,
            SweepParam::Delta => p.delta = t,
            SweepParam::Eta => p.eta = t,
        }
        if let EtaMode::Value(v) = self.eta {
            if self.param != SweepParam::Eta {
                p.eta = v;
            }
        }
        if let DeltaMode::Value(v) = self.delta {
            if self.param != SweepParam::Delta {
                p.delta = v;
            }
        }
        p
    }

    /// Fully resolved parameters at `t`.
    pub fn params_at(&self, t: f64) -> Result<ModelParams> {
        if !t.is_finite() {
            return Err(Error::Input(format!("sweep value is not finite: {t}")));
        }
        let mut p = self.raw_at(t);
        if self.eta == EtaMode::Auto {
            p.eta = -p.epsilon;
        }
        match self.delta {
            DeltaMode::AutoMinus => p.delta = delta_minus(p.gamma, p.epsilon, p.rho)?,
            DeltaMode::AutoPlus => p.delta = delta_plus(p.gamma, p.epsilon, p.rho)?,
            DeltaMode::Value(_) => {}
        }
        Ok(p)
    }

    /// Checks that the δ radicand is nonnegative on all of `[lo, hi]`.
    ///
    /// The radicand `γ² − (ε ± ρ)²` is concave in ε and ρ, so the endpoints
    /// suffice for those; in γ it is smallest at `|γ|` minimal, so γ = 0 is
    /// added when the range straddles it.
    pub fn check_range(&self, lo: f64, hi: f64) -> Result<()> {
        if !(lo.is_finite() && hi.is_finite()) || !(lo < hi) {
            return Err(Error::Input(format!("invalid range [{lo}, {hi}]")));
        }
        let mut probes = vec![lo, hi];
        if self.param == SweepParam::Gamma && lo < 0.0 && hi > 0.0 {
            probes.push(0.0);
        }
        for t in probes {
            self.params_at(t).map_err(|e| match e {
                Error::Domain(msg) => Error::Domain(format!(
                    "{} = {t} lies outside the admissible range: {msg}",
                    self.param
                )),
                other => other,
            })?;
        }
        Ok(())
    }
}

impl MatrixFamily for SwansonFamily {
    fn evaluate(&self, t: f64) -> Result<ComplexMatrix> {
        build_matrix(&self.params_at(t)?)
    }

    fn parameter_name(&self) -> &str {
        self.param.name()
    }

    fn validate_range(&self, lo: f64, hi: f64) -> Result<()> {
        self.check_range(lo, hi)
    }
}
