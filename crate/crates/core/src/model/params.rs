use crate::{Error, Result};

/// Real parameters of the coupling matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    /// Gain/loss rate.
    pub gamma: f64,
    /// Antisymmetric coupling.
    pub rho: f64,
    /// Symmetric coupling between the two modes' first components.
    pub epsilon: f64,
    /// Magnitude of the imaginary coupling.
    pub delta: f64,
    /// Symmetric coupling between the second components.
    pub eta: f64,
}

impl ModelParams {
    pub fn new(
        omega: f64,
        gamma: f64,
        rho: f64,
        epsilon: f64,
        delta: f64,
        eta: f64,
    ) -> Result<Self> {
        let p = Self {
            omega,
            gamma,
            rho,
            epsilon,
            delta,
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.named() {
            if !v.is_finite() {
                return Err(Error::Input(format!("parameter {name} is not finite: {v}")));
            }
        }
        Ok(())
    }

    pub fn named(&self) -> [(&'static str, f64); 6] {
        [
            ("omega", self.omega),
            ("gamma", self.gamma),
            ("rho", self.rho),
            ("epsilon", self.epsilon),
            ("delta", self.delta),
            ("eta", self.eta),
        ]
    }

    /// γ, ρ, δ, η all nonnegative. ε is free; negative ε is needed to reach
    /// the region left of the ε = −ρ exceptional point.
    pub fn is_canonical(&self) -> bool {
        self.gamma >= 0.0 && self.rho >= 0.0 && self.delta >= 0.0 && self.eta >= 0.0
    }
}
