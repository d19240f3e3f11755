use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of one run, in units with hbar = k_B = e = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Dot detuning.
    pub epsilon: f64,
    /// Coherent inter-dot tunneling.
    pub delta: f64,
    /// Dot-resonator coupling.
    pub g: f64,
    pub omega_b: f64,
    pub gamma_l: f64,
    pub gamma_r: f64,
    /// Resonator damping into its thermal bath.
    pub gamma_b: f64,
    pub temperature: f64,
    /// Highest retained Fock state.
    pub n_fock: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            epsilon: 0.0,
            delta: 0.5,
            g: 0.0,
            omega_b: 1.0,
            gamma_l: 0.01,
            gamma_r: 0.01,
            gamma_b: 0.05,
            temperature: 0.0,
            n_fock: 6,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("epsilon", self.epsilon),
            ("delta", self.delta),
            ("g", self.g),
            ("omega_b", self.omega_b),
            ("gamma_l", self.gamma_l),
            ("gamma_r", self.gamma_r),
            ("gamma_b", self.gamma_b),
            ("temperature", self.temperature),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [
            ("gamma_l", self.gamma_l),
            ("gamma_r", self.gamma_r),
            ("gamma_b", self.gamma_b),
        ] {
            if v < 0.0 {
                return Err(Error::InvalidInput(format!("rate {name} must be >= 0, got {v}")));
            }
        }
        if self.omega_b <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "omega_b must be > 0, got {}",
                self.omega_b
            )));
        }
        if self.temperature < 0.0 {
            return Err(Error::InvalidInput(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        if self.n_fock < 1 {
            return Err(Error::InvalidInput("n_fock must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_n_fock(mut self, n: usize) -> Self {
        self.n_fock = n;
        self
    }

    /// Detuning Omega = omega_b - 2 Delta between resonator and qubit splitting.
    pub fn detuning(&self) -> f64 {
        self.omega_b - 2.0 * self.delta
    }
}
