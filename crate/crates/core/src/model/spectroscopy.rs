use ndarray_linalg::{Eigh, UPLO};
use serde::Serialize;

use super::operators::OperatorMatrix;
use super::params::ModelParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergySpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `(i, j, |lambda_i - lambda_j|)`.
    pub gaps: Vec<(usize, usize, f64)>,
}

impl EnergySpectrum {
    pub fn of(h: &OperatorMatrix) -> Result<Self> {
        let (w, _) = h
            .eigh(UPLO::Lower)
            .map_err(|e| Error::Numerical(format!("Hermitian eigensolver: {e}")))?;
        let mut eigenvalues = w.to_vec();
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(EnergySpectrum {
            eigenvalues,
            gaps: Vec::new(),
        })
    }

    pub fn with_gaps(mut self, pairs: &[(usize, usize)]) -> Self {
        for &(i, j) in pairs {
            let d = (self.eigenvalues[i] - self.eigenvalues[j]).abs();
            self.gaps.push((i, j, d));
        }
        self
    }
}

/// Exact eigenvalues `(E_plus, E_minus)` of the rotating-wave block coupling
/// `|1_x, n>` and `|0_x, n+1>`.
///
/// For n = 0 this is `omega_b/2 +/- sqrt(Omega^2 + 4 g^2)/2` with `Omega = omega_b - 2 Delta`.
pub fn jc_multiplet_energies(params: &ModelParams, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let upper = params.delta + nf * params.omega_b;
    let lower = -params.delta + (nf + 1.0) * params.omega_b;
    let c = params.g * (nf + 1.0).sqrt();
    let mean = 0.5 * (upper + lower);
    let half = (0.25 * (upper - lower).powi(2) + c * c).sqrt();
    (mean + half, mean - half)
}

/// Ground energy of the charged rotating-wave spectrum, `-Delta`.
pub fn jc_ground_energy(params: &ModelParams) -> f64 {
    -params.delta
}

/// Predicted noise resonances `(dE1, dE2, dE3)`:
/// `|omega_b/2 +/- sqrt(Omega^2 + 4 g^2)/2 + Delta|` and `2 Delta`.
pub fn resonance_branches(params: &ModelParams) -> (f64, f64, f64) {
    let omega = params.detuning();
    let root = (omega * omega + 4.0 * params.g * params.g).sqrt();
    let centre = 0.5 * params.omega_b + params.delta;
    let d1 = (centre + 0.5 * root).abs();
    let d2 = (centre - 0.5 * root).abs();
    (d1, d2, 2.0 * params.delta)
}

/// Electron spin gyromagnetic ratio used for the Rabi estimate, Hz per tesla.
pub const SPIN_HZ_PER_TESLA: f64 = 28.0e9;

/// Field at zero-point displacement and the matching spin Rabi frequency.
///
/// Inputs in mT/nm and nm; returns `(field_mT, rabi_Hz)`.
pub fn spin_estimates(field_gradient_mt_per_nm: f64, x_zp_nm: f64) -> Result<(f64, f64)> {
    if !(field_gradient_mt_per_nm > 0.0 && x_zp_nm > 0.0) {
        return Err(Error::InvalidInput("gradient and x_zp must be positive".into()));
    }
    let field_mt = field_gradient_mt_per_nm * x_zp_nm;
    let rabi_hz = SPIN_HZ_PER_TESLA * field_mt * 1e-3;
    Ok((field_mt, rabi_hz))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(delta: f64, g: f64) -> ModelParams {
        ModelParams {
            delta,
            g,
            ..ModelParams::default()
        }
    }

    #[test]
    fn closed_form_on_resonance() {
        let (ep, em) = jc_multiplet_energies(&p(0.5, 0.2), 0);
        assert!((ep - 0.7).abs() < 1e-14 && (em - 0.3).abs() < 1e-14);
    }

    #[test]
    fn closed_form_off_resonance() {
        let (ep, em) = jc_multiplet_energies(&p(0.3, 0.1), 0);
        let h = 0.2f64.sqrt() / 2.0;
        assert!((ep - (0.5 + h)).abs() < 1e-14);
        assert!((em - (0.5 - h)).abs() < 1e-14);
        assert!((ep - 0.72361).abs() < 1e-5 && (em - 0.27639).abs() < 1e-5);
    }

    #[test]
    fn uncoupled_multiplet() {
        let (ep, em) = jc_multiplet_energies(&p(0.3, 0.0), 0);
        assert!((ep - 0.7).abs() < 1e-14 && (em - 0.3).abs() < 1e-14);
    }

    #[test]
    fn branches() {
        let (a, b, c) = resonance_branches(&p(0.5, 0.4));
        assert_eq!((a, b, c), (2.0 * 0.5 + 0.4, 2.0 * 0.5 - 0.4, 1.0));
        assert_eq!(resonance_branches(&p(0.5, 0.0)), (1.0, 1.0, 1.0));
        let (a, b, c) = resonance_branches(&p(0.3, 0.1));
        assert!((a - 1.02361).abs() < 1e-5 && (b - 0.57639).abs() < 1e-5 && c == 0.6);
    }

    #[test]
    fn spin_numbers() {
        let (f, r) = spin_estimates(0.16, 2e-5).unwrap();
        assert!((f - 3.2e-6).abs() < 1e-18);
        assert!((r - 89.6).abs() < 1e-9);
        assert!((r - 100.0).abs() / 100.0 <= 0.3);
        let (f2, r2) = spin_estimates(0.16, 4e-5).unwrap();
        assert!((f2 / f - 2.0).abs() < 1e-12 && (r2 / r - 2.0).abs() < 1e-12);
        assert!(spin_estimates(-1.0, 1.0).is_err());
    }
}
