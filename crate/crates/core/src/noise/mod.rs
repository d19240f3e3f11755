//! Symmetrized current-noise spectra.
//!
//! The resolvent route is the production path; the spectral sum and the
//! time-domain oracle are independent cross-checks, and counting-field finite
//! differences give a fourth value at zero frequency.

mod counting;
mod eigen;
mod macdonald;
mod peaks;
mod resolvent;
mod types;

pub use counting::{counting_eigenvalue, counting_fd_check, CountingFd};
pub use eigen::{EigenExpansion, EigenValue};
pub use macdonald::{noise_macdonald_oracle, DriftHandling, MacdonaldOptions};
pub use peaks::{find_peaks, find_peaks_in, Peak};
pub use resolvent::{noise_resolvent, ResolventSolver};
pub use types::{normalize, Method, NoiseSpectrum, Normalization, Pair, DENSE_LIMIT, VANISHING_CURRENT};

use crate::error::Result;
use crate::steady::{channel_current, SteadyState};
use crate::superop::{eigenvalues, Superoperator};
use types::check_dense;

/// Spectrum of one pair on a frequency grid by the chosen route.
///
/// `macdonald` needs explicit options; `None` picks a horizon from the
/// slowest relaxation rate of the generator spectrum.
pub fn noise_spectrum(
    l: &Superoperator,
    ss: &SteadyState,
    pair: Pair,
    omegas: &[f64],
    method: Method,
    normalization: Normalization,
    macdonald: Option<MacdonaldOptions>,
) -> Result<NoiseSpectrum> {
    let current = channel_current(ss, l, pair.i)?;
    let raw: Vec<f64> = match method {
        Method::Resolvent => {
            let solver = ResolventSolver::new(l, ss)?;
            omegas.iter().map(|&w| solver.noise(pair, w)).collect::<Result<_>>()?
        }
        Method::Eigen => {
            let e = EigenExpansion::new(l, ss, pair)?;
            omegas.iter().map(|&w| e.value(w).value).collect()
        }
        Method::Macdonald => {
            let opts = match macdonald {
                Some(o) => o,
                None => horizon_from_spectrum(l)?,
            };
            noise_macdonald_oracle(l, ss, pair, omegas, opts)?
        }
    };
    let values = raw
        .into_iter()
        .map(|v| normalize(v, pair, normalization, current))
        .collect::<Result<_>>()?;
    Ok(NoiseSpectrum {
        pair,
        omegas: omegas.to_vec(),
        values,
        normalization,
        method,
    })
}

/// `t_max = 40 / |Re alpha_slow|` with 2000 steps.
///
/// Needs eigenvalues only, so it works where the eigen expansion is unavailable.
pub fn horizon_from_spectrum(l: &Superoperator) -> Result<MacdonaldOptions> {
    check_dense(l.len(), "time-domain oracle")?;
    let alphas = eigenvalues(l)?;
    let zero = alphas
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(k, _)| k);
    let slow = alphas
        .iter()
        .enumerate()
        .filter(|&(k, _)| Some(k) != zero)
        .map(|(_, a)| -a.re)
        .filter(|&r| r > 0.0)
        .fold(f64::INFINITY, f64::min);
    let t_max = if slow.is_finite() { 40.0 / slow } else { 1e4 };
    Ok(MacdonaldOptions {
        t_max,
        dt: t_max / 2000.0,
        tail_tol: 1e-12,
        drift: DriftHandling::Projected,
    })
}
