use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::steady::{fano_from, min_quadrature_from, resonator_moments};
use crate::superop::ChannelId;
use crate::system::TransportSystem;

/// Scalar observed while the cutoff grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Probe {
    CurrentE,
    MeanN,
    FanoQ,
    QuadMin,
}

impl Probe {
    pub const DEFAULT: [Probe; 2] = [Probe::CurrentE, Probe::MeanN];
    /// Adds the number-variance ratio and the minimum quadrature variance, for runs that report them.
    pub const MOMENTS: [Probe; 4] = [Probe::CurrentE, Probe::MeanN, Probe::FanoQ, Probe::QuadMin];

    fn eval(&self, sys: &TransportSystem) -> Result<f64> {
        match self {
            Probe::CurrentE => sys.current(ChannelId::E),
            Probe::MeanN => Ok(resonator_moments(&sys.steady)?.mean_n),
            Probe::FanoQ => Ok(fano_from(&resonator_moments(&sys.steady)?).value),
            Probe::QuadMin => Ok(min_quadrature_from(&resonator_moments(&sys.steady)?).value),
        }
    }
}

/// Relative change tolerance between cutoffs `N` and `N + 3`.
pub const CUTOFF_TOLERANCE: f64 = 1e-6;
const CUTOFF_LOOKAHEAD: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceStep {
    pub n_fock: usize,
    /// Largest probe change from `n_fock` to `n_fock + 3`.
    pub change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub cutoff: usize,
    pub start: usize,
    /// Change at the accepted cutoff.
    pub final_change: f64,
    /// Ladder visited, ordered by cutoff.
    pub steps: Vec<ConvergenceStep>,
    /// False when a larger cutoff showed a larger change while still above tolerance.
    pub monotone: bool,
}

/// Starting cutoff: 6 at `T = 0`, 15 at `T = omega_b`, 25 at `T = 2 omega_b`,
/// linear in between and beyond.
pub fn cutoff_start(p: &ModelParams) -> usize {
    let t = p.temperature / p.omega_b;
    let n = if t <= 1.0 {
        6.0 + 9.0 * t
    } else {
        15.0 + 10.0 * (t - 1.0)
    };
    n.ceil().max(1.0) as usize
}

/// Relative change with an absolute floor of `1e-12`.
fn relative_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-12 / CUTOFF_TOLERANCE)
}

struct Ladder<'a> {
    params: ModelParams,
    probes: &'a [Probe],
    values: BTreeMap<usize, Vec<f64>>,
    changes: BTreeMap<usize, f64>,
}

impl Ladder<'_> {
    fn probe(&mut self, n: usize) -> Result<Vec<f64>> {
        if let Some(v) = self.values.get(&n) {
            return Ok(v.clone());
        }
        let sys = TransportSystem::new(&self.params.with_n_fock(n))?;
        let v = self.probes.iter().map(|p| p.eval(&sys)).collect::<Result<Vec<_>>>()?;
        self.values.insert(n, v.clone());
        Ok(v)
    }

    fn change(&mut self, n: usize) -> Result<f64> {
        if let Some(&c) = self.changes.get(&n) {
            return Ok(c);
        }
        let a = self.probe(n)?;
        let b = self.probe(n + CUTOFF_LOOKAHEAD)?;
        let c = a
            .iter()
            .zip(&b)
            .map(|(x, y)| relative_change(*x, *y))
            .fold(0.0, f64::max);
        self.changes.insert(n, c);
        Ok(c)
    }
}

/// Smallest cutoff `N` for which moving to `N + 3` changes every probe by
/// less than `1e-6` relative.
///
/// Walks up from [`cutoff_start`] until converged, or down while the
/// criterion still holds.
pub fn fock_convergence(params: &ModelParams, probes: &[Probe], cap: usize) -> Result<ConvergenceReport> {
    params.validate()?;
    if probes.is_empty() {
        return Err(Error::InvalidInput("at least one convergence probe is required".into()));
    }
    let start = cutoff_start(params).min(cap.max(1));
    let mut ladder = Ladder {
        params: *params,
        probes,
        values: BTreeMap::new(),
        changes: BTreeMap::new(),
    };
    let mut n = start;
    let cutoff = if ladder.change(n)? < CUTOFF_TOLERANCE {
        while n > 1 && ladder.change(n - 1)? < CUTOFF_TOLERANCE {
            n -= 1;
        }
        n
    } else {
        loop {
            if n >= cap {
                return Err(Error::CutoffNotConverged {
                    cap,
                    last_change: ladder.changes[&n],
                });
            }
            n += 1;
            if ladder.change(n)? < CUTOFF_TOLERANCE {
                break n;
            }
        }
    };
    let steps: Vec<ConvergenceStep> = ladder
        .changes
        .iter()
        .map(|(&n_fock, &change)| ConvergenceStep { n_fock, change })
        .collect();
    let monotone = steps
        .windows(2)
        .all(|w| w[1].change <= w[0].change || w[1].change < CUTOFF_TOLERANCE);
    Ok(ConvergenceReport {
        cutoff,
        start,
        final_change: ladder.changes[&cutoff],
        steps,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_values() {
        let mut p = ModelParams::default();
        assert_eq!(cutoff_start(&p), 6);
        p.temperature = 1.0;
        assert_eq!(cutoff_start(&p), 15);
        p.temperature = 2.0;
        assert_eq!(cutoff_start(&p), 25);
        p.temperature = 0.5;
        assert_eq!(cutoff_start(&p), 11);
    }

    #[test]
    fn vacuum_needs_one_level() {
        let r = fock_convergence(&ModelParams::default(), &Probe::DEFAULT, 45).unwrap();
        assert_eq!(r.cutoff, 1);
    }

    #[test]
    fn cap_is_reported() {
        let p = ModelParams {
            g: 0.2,
            temperature: 2.0,
            ..ModelParams::default()
        };
        match fock_convergence(&p, &Probe::DEFAULT, 8) {
            Err(Error::CutoffNotConverged { cap: 8, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
