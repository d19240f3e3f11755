use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::convergence::{fock_convergence, ConvergenceReport, Probe};
use super::spec::{AxisParam, Quantity, SweepSpec};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::noise::normalize;
use crate::steady::{fano_from, min_quadrature_from, resonator_moments};
use crate::system::TransportSystem;

/// A grid point or quantity that could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridFailure {
    pub index: Vec<usize>,
    /// `None` when the whole point failed.
    pub quantity: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub spec: SweepSpec,
    pub axis_values: Vec<Vec<f64>>,
    pub shape: Vec<usize>,
    /// Row-major, last axis fastest; `None` marks a gap.
    pub data: BTreeMap<String, Vec<Option<f64>>>,
    pub cutoff_used: usize,
    /// Absent when the cutoff was fixed.
    pub convergence_report: Option<ConvergenceReport>,
    pub failures: Vec<GridFailure>,
}

impl GridResult {
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn get(&self, quantity: &str, idx: &[usize]) -> Option<f64> {
        self.data.get(quantity)?[self.flat_index(idx)]
    }

    /// Values along the last axis at a fixed first-axis index.
    pub fn row(&self, quantity: &str, i: usize) -> Vec<Option<f64>> {
        let data = &self.data[quantity];
        if self.shape.len() == 1 {
            return data.clone();
        }
        let n = self.shape[1];
        data[i * n..(i + 1) * n].to_vec()
    }
}

fn unravel(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for d in (0..shape.len()).rev() {
        idx[d] = flat % shape[d];
        flat /= shape[d];
    }
    idx
}

/// Parameter values at which the cutoff is probed: min, middle and max of
/// every non-frequency axis.
fn probe_points(spec: &SweepSpec) -> Vec<ModelParams> {
    let mut points = vec![spec.base];
    for a in spec.axes.iter().filter(|a| a.param != AxisParam::Omega) {
        let mut v = a.values.values();
        v.sort_by(f64::total_cmp);
        let picks = [v[0], v[v.len() / 2], v[v.len() - 1]];
        points = points
            .iter()
            .flat_map(|p| {
                picks.iter().map(move |&x| {
                    let mut q = *p;
                    a.param.apply(&mut q, x);
                    q
                })
            })
            .collect();
    }
    points.dedup();
    points
}

/// Largest converged cutoff over the probe points.
pub fn sweep_cutoff(spec: &SweepSpec) -> Result<(usize, Option<ConvergenceReport>)> {
    if let Some(n) = spec.fock.fixed {
        return Ok((n, None));
    }
    let probes: &[Probe] = if spec
        .quantities
        .iter()
        .any(|q| matches!(q, Quantity::FanoQ | Quantity::QuadMin))
    {
        &Probe::MOMENTS
    } else {
        &Probe::DEFAULT
    };
    let reports = probe_points(spec)
        .par_iter()
        .map(|p| fock_convergence(p, probes, spec.fock.cap))
        .collect::<Result<Vec<_>>>()?;
    let best = reports
        .into_iter()
        .reduce(|a, b| if b.cutoff > a.cutoff { b } else { a })
        .expect("at least one probe point");
    Ok((best.cutoff, Some(best)))
}

struct GroupOutput {
    values: Vec<(usize, Vec<Option<f64>>)>,
    failures: Vec<(GridFailure, Error)>,
}

fn eval_group(
    spec: &SweepSpec,
    axis_values: &[Vec<f64>],
    shape: &[usize],
    cutoff: usize,
    points: &[usize],
) -> GroupOutput {
    let nq = spec.quantities.len();
    let omega_axis = spec.omega_axis();
    let first = unravel(points[0], shape);
    let mut params = spec.base.with_n_fock(cutoff);
    for (d, a) in spec.axes.iter().enumerate() {
        a.param.apply(&mut params, axis_values[d][first[d]]);
    }
    let mut out = GroupOutput {
        values: Vec::with_capacity(points.len()),
        failures: Vec::new(),
    };
    let sys = match TransportSystem::new(&params) {
        Ok(s) => s,
        Err(e) => {
            for &p in points {
                out.values.push((p, vec![None; nq]));
            }
            out.failures.push((
                GridFailure {
                    index: first,
                    quantity: None,
                    message: e.to_string(),
                },
                e,
            ));
            return out;
        }
    };
    let solver = sys.resolvent();
    let moments = resonator_moments(&sys.steady);
    for &p in points {
        let idx = unravel(p, shape);
        let omega = omega_axis.map_or(0.0, |d| axis_values[d][idx[d]]);
        let mut row = Vec::with_capacity(nq);
        for q in &spec.quantities {
            let v: Result<f64> = match *q {
                Quantity::Noise { pair, normalization } => solver
                    .as_ref()
                    .map_err(|e| Error::Numerical(e.to_string()))
                    .and_then(|s| s.noise(pair, omega))
                    .and_then(|raw| normalize(raw, pair, normalization, sys.current(pair.i)?)),
                Quantity::Current(id) => sys.current(id),
                Quantity::FanoQ => moments
                    .as_ref()
                    .map(|m| fano_from(m).value)
                    .map_err(|e| Error::Numerical(e.to_string())),
                Quantity::QuadMin => moments
                    .as_ref()
                    .map(|m| min_quadrature_from(m).value)
                    .map_err(|e| Error::Numerical(e.to_string())),
            };
            match v {
                Ok(x) if x.is_finite() => row.push(Some(x)),
                Ok(x) => {
                    row.push(None);
                    out.failures.push((
                        GridFailure {
                            index: idx.clone(),
                            quantity: Some(q.name()),
                            message: format!("non-finite value {x}"),
                        },
                        Error::Numerical(format!("{q} is non-finite at {idx:?}")),
                    ));
                }
                Err(e) => {
                    row.push(None);
                    out.failures.push((
                        GridFailure {
                            index: idx.clone(),
                            quantity: Some(q.name()),
                            message: e.to_string(),
                        },
                        e,
                    ));
                }
            }
        }
        out.values.push((p, row));
    }
    out
}

/// Evaluates every quantity on the grid with `workers` threads.
///
/// Points sharing all non-frequency parameters form one work unit, so the
/// steady state is solved once per unit. Output order and values do not
/// depend on the worker count.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<GridResult> {
    spec.validate()?;
    if workers == 0 {
        return Err(Error::InvalidInput("workers must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(spec))
}

fn run_in_pool(spec: &SweepSpec) -> Result<GridResult> {
    let (cutoff, report) = sweep_cutoff(spec)?;
    let axis_values: Vec<Vec<f64>> = spec.axes.iter().map(|a| a.values.values()).collect();
    let shape = spec.shape();
    let total: usize = shape.iter().product();
    let omega_axis = spec.omega_axis();

    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for p in 0..total {
        let mut key = unravel(p, &shape);
        if let Some(d) = omega_axis {
            key[d] = 0;
        }
        groups.entry(key).or_default().push(p);
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let outputs: Vec<GroupOutput> = groups
        .par_iter()
        .map(|pts| eval_group(spec, &axis_values, &shape, cutoff, pts))
        .collect();

    let nq = spec.quantities.len();
    let mut columns = vec![vec![None; total]; nq];
    let mut failures = Vec::new();
    for g in outputs {
        for (p, row) in g.values {
            for (q, v) in row.into_iter().enumerate() {
                columns[q][p] = v;
            }
        }
        for (f, e) in g.failures {
            if spec.fail_fast {
                return Err(e);
            }
            failures.push(f);
        }
    }
    failures.sort_by(|a, b| a.index.cmp(&b.index));
    let data = spec
        .quantities
        .iter()
        .zip(columns)
        .map(|(q, c)| (q.name(), c))
        .collect();
    Ok(GridResult {
        spec: spec.clone(),
        axis_values,
        shape,
        data,
        cutoff_used: cutoff,
        convergence_report: report,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::spec::{AxisSpec, FockPolicy};

    fn small() -> SweepSpec {
        let mut s = SweepSpec::new(
            ModelParams {
                g: 0.2,
                ..ModelParams::default()
            },
            vec![
                AxisSpec::list(AxisParam::Temperature, &[0.0, 0.5]),
                AxisSpec::range(AxisParam::Omega, 0.5, 1.5, 5),
            ],
            vec![Quantity::S_EE, Quantity::S_BB, Quantity::FanoQ],
        );
        s.fock = FockPolicy {
            fixed: Some(4),
            cap: 45,
        };
        s
    }

    #[test]
    fn shape_and_gaps() {
        let r = run_sweep(&small(), 1).unwrap();
        assert_eq!(r.shape, vec![2, 5]);
        assert_eq!(r.data["S_ee"].len(), 10);
        assert!(r.data["S_ee"].iter().all(|v| v.is_some()));
        assert!(r.failures.is_empty());
        // omega does not enter F_Q
        let row = r.row("F_Q", 1);
        assert!(row.iter().all(|v| v == &row[0]));
    }

    #[test]
    fn worker_count_is_invisible() {
        let a = run_sweep(&small(), 1).unwrap();
        let b = run_sweep(&small(), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn undefined_fano_becomes_gap() {
        let mut s = small();
        s.base.g = 0.0;
        s.axes[0] = AxisSpec::list(AxisParam::Temperature, &[0.0, 0.0]);
        let r = run_sweep(&s, 1).unwrap();
        assert!(r.data["S_bb"].iter().all(|v| v.is_none()));
        assert_eq!(r.failures.len(), 10);
        s.fail_fast = true;
        assert!(run_sweep(&s, 1).is_err());
    }
}
