use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::types::{check_dense, Pair};
use crate::error::{Error, Result};
use crate::linalg::{expm, CsrMatrix};
use crate::model::ModelParams;
use crate::steady::{channel_current, SteadyState};
use crate::superop::Superoperator;

/// How the long-time constant `I_i I_j` of the correlation is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftHandling {
    /// Propagate `Q L_j rho`, which decays to zero.
    Projected,
    /// Propagate `L_j rho` unprojected and subtract `2 I_i I_j` from the integrand.
    Subtracted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacdonaldOptions {
    pub t_max: f64,
    pub dt: f64,
    /// Stop once `|eta(t)| < tail_tol |eta(0)|`.
    pub tail_tol: f64,
    pub drift: DriftHandling,
}

impl MacdonaldOptions {
    /// `t_max = 40 / gamma_min`, 2000 steps.
    pub fn for_params(p: &ModelParams) -> Self {
        let rates = [p.gamma_l, p.gamma_r, p.gamma_b];
        let gmin = rates.iter().copied().filter(|&r| r > 0.0).fold(f64::INFINITY, f64::min);
        let t_max = if gmin.is_finite() { 40.0 / gmin } else { 1e4 };
        MacdonaldOptions {
            t_max,
            dt: t_max / 2000.0,
            tail_tol: 1e-12,
            drift: DriftHandling::Projected,
        }
    }

    pub fn with_drift(mut self, drift: DriftHandling) -> Self {
        self.drift = drift;
        self
    }
}

fn norm(v: &Array1<C64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.norm()))
}

/// `y(h)` for `y' = (L + i omega) y + zeta`, `y(0) = 0`, by Taylor substeps.
fn phi_apply(l: &CsrMatrix, lnorm: f64, omega: f64, h: f64, zeta: &[C64]) -> Vec<C64> {
    let n = zeta.len();
    let anorm = lnorm + omega.abs();
    let sub = ((anorm * h) / 0.5).ceil().max(1.0) as usize;
    let delta = h / sub as f64;
    let iw = C64::new(0.0, omega);
    let mut y = vec![C64::new(0.0, 0.0); n];
    let mut tmp = vec![C64::new(0.0, 0.0); n];
    for _ in 0..sub {
        // v = A y + zeta, then y += sum_k delta^k / k! A^{k-1} v
        l.mul_vec_into(&y, &mut tmp);
        let mut v: Vec<C64> = tmp.iter().zip(&y).zip(zeta).map(|((a, x), z)| a + iw * x + z).collect();
        let mut coeff = delta;
        let vnorm0 = v.iter().fold(0.0, |m: f64, x| m.max(x.norm()));
        for k in 1..40 {
            for (yi, vi) in y.iter_mut().zip(&v) {
                *yi += coeff * vi;
            }
            let vn = v.iter().fold(0.0, |m: f64, x| m.max(x.norm()));
            if vn * coeff <= 1e-17 * vnorm0.max(1e-300) * delta || vn == 0.0 {
                break;
            }
            l.mul_vec_into(&v, &mut tmp);
            for (vi, ti) in v.iter_mut().zip(&tmp) {
                *vi = ti + iw * *vi;
            }
            coeff *= delta / (k + 1) as f64;
        }
    }
    y
}

/// Symmetrized noise from the time-domain correlation,
/// `S(omega)/2 = delta_ij I_i + Re int_0^inf e^{i omega t} [w L_i e^{L t} Q L_j rho + (i <-> j)] dt`.
///
/// The propagator over one step is a dense matrix exponential; within a step
/// the Fourier weight is integrated exactly with a Taylor-series solution of
/// the forced equation. Runs on small cutoffs only.
pub fn noise_macdonald_oracle(
    l: &Superoperator,
    ss: &SteadyState,
    pair: Pair,
    omegas: &[f64],
    opts: MacdonaldOptions,
) -> Result<Vec<f64>> {
    if !(opts.t_max > 0.0 && opts.dt > 0.0 && opts.dt <= opts.t_max) {
        return Err(Error::InvalidInput(format!(
            "invalid horizon t_max={} dt={}",
            opts.t_max, opts.dt
        )));
    }
    check_dense(l.len(), "time-domain oracle")?;
    let n = l.len();
    let rho = Array1::from(ss.vector.clone());
    let w = ss.layout.trace_weights().to_vec();
    let ii = channel_current(ss, l, pair.i)?;
    let ij = channel_current(ss, l, pair.j)?;

    let prop: Array2<C64> = expm(&l.total.to_dense().mapv(|x| x * opts.dt));
    let lnorm = (0..n)
        .map(|r| l.total.row(r).map(|(_, v)| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);

    let project = |v: Vec<C64>| -> Array1<C64> {
        let t: C64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
        Array1::from_iter(v.iter().zip(rho.iter()).map(|(x, r)| x - r * t))
    };
    let start = |id| -> Result<Array1<C64>> {
        let b = l.channel(id)?.matrix.mul_vec(&ss.vector);
        Ok(match opts.drift {
            DriftHandling::Projected => project(b),
            DriftHandling::Subtracted => Array1::from(b),
        })
    };
    let mut etas = vec![start(pair.j)?];
    if !pair.is_diagonal() {
        etas.push(start(pair.i)?);
    }
    let tail = |e: &Array1<C64>| match opts.drift {
        DriftHandling::Projected => norm(e),
        DriftHandling::Subtracted => norm(&project(e.to_vec())),
    };
    let ref_norms: Vec<f64> = etas.iter().map(|e| tail(e).max(1e-300)).collect();

    let steps = (opts.t_max / opts.dt).ceil() as usize;
    let mut zetas = vec![vec![Array1::<C64>::zeros(n); omegas.len()]; etas.len()];
    let mut phase_sums = vec![C64::new(0.0, 0.0); omegas.len()];
    let mut history = Vec::with_capacity(steps + 1);
    let mut converged = false;
    for k in 0..=steps {
        let t = k as f64 * opts.dt;
        for (o, &om) in omegas.iter().enumerate() {
            let ph = C64::from_polar(1.0, om * t);
            phase_sums[o] += ph;
            for (e, eta) in etas.iter().enumerate() {
                zetas[e][o].scaled_add(ph, eta);
            }
        }
        let rel = etas
            .iter()
            .zip(&ref_norms)
            .map(|(e, r)| tail(e) / r)
            .fold(0.0, f64::max);
        history.push(rel);
        if rel < opts.tail_tol {
            converged = true;
            break;
        }
        if k < steps {
            for eta in etas.iter_mut() {
                *eta = prop.dot(eta);
            }
        }
    }
    if !converged {
        let last = *history.last().unwrap();
        let mid = history[history.len() / 2].max(1e-300);
        let span = opts.t_max / 2.0;
        let rate = (mid / last.max(1e-300)).ln() / span;
        let suggested = if rate > 0.0 && last > 0.0 {
            1.2 * (opts.t_max + (last / opts.tail_tol).ln() / rate)
        } else {
            2.0 * opts.t_max
        };
        return Err(Error::HorizonTooShort {
            message: format!(
                "correlation tail {last:.3e} above {:.1e} at t_max={}",
                opts.tail_tol, opts.t_max
            ),
            suggested_t_max: suggested,
        });
    }

    let li = &l.channel(pair.i)?.matrix;
    let lj = &l.channel(pair.j)?.matrix;
    let ri = li.vec_mul(&w);
    let rj = lj.vec_mul(&w);
    let dotv = |a: &[C64], b: &[C64]| -> C64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut out = Vec::with_capacity(omegas.len());
    for (o, &om) in omegas.iter().enumerate() {
        let yj = phi_apply(&l.total, lnorm, om, opts.dt, zetas[0][o].as_slice().unwrap());
        let cross = if pair.is_diagonal() {
            2.0 * dotv(&ri, &yj)
        } else {
            let yi = phi_apply(&l.total, lnorm, om, opts.dt, zetas[1][o].as_slice().unwrap());
            dotv(&ri, &yj) + dotv(&rj, &yi)
        };
        let drift = match opts.drift {
            DriftHandling::Projected => C64::new(0.0, 0.0),
            DriftHandling::Subtracted => {
                let seg = if om == 0.0 {
                    C64::new(opts.dt, 0.0)
                } else {
                    (C64::from_polar(1.0, om * opts.dt) - 1.0) / C64::new(0.0, om)
                };
                2.0 * ii * ij * seg * phase_sums[o]
            }
        };
        let shot = if pair.is_diagonal() { ii } else { 0.0 };
        out.push(2.0 * (shot + (cross - drift).re));
    }
    Ok(out)
}
