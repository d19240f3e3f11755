use num_complex::Complex64 as C64;

use super::types::Pair;
use crate::error::{Error, Result};
use crate::linalg::BandedLu;
use crate::steady::regularizing_shift;
use crate::superop::{counting_liouvillian, ChannelId, Superoperator};

/// Zero-frequency noise from derivatives of the counting-field eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingFd {
    /// `S(0)_ij = 2 (d_i d_j lambda + delta_ij d_i lambda)`.
    pub value: f64,
    /// `2 delta_ij d_i lambda`, i.e. twice the current for diagonal pairs.
    pub diagonal_term: f64,
    pub step: f64,
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.norm()))
}

/// Eigenvalue of `M(s)` continuously connected to the stationary zero mode.
///
/// Inverse iteration on `M(s) - sigma` finds the eigenvector `x`; the value
/// follows from `w M(s) = sum_c (s_c - 1) w L_c`, so
/// `lambda Tr x = sum_c (s_c - 1) Tr[L_c x]` holds exactly for any eigenvector.
pub fn counting_eigenvalue(l: &Superoperator, s: &[(ChannelId, f64)]) -> Result<f64> {
    let m = counting_liouvillian(l, s)?;
    let sigma = regularizing_shift(&l.total);
    let lu = BandedLu::factor(&m.shift_diagonal(C64::new(-sigma, 0.0)))?;
    let w = l.layout.trace_weights();
    let mut x = w.to_vec();
    let mut lambda = f64::NAN;
    for _ in 0..60 {
        lu.solve_in_place(&mut x);
        let tr = l.layout.trace(&x);
        if tr.norm() < 1e-300 || !tr.norm().is_finite() {
            return Err(Error::Numerical("counting eigenvector has vanishing trace".into()));
        }
        for v in x.iter_mut() {
            *v /= tr;
        }
        let mut next = C64::new(0.0, 0.0);
        for &(id, sv) in s {
            if sv != 1.0 {
                next += (sv - 1.0) * l.layout.trace(&l.channel(id)?.matrix.mul_vec(&x));
            }
        }
        let next = next.re;
        let res = {
            let mx = m.mul_vec(&x);
            let r: Vec<C64> = mx.iter().zip(&x).map(|(a, b)| a - next * b).collect();
            max_norm(&r) / max_norm(&x)
        };
        let done = (next - lambda).abs() <= 1e-15 * next.abs().max(1e-300) || res <= 1e-16;
        lambda = next;
        if done {
            break;
        }
    }
    if !lambda.is_finite() {
        return Err(Error::Numerical("counting eigenvalue did not converge".into()));
    }
    Ok(lambda)
}

/// Second derivative, diagonal first-derivative term and the larger first derivative.
fn derivatives(l: &Superoperator, pair: Pair, h: f64) -> Result<(f64, f64, f64)> {
    let lam = |si: f64, sj: f64| -> Result<f64> {
        if pair.is_diagonal() {
            counting_eigenvalue(l, &[(pair.i, si)])
        } else {
            counting_eigenvalue(l, &[(pair.i, si), (pair.j, sj)])
        }
    };
    if pair.is_diagonal() {
        let p = lam(1.0 + h, 1.0)?;
        let m = lam(1.0 - h, 1.0)?;
        // lambda(1) = 0 exactly
        let d1 = (p - m) / (2.0 * h);
        Ok(((p + m) / (h * h), d1, d1.abs()))
    } else {
        let pp = lam(1.0 + h, 1.0 + h)?;
        let pm = lam(1.0 + h, 1.0 - h)?;
        let mp = lam(1.0 - h, 1.0 + h)?;
        let mm = lam(1.0 - h, 1.0 - h)?;
        let di = (pp + pm - mp - mm) / (4.0 * h);
        let dj = (pp - pm + mp - mm) / (4.0 * h);
        Ok(((pp - pm - mp + mm) / (4.0 * h * h), 0.0, di.abs().max(dj.abs())))
    }
}

/// `S(0)` by central differences of the counting eigenvalue at step `1e-4`.
///
/// Halving the step must reproduce the value to `1e-6` relative to the larger
/// of the value and the channel currents; otherwise
/// the step is widened tenfold once before giving up.
pub fn counting_fd_check(l: &Superoperator, pair: Pair) -> Result<CountingFd> {
    for &id in [pair.i, pair.j].iter() {
        if !id.counted() {
            return Err(Error::InvalidInput(format!("channel {id} is not counted")));
        }
    }
    let mut last_err = String::new();
    for h in [1e-4, 1e-3] {
        let (d2, d1, d1max) = derivatives(l, pair, h)?;
        let (d2h, d1h, _) = derivatives(l, pair, h / 2.0)?;
        let v = 2.0 * (d2 + d1);
        let vh = 2.0 * (d2h + d1h);
        let scale = v.abs().max(d1max).max(1e-300);
        if (v - vh).abs() <= 1e-6 * scale {
            return Ok(CountingFd {
                value: (4.0 * vh - v) / 3.0,
                diagonal_term: 2.0 * d1h,
                step: h,
            });
        }
        last_err = format!("step {h:e}: {v:.12e} vs {vh:.12e}");
    }
    Err(Error::Numerical(format!(
        "counting-field finite differences are ill-conditioned ({last_err})"
    )))
}
