use num_complex::Complex64 as C64;

use super::types::{check_dense, Pair};
use crate::error::{Error, Result};
use crate::steady::{channel_current, SteadyState};
use crate::superop::{ChannelId, Superoperator};

/// Spectral-sum representation of a noise pair.
///
/// With `L = sum_k alpha_k r_k l_k`, the raw noise is
/// `S(omega) = 2 delta_ij I_i - 2 sum_{k != 0} A_k alpha_k / (omega^2 + alpha_k^2)`,
/// `A_k = (w L_i r_k)(l_k L_j rho) + (w L_j r_k)(l_k L_i rho)`. Complex
/// conjugate modes pair up so the sum is real; any imaginary leftover is
/// reported as a residue.
#[derive(Debug, Clone)]
pub struct EigenExpansion {
    pub pair: Pair,
    /// Shot term `delta_ij I_i`.
    pub shot: f64,
    pub current_i: f64,
    /// `(alpha_k, A_k)` for every non-stationary mode.
    pub modes: Vec<(C64, C64)>,
}

/// One evaluation with its imaginary leftover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenValue {
    pub value: f64,
    pub imag_residue: f64,
    /// `2|shot| + 2 sum_k |A_k alpha_k / (omega^2 + alpha_k^2)|`, the scale of round-off in the sum.
    pub magnitude: f64,
}

fn weights(
    l: &Superoperator,
    ss: &SteadyState,
    id: ChannelId,
    left: &ndarray::Array2<C64>,
    right: &ndarray::Array2<C64>,
) -> Result<(Vec<C64>, Vec<C64>)> {
    let m = &l.channel(id)?.matrix;
    // row vector w L_i, then projected on the right eigenvectors
    let row = m.vec_mul(ss.layout.trace_weights());
    let a: Vec<C64> = (0..right.ncols())
        .map(|k| row.iter().zip(right.column(k)).map(|(x, y)| x * y).sum())
        .collect();
    let col = m.mul_vec(&ss.vector);
    let b: Vec<C64> = (0..left.nrows())
        .map(|k| left.row(k).iter().zip(&col).map(|(x, y)| x * y).sum())
        .collect();
    Ok((a, b))
}

impl EigenExpansion {
    pub fn new(l: &Superoperator, ss: &SteadyState, pair: Pair) -> Result<Self> {
        if ss.vector.len() != l.len() {
            return Err(Error::InvalidInput("steady state does not match the generator".into()));
        }
        check_dense(l.len(), "eigen expansion")?;
        let spec = l.spectrum()?;
        let (ai, bi) = weights(l, ss, pair.i, &spec.left, &spec.right)?;
        let (aj, bj) = if pair.is_diagonal() {
            (ai.clone(), bi.clone())
        } else {
            weights(l, ss, pair.j, &spec.left, &spec.right)?
        };
        let current_i = channel_current(ss, l, pair.i)?;
        let modes = spec
            .alphas
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != spec.zero_index)
            .map(|(k, &alpha)| (alpha, ai[k] * bj[k] + aj[k] * bi[k]))
            .collect();
        Ok(EigenExpansion {
            pair,
            shot: if pair.is_diagonal() { current_i } else { 0.0 },
            current_i,
            modes,
        })
    }

    /// Raw noise.
    pub fn value(&self, omega: f64) -> EigenValue {
        let w2 = omega * omega;
        let mut sum = C64::new(0.0, 0.0);
        let mut magnitude = 2.0 * self.shot.abs();
        for &(alpha, amp) in &self.modes {
            let t = amp * alpha / (alpha * alpha + w2);
            sum += t;
            magnitude += 2.0 * t.norm();
        }
        EigenValue {
            value: 2.0 * self.shot - 2.0 * sum.re,
            imag_residue: 2.0 * sum.im,
            magnitude,
        }
    }

    /// Per-mode weights `c_k = A_k / (2 I_i)` of the Fano form
    /// `S / 2I = 1 - 2 sum_k c_k alpha_k / (omega^2 + alpha_k^2)`; diagonal pairs only.
    pub fn fano_weights(&self) -> Result<Vec<(C64, C64)>> {
        if !self.pair.is_diagonal() || self.current_i == 0.0 {
            return Err(Error::InvalidInput(
                "fano weights need a diagonal pair with nonzero current".into(),
            ));
        }
        Ok(self
            .modes
            .iter()
            .map(|&(a, amp)| (a, amp / (2.0 * self.current_i)))
            .collect())
    }
}
