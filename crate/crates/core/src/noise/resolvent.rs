use std::sync::{Arc, Mutex};

use num_complex::Complex64 as C64;

use super::types::Pair;
use crate::error::{Error, Result};
use crate::linalg::BandedLu;
use crate::steady::{channel_current, regularizing_shift, SteadyState};
use crate::superop::{ChannelId, Superoperator};

/// Projected resolvent `R(omega) = Q (i omega + L)^{-1} Q` with `P v = rho_ss Tr v`.
///
/// At (and numerically near) `omega = 0` the factorized matrix carries a small
/// diagonal shift; iterative refinement against the unshifted generator
/// removes its effect on range Q, which gives the Drazin inverse there.
pub struct ResolventSolver<'a> {
    l: &'a Superoperator,
    ss: &'a SteadyState,
    shift: f64,
    cache: Mutex<Option<(u64, Arc<BandedLu>)>>,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.norm()))
}

impl<'a> ResolventSolver<'a> {
    pub fn new(l: &'a Superoperator, ss: &'a SteadyState) -> Result<Self> {
        if ss.vector.len() != l.len() || ss.layout.map != l.layout.map {
            return Err(Error::InvalidInput(
                "steady state was computed for a different generator layout".into(),
            ));
        }
        Ok(ResolventSolver {
            l,
            ss,
            shift: regularizing_shift(&l.total),
            cache: Mutex::new(None),
        })
    }

    fn is_singular_point(&self, omega: f64) -> bool {
        omega.abs() < self.shift
    }

    fn factor(&self, omega: f64) -> Result<Arc<BandedLu>> {
        let key = omega.to_bits();
        if let Some((k, lu)) = self.cache.lock().unwrap().as_ref() {
            if *k == key {
                return Ok(lu.clone());
            }
        }
        let z = if self.is_singular_point(omega) {
            C64::new(-self.shift, 0.0)
        } else {
            C64::new(0.0, omega)
        };
        let lu = BandedLu::factor(&self.l.total.shift_diagonal(z)).map_err(|e| Error::Singular {
            omega,
            message: e.to_string(),
        })?;
        let lu = Arc::new(lu);
        *self.cache.lock().unwrap() = Some((key, lu.clone()));
        Ok(lu)
    }

    /// `P v`.
    pub fn project_p(&self, v: &[C64]) -> Vec<C64> {
        let t = self.ss.layout.trace(v);
        self.ss.vector.iter().map(|r| r * t).collect()
    }

    /// `Q v = v - P v`.
    pub fn project_q(&self, v: &[C64]) -> Vec<C64> {
        let t = self.ss.layout.trace(v);
        v.iter().zip(&self.ss.vector).map(|(x, r)| x - r * t).collect()
    }

    /// `R(omega) b`.
    pub fn apply(&self, omega: f64, b: &[C64]) -> Result<Vec<C64>> {
        let lu = self.factor(omega)?;
        let qb = self.project_q(b);
        let diag = C64::new(0.0, if self.is_singular_point(omega) { 0.0 } else { omega });
        let mut z = lu.solve(&qb);
        let scale = max_norm(&qb).max(1e-300);
        for _ in 0..12 {
            let lz = self.l.total.mul_vec(&z);
            let r: Vec<C64> = qb.iter().zip(&lz).zip(&z).map(|((b, a), x)| b - a - diag * x).collect();
            let r = self.project_q(&r);
            if max_norm(&r) <= 1e-15 * scale {
                break;
            }
            let dz = lu.solve(&r);
            let small = max_norm(&dz) <= 1e-15 * max_norm(&z);
            for (x, d) in z.iter_mut().zip(&dz) {
                *x += d;
            }
            if small {
                break;
            }
        }
        let z = self.project_q(&z);
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Singular {
                omega,
                message: "non-finite resolvent solution".into(),
            });
        }
        Ok(z)
    }

    /// `Tr[L_i R(omega) L_j rho_ss]`.
    pub fn correlator(&self, i: ChannelId, j: ChannelId, omega: f64) -> Result<C64> {
        let lj = self.l.channel(j)?.matrix.mul_vec(&self.ss.vector);
        let y = self.apply(omega, &lj)?;
        let li = self.l.channel(i)?.matrix.mul_vec(&y);
        Ok(dot(self.ss.layout.trace_weights(), &li))
    }

    /// Raw symmetrized noise `S(omega)_{ij} = 2 (delta_ij I_i - Re{Tr[L_i R L_j rho] + Tr[L_j R L_i rho]})`.
    pub fn noise(&self, pair: Pair, omega: f64) -> Result<f64> {
        let tij = self.correlator(pair.i, pair.j, omega)?;
        let tji = if pair.is_diagonal() {
            tij
        } else {
            self.correlator(pair.j, pair.i, omega)?
        };
        let shot = if pair.is_diagonal() {
            channel_current(self.ss, self.l, pair.i)?
        } else {
            0.0
        };
        Ok(2.0 * (shot - (tij + tji).re))
    }

    /// Defects `(|P^2 - P|, |Q^2 - Q|, |PQ|)` on a probe vector.
    pub fn projector_defects(&self, probe: &[C64]) -> (f64, f64, f64) {
        let p = self.project_p(probe);
        let pp = self.project_p(&p);
        let q = self.project_q(probe);
        let qq = self.project_q(&q);
        let pq = self.project_p(&q);
        let d = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        (d(&pp, &p), d(&qq, &q), max_norm(&pq))
    }
}

/// Raw noise at a single frequency.
pub fn noise_resolvent(l: &Superoperator, ss: &SteadyState, pair: Pair, omega: f64) -> Result<f64> {
    ResolventSolver::new(l, ss)?.noise(pair, omega)
}
