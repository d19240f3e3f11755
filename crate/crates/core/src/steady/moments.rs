use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::solve::SteadyState;
use crate::error::{Error, Result};
use crate::linalg::{dagger, expect};
use crate::model::{annihilation, number, HilbertSpace};
use crate::superop::{ChannelId, Superoperator};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Currents {
    pub e: f64,
    pub b: f64,
    #[serde(rename = "in")]
    pub in_: f64,
}

/// `Tr[L_i rho_ss]` for one channel.
pub fn channel_current(ss: &SteadyState, l: &Superoperator, id: ChannelId) -> Result<f64> {
    let c = l.channel(id)?;
    Ok(ss.layout.trace(&c.matrix.mul_vec(&ss.vector)).re)
}

pub fn currents(ss: &SteadyState, l: &Superoperator) -> Result<Currents> {
    Ok(Currents {
        e: channel_current(ss, l, ChannelId::E)?,
        b: channel_current(ss, l, ChannelId::B)?,
        in_: channel_current(ss, l, ChannelId::In)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FanoQ {
    pub value: f64,
    /// Set when `<n> < 1e-12`; the value is then defined as 0.
    pub vacuum: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureMin {
    /// In `[0, pi)`.
    pub phi_star: f64,
    pub value: f64,
}

/// Resonator moments of a steady state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonatorMoments {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub mean_a: C64,
    pub mean_a2: C64,
    pub mean_adag_a: f64,
}

fn space_of(ss: &SteadyState) -> Result<HilbertSpace> {
    ss.space
        .ok_or_else(|| Error::InvalidInput("resonator moments need a transport-model state".into()))
}

pub fn resonator_moments(ss: &SteadyState) -> Result<ResonatorMoments> {
    let space = space_of(ss)?;
    let a = annihilation(&space);
    let n = number(&space);
    let a_dag = dagger(&a);
    Ok(ResonatorMoments {
        mean_n: expect(&ss.rho, &n).re,
        mean_n2: expect(&ss.rho, &n.dot(&n)).re,
        mean_a: expect(&ss.rho, &a),
        mean_a2: expect(&ss.rho, &a.dot(&a)),
        mean_adag_a: expect(&ss.rho, &a_dag.dot(&a)).re,
    })
}

/// `F_Q = (<n^2> - <n>^2) / <n>`; values below 1 indicate number-state squeezing.
pub fn fano_number(ss: &SteadyState) -> Result<FanoQ> {
    Ok(fano_from(&resonator_moments(ss)?))
}

pub fn fano_from(m: &ResonatorMoments) -> FanoQ {
    if m.mean_n < 1e-12 {
        return FanoQ {
            value: 0.0,
            vacuum: true,
        };
    }
    FanoQ {
        value: ((m.mean_n2 - m.mean_n * m.mean_n) / m.mean_n).max(0.0),
        vacuum: false,
    }
}

/// Normal-ordered variance `<:(dQ)^2:>` of `Q = a e^{-i phi} + a^dag e^{i phi}`.
pub fn quadrature_variance_from(m: &ResonatorMoments, phi: f64) -> f64 {
    let c = m.mean_a2 - m.mean_a * m.mean_a;
    2.0 * (c * C64::from_polar(1.0, -2.0 * phi)).re + 2.0 * (m.mean_adag_a - m.mean_a.norm_sqr())
}

pub fn quadrature_variance(ss: &SteadyState, phi: f64) -> Result<f64> {
    Ok(quadrature_variance_from(&resonator_moments(ss)?, phi))
}

pub fn min_quadrature_from(m: &ResonatorMoments) -> QuadratureMin {
    let c = m.mean_a2 - m.mean_a * m.mean_a;
    let value = 2.0 * (m.mean_adag_a - m.mean_a.norm_sqr()) - 2.0 * c.norm();
    let phi_star = if c.norm() == 0.0 {
        0.0
    } else {
        ((c.arg() - PI) / 2.0).rem_euclid(PI)
    };
    QuadratureMin { phi_star, value }
}

pub fn min_quadrature_variance(ss: &SteadyState) -> Result<QuadratureMin> {
    Ok(min_quadrature_from(&resonator_moments(ss)?))
}

/// Single-time observables of a steady state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub current_e: f64,
    pub current_b: f64,
    pub current_in: f64,
    pub mean_n: f64,
    pub mean_n2: f64,
    pub fano_q: f64,
    pub fano_q_vacuum: bool,
    pub quad_min: QuadratureMin,
    pub mean_a: C64,
    pub mean_a2: C64,
    pub mean_adag_a: f64,
    pub residual: f64,
}

pub fn moment_report(ss: &SteadyState, l: &Superoperator) -> Result<MomentReport> {
    let cur = currents(ss, l)?;
    let m = resonator_moments(ss)?;
    let f = fano_from(&m);
    Ok(MomentReport {
        current_e: cur.e,
        current_b: cur.b,
        current_in: cur.in_,
        mean_n: m.mean_n,
        mean_n2: m.mean_n2,
        fano_q: f.value,
        fano_q_vacuum: f.vacuum,
        quad_min: min_quadrature_from(&m),
        mean_a: m.mean_a,
        mean_a2: m.mean_a2,
        mean_adag_a: m.mean_adag_a,
        residual: ss.residual,
    })
}
