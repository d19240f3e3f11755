use ndarray::Array1;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::hamiltonian::build_jc_hamiltonian;
use super::params::ModelParams;
use super::space::{HilbertSpace, LEFT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseTrace {
    pub times: Vec<f64>,
    pub p_left: Vec<f64>,
    pub coefficients: Vec<f64>,
}

/// `C_n = 1/sqrt(N)` for n < N.
pub fn equal_weights(count: usize) -> Vec<f64> {
    vec![1.0 / (count as f64).sqrt(); count]
}

/// `C_n(z) = z^n e^{-z} / n!` for n <= n_max, rescaled to unit total probability.
pub fn coherent_weights(z: f64, n_max: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(n_max + 1);
    let mut term = (-z).exp();
    for n in 0..=n_max {
        if n > 0 {
            term *= z / n as f64;
        }
        c.push(term);
    }
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    c.iter().map(|x| x / norm).collect()
}

fn check_normalized(coefficients: &[f64]) -> Result<()> {
    let s: f64 = coefficients.iter().map(|c| c * c).sum();
    if (s - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!(
            "coefficients must satisfy sum |C_n|^2 = 1, got {s}"
        )));
    }
    Ok(())
}

/// Closed form `P_L(t) = sum_n {C_n cos[(-g (sqrt(n+1) - sqrt(n)) t - 2 t Delta) / 2]}^2`.
pub fn p_left_analytic(coefficients: &[f64], params: &ModelParams, times: &[f64]) -> Result<CollapseTrace> {
    check_normalized(coefficients)?;
    let p_left = times
        .iter()
        .map(|&t| {
            coefficients
                .iter()
                .enumerate()
                .map(|(n, &c)| {
                    let nf = n as f64;
                    let phase = (-params.g * ((nf + 1.0).sqrt() - nf.sqrt()) * t - 2.0 * t * params.delta) / 2.0;
                    (c * phase.cos()).powi(2)
                })
                .sum::<f64>()
        })
        .collect();
    Ok(CollapseTrace {
        times: times.to_vec(),
        p_left,
        coefficients: coefficients.to_vec(),
    })
}

/// Left-dot occupation under exact evolution with the rotating-wave Hamiltonian,
/// starting from `(sum_n C_n |n>) (x) |L>`.
pub fn p_left_unitary(
    coefficients: &[f64],
    params: &ModelParams,
    times: &[f64],
    n_fock: usize,
) -> Result<CollapseTrace> {
    check_normalized(coefficients)?;
    if coefficients.len() > n_fock + 1 {
        return Err(Error::InvalidInput(format!(
            "{} coefficients do not fit below cutoff {n_fock}",
            coefficients.len()
        )));
    }
    let space = HilbertSpace::transport(n_fock)?;
    let h = build_jc_hamiltonian(params, &space);
    let (w, v) = h
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver: {e}")))?;
    let mut psi0 = Array1::<C64>::zeros(space.dim());
    for (n, &c) in coefficients.iter().enumerate() {
        psi0[space.index(LEFT, n)] = C64::new(c, 0.0);
    }
    let v_dag = v.t().mapv(|x| x.conj());
    let amp = v_dag.dot(&psi0);
    let mut p_left = Vec::with_capacity(times.len());
    for &t in times {
        let phased: Array1<C64> = amp
            .iter()
            .zip(w.iter())
            .map(|(&a, &e)| a * C64::from_polar(1.0, -e * t))
            .collect();
        let psi = v.dot(&phased);
        let p: f64 = (0..space.levels()).map(|n| psi[space.index(LEFT, n)].norm_sqr()).sum();
        p_left.push(p);
    }
    Ok(CollapseTrace {
        times: times.to_vec(),
        p_left,
        coefficients: coefficients.to_vec(),
    })
}
