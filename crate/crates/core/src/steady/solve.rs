use std::sync::Arc;

use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{dagger, BandedLu, CsrMatrix};
use crate::model::HilbertSpace;
use crate::superop::{Layout, Superoperator};

/// Stationary density matrix of a generator.
#[derive(Debug, Clone)]
pub struct SteadyState {
    /// Full `D x D` matrix, Hermitian with unit trace.
    pub rho: Array2<C64>,
    /// Same state in the generator's reduced coordinates.
    pub vector: Vec<C64>,
    pub layout: Arc<Layout>,
    pub space: Option<HilbertSpace>,
    /// `max |L vec(rho)|` against the unmodified generator.
    pub residual: f64,
    pub min_eigenvalue: f64,
    pub method: &'static str,
}

pub(crate) fn diagonal_scale(m: &CsrMatrix) -> f64 {
    (0..m.nrows()).map(|i| m.get(i, i).norm()).fold(0.0, f64::max)
}

/// Diagonal shift that keeps `L - sigma` regular while staying far below
/// every nonzero relaxation rate of interest.
pub(crate) fn regularizing_shift(m: &CsrMatrix) -> f64 {
    1e-9 * diagonal_scale(m).max(1e-300)
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.norm()))
}

fn inverse_iteration(lu: &BandedLu, l: &CsrMatrix, layout: &Layout, start: Vec<C64>) -> Result<Vec<C64>> {
    let mut x = start;
    let mut prev_res = f64::INFINITY;
    for _ in 0..16 {
        lu.solve_in_place(&mut x);
        let tr = layout.trace(&x);
        if tr.norm() < 1e-300 || !tr.norm().is_finite() {
            return Err(Error::Numerical("stationary vector has vanishing trace".into()));
        }
        for v in x.iter_mut() {
            *v /= tr;
        }
        let res = max_norm(&l.mul_vec(&x)) / max_norm(&x);
        if res <= 1e-15 * diagonal_scale(l).max(1.0) || res >= 0.5 * prev_res {
            break;
        }
        prev_res = res;
    }
    Ok(x)
}

/// Solves `L rho = 0, Tr rho = 1` by shifted inverse iteration.
///
/// The shifted matrix `L - sigma` is regular for any dissipative generator,
/// keeps the band structure intact, and the iteration converges to the
/// stationary vector at rate `sigma / |alpha_1|`. Two different starting
/// states are iterated; disagreement signals a degenerate stationary subspace.
pub fn solve_steady_state(l: &Superoperator) -> Result<SteadyState> {
    let n = l.len();
    let layout = l.layout.clone();
    let sigma = regularizing_shift(&l.total);
    let lu = BandedLu::factor(&l.total.shift_diagonal(C64::new(-sigma, 0.0)))?;
    let w = layout.trace_weights().to_vec();
    let x_a = inverse_iteration(&lu, &l.total, &layout, w.clone())?;
    let skew: Vec<C64> = w
        .iter()
        .enumerate()
        .map(|(k, &v)| v * (1.0 + 3.0 * k as f64 / n as f64))
        .collect();
    let x_b = inverse_iteration(&lu, &l.total, &layout, skew)?;
    let diff = x_a.iter().zip(&x_b).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if diff > 1e-6 * max_norm(&x_a) {
        return Err(Error::DegenerateSteadyState(format!(
            "stationary solutions from distinct starts differ by {diff:.3e}"
        )));
    }
    let rho = layout.embed(&x_a);
    let mut rho = (&rho + &dagger(&rho)).mapv(|v| v * 0.5);
    let tr = rho.diag().sum();
    rho.mapv_inplace(|v| v / tr);
    let vector = layout.extract(&rho);
    let residual = max_norm(&l.total.mul_vec(&vector));
    if residual > 1e-8 * diagonal_scale(&l.total).max(1.0) {
        return Err(Error::Numerical(format!(
            "steady state did not converge (residual {residual:.3e})"
        )));
    }
    let (evals, _) = rho
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver: {e}")))?;
    let min_eigenvalue = evals.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -1e-9 {
        return Err(Error::Numerical(format!(
            "steady state has eigenvalue {min_eigenvalue:.3e} below -1e-9; increase the Fock cutoff"
        )));
    }
    Ok(SteadyState {
        rho,
        vector,
        layout,
        space: l.space,
        residual,
        min_eigenvalue,
        method: "shifted-inverse-iteration",
    })
}
