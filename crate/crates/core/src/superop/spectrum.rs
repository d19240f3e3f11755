use ndarray::Array2;
use ndarray_linalg::{Eig, EigVals, Inverse};
use num_complex::Complex64 as C64;

use super::layout::SectorKind;
use super::liouvillian::Superoperator;
use crate::error::{Error, Result};

/// Eigendecomposition `L = V diag(alpha) V^{-1}`.
#[derive(Debug, Clone)]
pub struct LiouvillianSpectrum {
    pub alphas: Vec<C64>,
    /// Right eigenvectors as columns, in the generator's coordinates.
    pub right: Array2<C64>,
    /// `V^{-1}`; rows are left eigenvectors.
    pub left: Array2<C64>,
    /// Index of the eigenvalue closest to zero.
    pub zero_index: usize,
    /// `max |V^{-1} V - 1|`.
    pub biorthogonality: f64,
}

const SECTORS: [SectorKind; 3] = [SectorKind::Populations, SectorKind::KetEmpty, SectorKind::BraEmpty];

fn is_sectorable(l: &Superoperator) -> bool {
    l.layout.kind == SectorKind::Full && l.space.is_some()
}

fn dense_eig(a: &Array2<C64>) -> Result<(Vec<C64>, Array2<C64>, Array2<C64>, f64)> {
    let (w, v) = a
        .eig()
        .map_err(|e| Error::MethodUnavailable(format!("eigensolver failed: {e}")))?;
    let vinv = v
        .inv()
        .map_err(|e| Error::MethodUnavailable(format!("eigenvector matrix is singular: {e}")))?;
    let prod = vinv.dot(&v);
    let mut defect: f64 = 0.0;
    for ((i, j), x) in prod.indexed_iter() {
        let want = if i == j { 1.0 } else { 0.0 };
        defect = defect.max((x - C64::new(want, 0.0)).norm());
    }
    Ok((w.to_vec(), v, vinv, defect))
}

impl LiouvillianSpectrum {
    pub fn compute(l: &Superoperator) -> Result<Self> {
        let n = l.len();
        let (alphas, right, left, biorth) = if is_sectorable(l) {
            let mut alphas = Vec::with_capacity(n);
            let mut right = Array2::zeros((n, n));
            let mut left = Array2::zeros((n, n));
            let mut biorth: f64 = 0.0;
            let mut offset = 0;
            for kind in SECTORS {
                let r = l.restrict(kind)?;
                let (w, v, vinv, d) = dense_eig(&r.total.to_dense())?;
                biorth = biorth.max(d);
                for (row, &f) in r.layout.map.iter().enumerate() {
                    for c in 0..w.len() {
                        right[[f, offset + c]] = v[[row, c]];
                        left[[offset + c, f]] = vinv[[c, row]];
                    }
                }
                offset += w.len();
                alphas.extend(w);
            }
            if offset != n {
                return Err(Error::Numerical("sectors do not cover the generator".into()));
            }
            (alphas, right, left, biorth)
        } else {
            dense_eig(&l.total.to_dense())?
        };
        if biorth > 1e-8 {
            return Err(Error::MethodUnavailable(format!(
                "generator is not reliably diagonalizable (biorthogonality defect {biorth:.3e})"
            )));
        }
        let zero_index = argmin_abs(&alphas);
        Ok(LiouvillianSpectrum {
            alphas,
            right,
            left,
            zero_index,
            biorthogonality: biorth,
        })
    }
}

fn argmin_abs(alphas: &[C64]) -> usize {
    alphas
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0)
}

pub fn spectrum(l: &Superoperator) -> Result<&LiouvillianSpectrum> {
    l.spectrum()
}

/// Eigenvalues only, by charge sector when possible.
pub fn eigenvalues(l: &Superoperator) -> Result<Vec<C64>> {
    let eig = |a: Array2<C64>| -> Result<Vec<C64>> {
        a.eigvals()
            .map(|w| w.to_vec())
            .map_err(|e| Error::Numerical(format!("eigenvalue solver failed: {e}")))
    };
    if is_sectorable(l) {
        let mut out = Vec::with_capacity(l.len());
        for kind in SECTORS {
            out.extend(eig(l.restrict(kind)?.total.to_dense())?);
        }
        Ok(out)
    } else {
        eig(l.total.to_dense())
    }
}

/// Summary numbers behind the spectral invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSummary {
    pub max_real: f64,
    /// Eigenvalues with `|alpha| <= 1e-8`.
    pub stationary_count: usize,
    /// Largest distance from a non-real eigenvalue's conjugate to the nearest eigenvalue.
    pub conjugate_defect: f64,
}

pub fn summarize(alphas: &[C64]) -> SpectralSummary {
    let max_real = alphas.iter().map(|a| a.re).fold(f64::NEG_INFINITY, f64::max);
    let stationary_count = alphas.iter().filter(|a| a.norm() <= 1e-8).count();
    let mut conjugate_defect: f64 = 0.0;
    for a in alphas.iter().filter(|a| a.im.abs() > 1e-9) {
        let c = a.conj();
        let d = alphas.iter().map(|b| (b - c).norm()).fold(f64::INFINITY, f64::min);
        conjugate_defect = conjugate_defect.max(d);
    }
    SpectralSummary {
        max_real,
        stationary_count,
        conjugate_defect,
    }
}
