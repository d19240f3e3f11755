//! Sparse storage, banded LU and dense helpers shared by the solvers.

mod banded;
mod csr;
mod expm;

pub use banded::BandedLu;
pub use csr::CsrMatrix;
pub use expm::expm;

use ndarray::Array2;
use num_complex::Complex64 as C64;

/// Largest entrywise magnitude of `A - A^dagger`.
pub fn hermiticity_defect(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut m: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            m = m.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    m
}

pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|v| v.conj())
}

pub fn trace(a: &Array2<C64>) -> C64 {
    a.diag().sum()
}

/// `Tr[rho A]` without forming the product.
pub fn expect(rho: &Array2<C64>, a: &Array2<C64>) -> C64 {
    let n = rho.nrows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += rho[[j, i]] * a[[i, j]];
        }
    }
    s
}

pub fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.norm()))
}
