use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Column stacking: `v[i + j D] = rho[i, j]`.
pub fn vectorize(rho: &Array2<C64>) -> Result<Array1<C64>> {
    let d = rho.nrows();
    if rho.ncols() != d {
        return Err(Error::InvalidInput(format!(
            "vectorize needs a square matrix, got {}x{}",
            d,
            rho.ncols()
        )));
    }
    let mut v = Array1::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            v[i + j * d] = rho[[i, j]];
        }
    }
    Ok(v)
}

pub fn devectorize(v: &[C64], dim_rho: usize) -> Result<Array2<C64>> {
    if v.len() != dim_rho * dim_rho {
        return Err(Error::InvalidInput(format!(
            "vector of length {} does not hold a {dim_rho}x{dim_rho} matrix",
            v.len()
        )));
    }
    let mut rho = Array2::zeros((dim_rho, dim_rho));
    for j in 0..dim_rho {
        for i in 0..dim_rho {
            rho[[i, j]] = v[i + j * dim_rho];
        }
    }
    Ok(rho)
}

/// Full vectorized index of `rho[i, j]`.
pub fn vec_index(i: usize, j: usize, dim_rho: usize) -> usize {
    i + j * dim_rho
}
