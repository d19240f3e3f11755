use ndarray::Array2;
use num_complex::Complex64 as C64;

fn norm1(a: &Array2<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
///
/// Uses products only, no linear solves.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    let nrm = norm1(a);
    let mut squarings = 0u32;
    if nrm > 0.5 {
        squarings = (nrm / 0.5).log2().ceil() as u32;
    }
    let scaled = a.mapv(|v| v / 2f64.powi(squarings as i32));
    let mut result = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..=30 {
        term = term.dot(&scaled).mapv(|v| v / k as f64);
        result += &term;
        if norm1(&term) < 1e-18 * norm1(&result) {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}
