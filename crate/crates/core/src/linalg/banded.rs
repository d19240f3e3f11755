use num_complex::Complex64 as C64;

use super::csr::CsrMatrix;
use crate::error::{Error, Result};

/// LU factorization with partial pivoting of a square banded matrix.
///
/// Rows are stored with `kl` sub-diagonals and `ku + kl` super-diagonals,
/// the extra `kl` holding fill-in from row interchanges.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    upper: Vec<C64>,
    lower: Vec<C64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::InvalidInput("banded LU needs a square matrix".into()));
        }
        let (kl, ku) = a.bandwidths();
        let width = 2 * kl + ku + 1;
        let mut upper = vec![C64::new(0.0, 0.0); n * width];
        for (r, c, v) in a.iter() {
            upper[r * width + (c + kl - r)] += v;
        }
        let mut lower = vec![C64::new(0.0, 0.0); n * kl.max(1)];
        let mut pivots = vec![0usize; n];
        let at = |i: usize, j: usize| i * width + (j + kl - i);

        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = upper[at(k, k)].norm();
            for i in k + 1..=last_row {
                let v = upper[at(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            pivots[k] = p;
            if best == 0.0 {
                return Err(Error::Numerical(format!("zero pivot in column {k}")));
            }
            let last_col = (k + ku + kl).min(n - 1);
            if p != k {
                for j in k..=last_col {
                    upper.swap(at(k, j), at(p, j));
                }
            }
            let pivot = upper[at(k, k)];
            for i in k + 1..=last_row {
                let m = upper[at(i, k)] / pivot;
                lower[k * kl + (i - k - 1)] = m;
                upper[at(i, k)] = C64::new(0.0, 0.0);
                if m == C64::new(0.0, 0.0) {
                    continue;
                }
                let (ri, rk) = (at(i, k + 1), at(k, k + 1));
                let len = last_col - k;
                // rows i and k occupy disjoint storage ranges
                let (head, tail) = upper.split_at_mut(ri);
                let src = &head[rk..rk + len];
                for (dst, s) in tail[..len].iter_mut().zip(src) {
                    *dst -= m * s;
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            ku,
            width,
            upper,
            lower,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Smallest pivot magnitude relative to the largest.
    pub fn pivot_ratio(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for k in 0..self.n {
            let v = self.upper[k * self.width + self.kl].norm();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi == 0.0 {
            0.0
        } else {
            lo / hi
        }
    }

    pub fn solve_in_place(&self, b: &mut [C64]) {
        assert_eq!(b.len(), self.n);
        let (n, kl, w) = (self.n, self.kl, self.width);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk == C64::new(0.0, 0.0) {
                continue;
            }
            let last_row = (k + kl).min(n - 1);
            for i in k + 1..=last_row {
                b[i] -= self.lower[k * kl + (i - k - 1)] * bk;
            }
        }
        let reach = self.ku + kl;
        for k in (0..n).rev() {
            let row = k * w;
            let mut acc = b[k];
            let last_col = (k + reach).min(n - 1);
            for j in k + 1..=last_col {
                acc -= self.upper[row + (j + kl - k)] * b[j];
            }
            b[k] = acc / self.upper[row + kl];
        }
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
