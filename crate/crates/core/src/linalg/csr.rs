use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Compressed sparse row matrix with complex entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Duplicate entries are summed in insertion order.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, C64)>) -> Self {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            indptr[r + 1] += indptr[r];
        }
        CsrMatrix {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn from_dense(a: &Array2<C64>) -> Self {
        let mut t = Vec::new();
        for ((i, j), &v) in a.indexed_iter() {
            if v != C64::new(0.0, 0.0) {
                t.push((i, j, v));
            }
        }
        Self::from_triplets(a.nrows(), a.ncols(), t)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, C64::new(1.0, 0.0))).collect())
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        self.indices[a..b]
            .iter()
            .copied()
            .zip(self.values[a..b].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.row(r).find(|&(j, _)| j == c).map(|(_, v)| v).unwrap_or_default()
    }

    pub fn mul_vec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *yr = acc;
        }
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// Row vector times matrix, `x^T A`.
    pub fn vec_mul(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.nrows);
        let mut y = vec![C64::new(0.0, 0.0); self.ncols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == C64::new(0.0, 0.0) {
                continue;
            }
            for (c, v) in self.row(r) {
                y[c] += xr * v;
            }
        }
        y
    }

    pub fn to_dense(&self) -> Array2<C64> {
        let mut a = Array2::zeros((self.nrows, self.ncols));
        for (r, c, v) in self.iter() {
            a[[r, c]] += v;
        }
        a
    }

    /// Entrywise sum; both operands must share a shape.
    pub fn add(&self, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.nrows {
            let (mut p, pe) = (self.indptr[r], self.indptr[r + 1]);
            let (mut q, qe) = (other.indptr[r], other.indptr[r + 1]);
            while p < pe || q < qe {
                let cp = if p < pe { self.indices[p] } else { usize::MAX };
                let cq = if q < qe { other.indices[q] } else { usize::MAX };
                if cp == cq {
                    indices.push(cp);
                    values.push(self.values[p] + other.values[q]);
                    p += 1;
                    q += 1;
                } else if cp < cq {
                    indices.push(cp);
                    values.push(self.values[p]);
                    p += 1;
                } else {
                    indices.push(cq);
                    values.push(other.values[q]);
                    q += 1;
                }
            }
            indptr[r + 1] = indices.len();
        }
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn scale(&self, s: C64) -> CsrMatrix {
        let mut out = self.clone();
        for v in out.values.iter_mut() {
            *v *= s;
        }
        out
    }

    /// Adds `s` to every diagonal entry.
    pub fn shift_diagonal(&self, s: C64) -> CsrMatrix {
        assert_eq!(self.nrows, self.ncols);
        self.add(&CsrMatrix::identity(self.nrows).scale(s))
    }

    /// Submatrix on rows and columns `map[k]`, renumbered to `k`.
    pub fn restrict(&self, map: &[usize]) -> CsrMatrix {
        assert_eq!(self.nrows, self.ncols);
        let mut inv = vec![usize::MAX; self.ncols];
        for (k, &full) in map.iter().enumerate() {
            inv[full] = k;
        }
        let mut t = Vec::new();
        for (k, &full) in map.iter().enumerate() {
            for (c, v) in self.row(full) {
                if inv[c] != usize::MAX {
                    t.push((k, inv[c], v));
                }
            }
        }
        CsrMatrix::from_triplets(map.len(), map.len(), t)
    }

    /// Sum of entries whose row or column falls outside `map`, in absolute value.
    pub fn leakage(&self, map: &[usize]) -> f64 {
        let mut inside = vec![false; self.ncols];
        for &m in map {
            inside[m] = true;
        }
        let mut s = 0.0;
        for &r in map {
            for (c, v) in self.row(r) {
                if !inside[c] {
                    s += v.norm();
                }
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Lower and upper bandwidths.
    pub fn bandwidths(&self) -> (usize, usize) {
        let mut kl = 0;
        let mut ku = 0;
        for (r, c, _) in self.iter() {
            if r > c {
                kl = kl.max(r - c);
            } else {
                ku = ku.max(c - r);
            }
        }
        (kl, ku)
    }

    pub fn mul_array(&self, x: &Array1<C64>) -> Array1<C64> {
        Array1::from(self.mul_vec(x.as_slice().expect("contiguous vector")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn triplets_sum_duplicates() {
        let m = CsrMatrix::from_triplets(2, 2, vec![(0, 1, c(1.0)), (0, 1, c(2.0)), (1, 0, c(4.0))]);
        assert_eq!(m.get(0, 1), c(3.0));
        assert_eq!(m.get(1, 0), c(4.0));
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn matvec_matches_dense() {
        let m = CsrMatrix::from_triplets(3, 3, vec![(0, 0, c(1.0)), (0, 2, C64::new(0.0, 2.0)), (2, 1, c(-3.0))]);
        let x = vec![c(1.0), c(2.0), c(3.0)];
        let y = m.mul_vec(&x);
        let d = m.to_dense().dot(&Array1::from(x.clone()));
        for i in 0..3 {
            assert_eq!(y[i], d[i]);
        }
        let z = m.vec_mul(&x);
        let dz = Array1::from(x).dot(&m.to_dense());
        for i in 0..3 {
            assert_eq!(z[i], dz[i]);
        }
    }

    #[test]
    fn add_and_restrict() {
        let a = CsrMatrix::from_triplets(3, 3, vec![(0, 0, c(1.0)), (1, 2, c(2.0))]);
        let b = CsrMatrix::from_triplets(3, 3, vec![(0, 0, c(1.0)), (2, 1, c(5.0))]);
        let s = a.add(&b);
        assert_eq!(s.get(0, 0), c(2.0));
        assert_eq!(s.get(1, 2), c(2.0));
        assert_eq!(s.get(2, 1), c(5.0));
        let r = s.restrict(&[2, 1]);
        assert_eq!(r.get(0, 1), c(5.0));
        assert_eq!(r.get(1, 0), c(2.0));
        assert_eq!(s.leakage(&[0]), 0.0);
        assert_eq!(s.bandwidths(), (1, 1));
    }
}
