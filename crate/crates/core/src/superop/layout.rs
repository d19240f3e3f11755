use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::vectorize::vec_index;
use crate::model::{HilbertSpace, EMPTY, LEFT, RIGHT};

/// Which block of the density matrix a reduced generator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SectorKind {
    /// Every element, column-stacked.
    Full,
    /// Charge-diagonal block: `rho_00`, `rho_LL`, `rho_LR`, `rho_RL`, `rho_RR`.
    Populations,
    /// `rho_0L`, `rho_0R`.
    KetEmpty,
    /// `rho_L0`, `rho_R0`.
    BraEmpty,
}

/// Map from reduced coordinates to column-stacked density-matrix indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub kind: SectorKind,
    pub dim_rho: usize,
    /// `map[k]` is the full vectorized index of reduced coordinate `k`.
    pub map: Vec<usize>,
    trace_weights: Vec<C64>,
}

impl Layout {
    pub fn full(dim_rho: usize) -> Self {
        Self::from_map(SectorKind::Full, dim_rho, (0..dim_rho * dim_rho).collect())
    }

    fn from_map(kind: SectorKind, dim_rho: usize, map: Vec<usize>) -> Self {
        let trace_weights = map
            .iter()
            .map(|&f| {
                if f % dim_rho == f / dim_rho {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        Layout {
            kind,
            dim_rho,
            map,
            trace_weights,
        }
    }

    /// Reduced layout of a transport-space sector.
    ///
    /// Coordinates are ordered by bra Fock index, then ket Fock index, then
    /// charge pair, so ladder couplings stay within a narrow band.
    pub fn transport_sector(space: &HilbertSpace, kind: SectorKind) -> Self {
        let d = space.dim();
        let pairs: &[(usize, usize)] = match kind {
            SectorKind::Full => {
                return Self::from_map(
                    kind,
                    d,
                    Self::ordered(
                        space,
                        &[
                            (EMPTY, EMPTY),
                            (EMPTY, LEFT),
                            (EMPTY, RIGHT),
                            (LEFT, EMPTY),
                            (LEFT, LEFT),
                            (LEFT, RIGHT),
                            (RIGHT, EMPTY),
                            (RIGHT, LEFT),
                            (RIGHT, RIGHT),
                        ],
                    ),
                )
            }
            SectorKind::Populations => &[
                (EMPTY, EMPTY),
                (LEFT, LEFT),
                (LEFT, RIGHT),
                (RIGHT, LEFT),
                (RIGHT, RIGHT),
            ],
            SectorKind::KetEmpty => &[(EMPTY, LEFT), (EMPTY, RIGHT)],
            SectorKind::BraEmpty => &[(LEFT, EMPTY), (RIGHT, EMPTY)],
        };
        Self::from_map(kind, d, Self::ordered(space, pairs))
    }

    fn ordered(space: &HilbertSpace, pairs: &[(usize, usize)]) -> Vec<usize> {
        let d = space.dim();
        let mut map = Vec::with_capacity(pairs.len() * space.levels() * space.levels());
        for m in 0..space.levels() {
            for n in 0..space.levels() {
                for &(c1, c2) in pairs {
                    map.push(vec_index(space.index(c1, n), space.index(c2, m), d));
                }
            }
        }
        map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Row vector `w` with `w . v = Tr rho`.
    pub fn trace_weights(&self) -> &[C64] {
        &self.trace_weights
    }

    pub fn trace(&self, v: &[C64]) -> C64 {
        v.iter().zip(&self.trace_weights).map(|(a, b)| a * b).sum()
    }

    pub fn embed(&self, v: &[C64]) -> Array2<C64> {
        let d = self.dim_rho;
        let mut rho = Array2::zeros((d, d));
        for (k, &f) in self.map.iter().enumerate() {
            rho[[f % d, f / d]] = v[k];
        }
        rho
    }

    pub fn extract(&self, rho: &Array2<C64>) -> Vec<C64> {
        let d = self.dim_rho;
        self.map.iter().map(|&f| rho[[f % d, f / d]]).collect()
    }
}
