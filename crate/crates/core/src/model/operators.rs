use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::space::{HilbertSpace, EMPTY, LEFT, RIGHT};

pub type OperatorMatrix = Array2<C64>;

/// Dense operators on the transport space.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub space: HilbertSpace,
    pub a: OperatorMatrix,
    pub a_dag: OperatorMatrix,
    pub num: OperatorMatrix,
    pub sigma_z: OperatorMatrix,
    pub sigma_x: OperatorMatrix,
    pub sigma_y: OperatorMatrix,
    pub s_l: OperatorMatrix,
    pub s_r: OperatorMatrix,
    pub p_empty: OperatorMatrix,
    pub p_left: OperatorMatrix,
    pub p_right: OperatorMatrix,
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `|d1><d2|` tensored with the Fock identity.
pub fn dot_transition(space: &HilbertSpace, d1: usize, d2: usize) -> OperatorMatrix {
    let mut m = Array2::zeros((space.dim(), space.dim()));
    for n in 0..space.levels() {
        m[[space.index(d1, n), space.index(d2, n)]] = one();
    }
    m
}

/// Annihilation operator on every dot sector, `<n-1|a|n> = sqrt(n)`.
pub fn annihilation(space: &HilbertSpace) -> OperatorMatrix {
    let mut m = Array2::zeros((space.dim(), space.dim()));
    for d in 0..space.dot_dim {
        for n in 1..space.levels() {
            m[[space.index(d, n - 1), space.index(d, n)]] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    m
}

pub fn number(space: &HilbertSpace) -> OperatorMatrix {
    let mut m = Array2::zeros((space.dim(), space.dim()));
    for i in 0..space.dim() {
        let (_, n) = space.split(i);
        m[[i, i]] = C64::new(n as f64, 0.0);
    }
    m
}

pub fn build_operators(space: &HilbertSpace) -> OperatorSet {
    assert_eq!(space.dot_dim, 3, "transport operators need the three-state dot");
    let a = annihilation(space);
    let a_dag = crate::linalg::dagger(&a);
    let p_left = dot_transition(space, LEFT, LEFT);
    let p_right = dot_transition(space, RIGHT, RIGHT);
    let lr = dot_transition(space, LEFT, RIGHT);
    let rl = dot_transition(space, RIGHT, LEFT);
    let i = C64::new(0.0, 1.0);
    OperatorSet {
        space: *space,
        num: number(space),
        sigma_z: &p_left - &p_right,
        sigma_x: &lr + &rl,
        sigma_y: lr.mapv(|v| -i * v) + rl.mapv(|v| i * v),
        s_l: dot_transition(space, EMPTY, LEFT),
        s_r: dot_transition(space, EMPTY, RIGHT),
        p_empty: dot_transition(space, EMPTY, EMPTY),
        a,
        a_dag,
        p_left,
        p_right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn ladder_entries() {
        let s = HilbertSpace::transport(2).unwrap();
        let ops = build_operators(&s);
        assert_eq!(ops.a.nrows(), 9);
        for d in 0..3 {
            assert_eq!(ops.a[[s.index(d, 0), s.index(d, 1)]], C64::new(1.0, 0.0));
            assert_eq!(ops.a[[s.index(d, 1), s.index(d, 2)]], C64::new(2f64.sqrt(), 0.0));
        }
        let nz = ops.a.iter().filter(|v| v.norm() > 0.0).count();
        assert_eq!(nz, 6);
    }

    #[test]
    fn sigma_z_squares_to_charge_projector() {
        let s = HilbertSpace::transport(3).unwrap();
        let ops = build_operators(&s);
        let sq = ops.sigma_z.dot(&ops.sigma_z);
        assert_eq!(max_abs(&(&sq - &(&ops.p_left + &ops.p_right))), 0.0);
    }

    #[test]
    fn commutator_defect_confined_to_top_level() {
        let s = HilbertSpace::transport(4).unwrap();
        let ops = build_operators(&s);
        let c = ops.a.dot(&ops.a_dag) - ops.a_dag.dot(&ops.a);
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let (_, n) = s.split(i);
                let want = if i == j && n < s.n_fock { 1.0 } else { 0.0 };
                if n < s.n_fock {
                    assert!((c[[i, j]] - C64::new(want, 0.0)).norm() < 1e-14);
                }
            }
        }
        let top = s.index(1, 4);
        assert!((c[[top, top]].re + 4.0).abs() < 1e-12);
    }

    #[test]
    fn jump_operators() {
        let s = HilbertSpace::transport(1).unwrap();
        let ops = build_operators(&s);
        assert_eq!(ops.s_l[[s.index(EMPTY, 1), s.index(LEFT, 1)]], C64::new(1.0, 0.0));
        assert_eq!(ops.s_r[[s.index(EMPTY, 0), s.index(RIGHT, 0)]], C64::new(1.0, 0.0));
        let sl_sld = ops.s_l.dot(&crate::linalg::dagger(&ops.s_l));
        assert_eq!(max_abs(&(&sl_sld - &ops.p_empty)), 0.0);
    }
}
