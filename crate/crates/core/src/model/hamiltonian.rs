use num_complex::Complex64 as C64;

use super::operators::{annihilation, build_operators, number, OperatorMatrix};
use super::params::ModelParams;
use super::space::HilbertSpace;
use crate::error::{Error, Result};
use crate::linalg::dagger;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// H = eps sigma_z + Delta sigma_x + g sigma_z (a + a^dag) + omega_b a^dag a.
pub fn build_hamiltonian(params: &ModelParams, space: &HilbertSpace) -> OperatorMatrix {
    let ops = build_operators(space);
    let x = &ops.a + &ops.a_dag;
    ops.sigma_z.mapv(|v| v * params.epsilon)
        + ops.sigma_x.mapv(|v| v * params.delta)
        + ops.sigma_z.dot(&x).mapv(|v| v * params.g)
        + ops.num.mapv(|v| v * params.omega_b)
}

/// Rotating-wave Hamiltonian g (sigma_x^+ a + sigma_x^- a^dag) + omega_b a^dag a + Delta sigma_x.
///
/// `sigma_x^{+/-} = (sigma_z -/+ i sigma_y) / 2` raise and lower between the
/// sigma_x eigenstates `0_x = (|L> - |R>)/sqrt2` and `1_x = (|L> + |R>)/sqrt2`.
/// The detuning epsilon is not part of this Hamiltonian.
pub fn build_jc_hamiltonian(params: &ModelParams, space: &HilbertSpace) -> OperatorMatrix {
    let ops = build_operators(space);
    let i = C64::new(0.0, 1.0);
    let raise = (&ops.sigma_z - &ops.sigma_y.mapv(|v| i * v)).mapv(|v| v * 0.5);
    let lower = (&ops.sigma_z + &ops.sigma_y.mapv(|v| i * v)).mapv(|v| v * 0.5);
    let coupling = raise.dot(&ops.a) + lower.dot(&ops.a_dag);
    coupling.mapv(|v| v * params.g) + ops.num.mapv(|v| v * params.omega_b) + ops.sigma_x.mapv(|v| v * params.delta)
}

/// Qubit-resonator Hamiltonian -sigma_gap sigma_z / 2 + omega_b a^dag a + lambda (a + a^dag) sigma_x
/// on a two-level qubit (index 0 has sigma_z = +1).
pub fn build_spin_hamiltonian(
    sigma_gap: f64,
    omega_b: f64,
    lambda_coupling: f64,
    space: &HilbertSpace,
) -> Result<OperatorMatrix> {
    if space.dot_dim != 2 {
        return Err(Error::InvalidInput(format!(
            "spin Hamiltonian needs a two-level qubit space, got dot_dim = {}",
            space.dot_dim
        )));
    }
    let dim = space.dim();
    let a = annihilation(space);
    let x = &a + &dagger(&a);
    let mut sz = OperatorMatrix::zeros((dim, dim));
    let mut sx = OperatorMatrix::zeros((dim, dim));
    for n in 0..space.levels() {
        let (up, down) = (space.index(0, n), space.index(1, n));
        sz[[up, up]] = re(1.0);
        sz[[down, down]] = re(-1.0);
        sx[[up, down]] = re(1.0);
        sx[[down, up]] = re(1.0);
    }
    Ok(sz.mapv(|v| v * (-0.5 * sigma_gap))
        + number(space).mapv(|v| v * omega_b)
        + x.dot(&sx).mapv(|v| v * lambda_coupling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermiticity_defect;
    use crate::model::space::{LEFT, RIGHT};

    #[test]
    fn decoupled_hamiltonian_is_diagonal() {
        let p = ModelParams {
            epsilon: 0.0,
            delta: 0.0,
            g: 0.0,
            ..ModelParams::default()
        };
        let s = HilbertSpace::transport(3).unwrap();
        let h = build_hamiltonian(&p, &s);
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let want = if i == j { s.split(i).1 as f64 } else { 0.0 };
                assert_eq!(h[[i, j]], re(want));
            }
        }
    }

    #[test]
    fn tunneling_element() {
        let p = ModelParams::default();
        let s = HilbertSpace::transport(4).unwrap();
        let h = build_hamiltonian(&p, &s);
        for n in 0..=4 {
            assert_eq!(h[[s.index(LEFT, n), s.index(RIGHT, n)]], re(0.5));
        }
    }

    #[test]
    fn coupling_sign_structure() {
        let p = ModelParams {
            g: 0.4,
            ..ModelParams::default()
        };
        let s = HilbertSpace::transport(3).unwrap();
        let h = build_hamiltonian(&p, &s);
        assert!((h[[s.index(LEFT, 0), s.index(LEFT, 1)]] - re(0.4)).norm() < 1e-15);
        assert!((h[[s.index(RIGHT, 0), s.index(RIGHT, 1)]] - re(-0.4)).norm() < 1e-15);
    }

    #[test]
    fn builders_are_hermitian() {
        let p = ModelParams {
            epsilon: 0.3,
            g: 0.37,
            ..ModelParams::default()
        };
        let s = HilbertSpace::transport(5).unwrap();
        assert!(hermiticity_defect(&build_hamiltonian(&p, &s)) <= 1e-12);
        assert!(hermiticity_defect(&build_jc_hamiltonian(&p, &s)) <= 1e-12);
        let q = HilbertSpace::qubit(5).unwrap();
        assert!(hermiticity_defect(&build_spin_hamiltonian(1.0, 1.0, 0.1, &q).unwrap()) <= 1e-12);
    }

    #[test]
    fn spin_builder_rejects_transport_space() {
        let s = HilbertSpace::transport(3).unwrap();
        assert!(build_spin_hamiltonian(1.0, 1.0, 0.1, &s).is_err());
    }
}
