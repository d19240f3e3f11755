//! Cross-checks against independent dense-algebra oracles and closed forms.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Solve, SVD};
use num_complex::Complex64 as C64;

use transport_noise::model::{build_hamiltonian, HilbertSpace, ModelParams};
use transport_noise::noise::{noise_resolvent, Pair};
use transport_noise::steady::{channel_current, solve_steady_state};
use transport_noise::superop::{
    build_liouvillian, thermal_occupation, vectorize, ChannelId, Dissipator, Superoperator,
};
use transport_noise::{full_generator, TransportSystem};

/// Null vector of the dense full generator, normalized to unit trace.
fn dense_null_state(l: &Superoperator) -> Array2<C64> {
    let a = l.total.to_dense();
    let (_, s, vt) = a.svd(false, true).unwrap();
    let vt = vt.unwrap();
    let k = s.len() - 1;
    assert!(s[k] < 1e-12 * s[0], "no null vector: {}", s[k]);
    let v: Vec<C64> = vt.row(k).iter().map(|x| x.conj()).collect();
    let d = l.dim_rho();
    let mut rho = Array2::<C64>::zeros((d, d));
    for j in 0..d {
        for i in 0..d {
            rho[[i, j]] = v[i + j * d];
        }
    }
    let tr = rho.diag().sum();
    rho.mapv(|x| x / tr)
}

fn max_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

#[test]
fn steady_state_matches_dense_null_space() {
    let p = ModelParams {
        g: 0.2,
        n_fock: 5,
        ..ModelParams::default()
    };
    let full = full_generator(&p).unwrap();
    let oracle = dense_null_state(&full);
    let sys = TransportSystem::new(&p).unwrap();
    assert!(max_diff(&oracle, &sys.steady.rho) <= 1e-8);
}

#[test]
fn weak_coupling_current_matches_dense_oracle() {
    let p = ModelParams {
        delta: 0.1,
        gamma_l: 0.1,
        gamma_r: 0.001,
        gamma_b: 0.01,
        g: 0.0008,
        n_fock: 3,
        ..ModelParams::default()
    };
    let full = full_generator(&p).unwrap();
    let oracle = dense_null_state(&full);
    let m = &full.channel(ChannelId::E).unwrap().matrix;
    let v = vectorize(&oracle).unwrap();
    let lv = m.mul_vec(v.as_slice().unwrap());
    let d = full.dim_rho();
    let want: f64 = (0..d).map(|i| lv[i + i * d].re).sum();
    let sys = TransportSystem::new(&p).unwrap();
    let got = sys.current(ChannelId::E).unwrap();
    assert!(want > 0.0);
    assert!(((got - want) / want).abs() <= 1e-8, "{got} vs {want}");
}

/// `S_ij(omega)` from a dense LAPACK solve on the full generator.
fn dense_noise(l: &Superoperator, rho: &Array2<C64>, pair: Pair, omega: f64) -> f64 {
    let d = l.dim_rho();
    let n = d * d;
    let rv = vectorize(rho).unwrap();
    let trace = |v: &Array1<C64>| -> C64 { (0..d).map(|i| v[i + i * d]).sum() };
    let q = |v: Array1<C64>| -> Array1<C64> {
        let t = trace(&v);
        &v - &rv.mapv(|x| x * t)
    };
    let mut a = l.total.to_dense();
    for k in 0..n {
        a[[k, k]] += C64::new(0.0, omega);
    }
    let ch = |id: ChannelId| l.channel(id).unwrap().matrix.to_dense();
    let t = |i: ChannelId, j: ChannelId| -> C64 {
        let x = a.solve(&q(ch(j).dot(&rv))).unwrap();
        trace(&ch(i).dot(&q(x)))
    };
    let shot = if pair.i == pair.j {
        trace(&ch(pair.i).dot(&rv)).re
    } else {
        0.0
    };
    // integral of exp((L + i w) t) over t >= 0 is -(L + i w)^{-1}
    2.0 * (shot - (t(pair.i, pair.j) + t(pair.j, pair.i)).re)
}

#[test]
fn resolvent_matches_dense_solve() {
    let p = ModelParams {
        g: 0.3,
        epsilon: 0.1,
        temperature: 0.4,
        n_fock: 4,
        ..ModelParams::default()
    };
    let full = full_generator(&p).unwrap();
    let sys = TransportSystem::new(&p).unwrap();
    let solver = sys.resolvent().unwrap();
    for pair in [Pair::EE, Pair::BB, Pair::EB] {
        for w in [0.3, 0.7, 1.0, 1.3] {
            let want = dense_noise(&full, &sys.steady.rho, pair, w);
            let got = solver.noise(pair, w).unwrap();
            let scale = want.abs().max(1e-3 * 2.0 * sys.current(ChannelId::E).unwrap());
            assert!(((got - want) / scale).abs() < 1e-9, "{pair} at {w}: {got} vs {want}");
        }
    }
}

fn resonant_level(gl: f64, gr: f64) -> Superoperator {
    let mut fill = Array2::<C64>::zeros((2, 2));
    fill[[1, 0]] = C64::new(1.0, 0.0);
    let empty = fill.t().to_owned();
    Superoperator::lindblad(
        &Array2::zeros((2, 2)),
        &[
            Dissipator {
                op: fill,
                rate: gl,
                channel: Some(ChannelId::In),
            },
            Dissipator {
                op: empty,
                rate: gr,
                channel: Some(ChannelId::E),
            },
        ],
    )
    .unwrap()
}

#[test]
fn resonant_level_lorentzian() {
    // S(w)/2I = 1 - 2 G_L G_R / ((G_L + G_R)^2 + w^2)
    for (gl, gr) in [(0.3, 0.1), (0.05, 0.05), (1.0, 0.2)] {
        let l = resonant_level(gl, gr);
        let ss = solve_steady_state(&l).unwrap();
        let i = channel_current(&ss, &l, ChannelId::E).unwrap();
        assert!((i - gl * gr / (gl + gr)).abs() < 1e-14);
        for w in [0.0, 0.1, 0.4, 2.0] {
            let got = noise_resolvent(&l, &ss, Pair::EE, w).unwrap() / (2.0 * i);
            let want = 1.0 - 2.0 * gl * gr / ((gl + gr).powi(2) + w * w);
            assert!((got - want).abs() < 1e-12, "{gl} {gr} {w}: {got} vs {want}");
        }
    }
}

#[test]
fn thermal_grouping_equals_standard_form() {
    // gamma_b D[a] + nbar gamma_b (D[a] + D[a^dag]) against (1 + nbar) gamma_b D[a] + nbar gamma_b D[a^dag]
    let p = ModelParams {
        g: 0.2,
        temperature: 0.8,
        n_fock: 4,
        ..ModelParams::default()
    };
    let space = HilbertSpace::transport(p.n_fock).unwrap();
    let h = build_hamiltonian(&p, &space);
    let standard = build_liouvillian(&h, &p, &space).unwrap();
    let ops = transport_noise::model::build_operators(&space);
    let nbar = thermal_occupation(p.omega_b, p.temperature);
    let sl_dag = ops.s_l.t().mapv(|x| x.conj());
    let grouped = Superoperator::lindblad(
        &h,
        &[
            Dissipator {
                op: sl_dag,
                rate: p.gamma_l,
                channel: None,
            },
            Dissipator {
                op: ops.s_r.clone(),
                rate: p.gamma_r,
                channel: None,
            },
            Dissipator {
                op: ops.a.clone(),
                rate: p.gamma_b,
                channel: None,
            },
            Dissipator {
                op: ops.a.clone(),
                rate: nbar * p.gamma_b,
                channel: None,
            },
            Dissipator {
                op: ops.a_dag.clone(),
                rate: nbar * p.gamma_b,
                channel: None,
            },
        ],
    )
    .unwrap();
    let a = standard.total.to_dense();
    let b = grouped.total.to_dense();
    assert!(max_diff(&a, &b) < 1e-14);
}

#[test]
fn literal_thermal_line_is_not_trace_preserving() {
    // nbar gamma_b [-a^dag a rho + a rho a^dag + a^dag rho a - rho a^dag a] changes the trace by
    // nbar gamma_b <[a, a^dag]>, which is 1 away from the truncation edge.
    let space = HilbertSpace::transport(6).unwrap();
    let ops = transport_noise::model::build_operators(&space);
    let d = space.dim();
    let mut rho = Array2::<C64>::zeros((d, d));
    rho[[space.index(0, 0), space.index(0, 0)]] = C64::new(1.0, 0.0);
    let ad = &ops.a_dag;
    let a = &ops.a;
    let n = ad.dot(a);
    let out = -n.dot(&rho) + a.dot(&rho).dot(ad) + ad.dot(&rho).dot(a) - rho.dot(&n);
    let tr = out.diag().sum();
    assert!((tr - C64::new(1.0, 0.0)).norm() < 1e-14, "{tr}");
}

#[test]
fn fock_truncation_leaves_thermal_resonator_thermal() {
    let p = ModelParams {
        temperature: 1.0,
        n_fock: 30,
        ..ModelParams::default()
    };
    let sys = TransportSystem::new(&p).unwrap();
    let m = sys.moments().unwrap();
    let nbar = thermal_occupation(1.0, 1.0);
    assert!((m.mean_n - nbar).abs() < 1e-8);
}
