//! Zero-frequency Fano factor against dot detuning for a weakly coupled resonator.

use transport_noise::model::ModelParams;
use transport_noise::noise::{Normalization, Pair};
use transport_noise::sweep::{fock_convergence, preset, Probe};
use transport_noise::TransportSystem;

fn main() -> transport_noise::Result<()> {
    let base = preset("fig5a")?.base;
    for t in [0.0, 1.0, 2.0] {
        let p = ModelParams {
            temperature: t,
            epsilon: -0.1,
            ..base
        };
        let n = fock_convergence(&p, &Probe::DEFAULT, 45)?.cutoff;
        print!("T = {t:.1} (N = {n:2}):");
        for epsilon in [-1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0] {
            let sys = TransportSystem::new(&ModelParams {
                epsilon,
                n_fock: n,
                ..p
            })?;
            print!(" {:.5}", sys.noise(Pair::EE, 0.0, Normalization::Fano)?);
        }
        println!();
    }
    Ok(())
}
