//! Number-state and quadrature squeezing of the resonator against coupling.

use transport_noise::model::ModelParams;
use transport_noise::noise::{Normalization, Pair};
use transport_noise::sweep::{fock_convergence, Probe};
use transport_noise::TransportSystem;

fn main() -> transport_noise::Result<()> {
    println!("   g      F_Q   S_bb/2I_b   min quadrature variance");
    for k in 1..=10 {
        let g = 0.05 * k as f64;
        let base = ModelParams {
            g,
            ..ModelParams::default()
        };
        let n = fock_convergence(&base, &Probe::MOMENTS, 45)?.cutoff;
        let sys = TransportSystem::new(&base.with_n_fock(n))?;
        let m = sys.moments()?;
        let sbb = sys.noise(Pair::BB, 0.0, Normalization::Fano)?;
        println!("{g:5.2} {:8.4} {sbb:11.4} {:25.3e}", m.fano_q, m.quad_min.value);
    }
    Ok(())
}
