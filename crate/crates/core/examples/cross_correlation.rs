//! Electron-phonon cross noise S_eb(0) across detuning.

use transport_noise::model::ModelParams;
use transport_noise::noise::{Normalization, Pair};
use transport_noise::sweep::preset;
use transport_noise::TransportSystem;

fn main() -> transport_noise::Result<()> {
    let base = preset("fig5c")?.base;
    for g in [0.0, 0.1, 0.4] {
        println!("g = {g}");
        for k in 0..=10 {
            let epsilon = -0.5 + 0.25 * k as f64;
            let p = ModelParams {
                g,
                epsilon,
                n_fock: 12,
                ..base
            };
            let sys = TransportSystem::new(&p)?;
            println!(
                "  eps {epsilon:5.2}: {:.6e}",
                sys.noise(Pair::EB, 0.0, Normalization::Raw)?
            );
        }
    }
    Ok(())
}
