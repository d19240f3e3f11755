//! The same noise value from four independent routes.

use transport_noise::model::ModelParams;
use transport_noise::noise::{counting_fd_check, horizon_from_spectrum, noise_macdonald_oracle, EigenExpansion, Pair};
use transport_noise::TransportSystem;

fn main() -> transport_noise::Result<()> {
    let p = ModelParams {
        g: 0.2,
        temperature: 0.3,
        n_fock: 6,
        ..ModelParams::default()
    };
    let sys = TransportSystem::new(&p)?;
    let solver = sys.resolvent()?;
    let eigen = EigenExpansion::new(&sys.generator, &sys.steady, Pair::EE)?;
    let opts = horizon_from_spectrum(&sys.generator)?;
    let omegas = [0.0, 0.5, 1.0, 1.2];
    let mac = noise_macdonald_oracle(&sys.generator, &sys.steady, Pair::EE, &omegas, opts)?;
    println!("omega      resolvent          eigen      macdonald");
    for (k, &w) in omegas.iter().enumerate() {
        println!(
            "{w:5.2} {:14.8e} {:14.8e} {:14.8e}",
            solver.noise(Pair::EE, w)?,
            eigen.value(w).value,
            mac[k]
        );
    }
    let fd = counting_fd_check(&sys.generator, Pair::EE)?;
    println!("counting field S(0) = {:.8e} (step {:e})", fd.value, fd.step);
    Ok(())
}
