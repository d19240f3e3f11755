//! Currents and resonator moments at one point.

use transport_noise::cli::to_json;
use transport_noise::model::ModelParams;
use transport_noise::TransportSystem;

fn main() -> transport_noise::Result<()> {
    let p = ModelParams {
        g: 0.2,
        epsilon: 0.1,
        temperature: 0.5,
        n_fock: 12,
        ..ModelParams::default()
    };
    let sys = TransportSystem::new(&p)?;
    print!("{}", to_json(&sys.moments()?)?);
    Ok(())
}
