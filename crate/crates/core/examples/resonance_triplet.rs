//! Electronic noise spectrum on resonance (2 Delta = omega_b) and its peaks.
//!
//! cargo run --release --example resonance_triplet -- 0.4

use transport_noise::model::{resonance_branches, ModelParams};
use transport_noise::noise::{find_peaks_in, Normalization, Pair};
use transport_noise::sweep::AxisValues;
use transport_noise::TransportSystem;

fn main() -> transport_noise::Result<()> {
    let g: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.4);
    let p = ModelParams {
        g,
        n_fock: 6,
        ..ModelParams::default()
    };
    let sys = TransportSystem::new(&p)?;
    let omegas = AxisValues::Range {
        start: 0.2,
        stop: 1.8,
        count: 300,
    }
    .values();
    let values = omegas
        .iter()
        .map(|&w| sys.noise(Pair::EE, w, Normalization::Fano))
        .collect::<transport_noise::Result<Vec<_>>>()?;

    let (up, low, mid) = resonance_branches(&p);
    println!("g = {g}: predicted branches {low:.4} {mid:.4} {up:.4}");
    for pk in find_peaks_in(&omegas, &values) {
        println!("peak at omega = {:.4}, S/2I = {:.4}", pk.omega, pk.height);
    }
    Ok(())
}
