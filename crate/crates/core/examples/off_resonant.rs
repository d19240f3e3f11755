//! Peak positions against the rotating-wave branches as Delta moves off resonance.

use transport_noise::model::{resonance_branches, ModelParams};
use transport_noise::noise::{find_peaks_in, Normalization, Pair};
use transport_noise::sweep::AxisValues;
use transport_noise::TransportSystem;

fn main() -> transport_noise::Result<()> {
    let omegas = AxisValues::Range {
        start: 0.2,
        stop: 1.8,
        count: 161,
    }
    .values();
    for g in [0.1, 0.4] {
        println!("g = {g}");
        for delta in [0.3, 0.4, 0.5, 0.6, 0.7] {
            let p = ModelParams {
                g,
                delta,
                n_fock: 8,
                ..ModelParams::default()
            };
            let sys = TransportSystem::new(&p)?;
            let values = omegas
                .iter()
                .map(|&w| sys.noise(Pair::EE, w, Normalization::Fano))
                .collect::<transport_noise::Result<Vec<_>>>()?;
            let peaks: Vec<String> = find_peaks_in(&omegas, &values)
                .iter()
                .map(|p| format!("{:.3}", p.omega))
                .collect();
            let (up, low, mid) = resonance_branches(&p);
            println!(
                "  delta {delta:.1}: branches {low:.3} {mid:.3} {up:.3} | peaks {}",
                peaks.join(" ")
            );
        }
    }
    Ok(())
}
