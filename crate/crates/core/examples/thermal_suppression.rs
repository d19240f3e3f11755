//! Side-peak heights of the resonant spectrum as the bath warms up.

use transport_noise::model::{resonance_branches, ModelParams};
use transport_noise::noise::{find_peaks_in, Normalization, Pair};
use transport_noise::sweep::{fock_convergence, AxisValues, Probe};
use transport_noise::TransportSystem;

fn main() -> transport_noise::Result<()> {
    let omegas = AxisValues::Range {
        start: 0.2,
        stop: 1.8,
        count: 300,
    }
    .values();
    for t in [0.0, 0.5, 1.0] {
        let base = ModelParams {
            g: 0.4,
            temperature: t,
            ..ModelParams::default()
        };
        let n = fock_convergence(&base, &Probe::DEFAULT, 45)?.cutoff;
        let sys = TransportSystem::new(&base.with_n_fock(n))?;
        let values = omegas
            .iter()
            .map(|&w| sys.noise(Pair::EE, w, Normalization::Fano))
            .collect::<transport_noise::Result<Vec<_>>>()?;
        let peaks = find_peaks_in(&omegas, &values);
        let (up, low, _) = resonance_branches(&base);
        let height = |x: f64| {
            peaks
                .iter()
                .min_by(|a, b| (a.omega - x).abs().total_cmp(&(b.omega - x).abs()))
                .map_or(f64::NAN, |p| p.height)
        };
        println!(
            "T = {t:.1} (N = {n:2}): lower {:.4}, upper {:.4}",
            height(low),
            height(up)
        );
    }
    Ok(())
}
