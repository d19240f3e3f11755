//! Spin qubit in a field gradient coupled to a mechanical resonator.

use transport_noise::model::{build_spin_hamiltonian, spin_estimates, EnergySpectrum, HilbertSpace};

fn main() -> transport_noise::Result<()> {
    let (field, rabi) = spin_estimates(0.1, 0.01)?;
    println!("zero-point field {field:.3e} mT, Rabi frequency {rabi:.3e} Hz");

    let space = HilbertSpace::qubit(10)?;
    for lambda in [0.0, 0.02, 0.05] {
        let h = build_spin_hamiltonian(1.0, 1.0, lambda, &space)?;
        let e = EnergySpectrum::of(&h)?.with_gaps(&[(1, 2)]);
        println!(
            "lambda {lambda:.2}: lowest levels {:?}, splitting {:.5}",
            &e.eigenvalues[..4],
            e.gaps[0].2
        );
    }
    Ok(())
}
