//! Truncated dot-resonator space, operators, Hamiltonians and closed-form spectroscopy.

mod collapse;
mod hamiltonian;
mod operators;
mod params;
mod space;
mod spectroscopy;

pub use collapse::{coherent_weights, equal_weights, p_left_analytic, p_left_unitary, CollapseTrace};
pub use hamiltonian::{build_hamiltonian, build_jc_hamiltonian, build_spin_hamiltonian};
pub use operators::{annihilation, build_operators, dot_transition, number, OperatorMatrix, OperatorSet};
pub use params::ModelParams;
pub use space::{HilbertSpace, EMPTY, LEFT, RIGHT};
pub use spectroscopy::{
    jc_ground_energy, jc_multiplet_energies, resonance_branches, spin_estimates, EnergySpectrum, SPIN_HZ_PER_TESLA,
};
