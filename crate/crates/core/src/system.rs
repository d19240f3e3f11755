//! Model parameters to generator, steady state and observables in one place.

use crate::error::Result;
use crate::model::{build_hamiltonian, HilbertSpace, ModelParams};
use crate::noise::{normalize, Normalization, Pair, ResolventSolver};
use crate::steady::{
    channel_current, currents, moment_report, solve_steady_state, Currents, MomentReport, SteadyState,
};
use crate::superop::{build_liouvillian, ChannelId, SectorKind, Superoperator};

/// Full generator on the `D^2` space.
pub fn full_generator(params: &ModelParams) -> Result<Superoperator> {
    params.validate()?;
    let space = HilbertSpace::transport(params.n_fock)?;
    build_liouvillian(&build_hamiltonian(params, &space), params, &space)
}

/// Transport model reduced to the sector holding populations, with its steady state.
#[derive(Debug, Clone)]
pub struct TransportSystem {
    pub params: ModelParams,
    pub space: HilbertSpace,
    pub generator: Superoperator,
    pub steady: SteadyState,
}

impl TransportSystem {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let full = full_generator(params)?;
        let generator = full.restrict(SectorKind::Populations)?;
        let steady = solve_steady_state(&generator)?;
        Ok(TransportSystem {
            params: *params,
            space: HilbertSpace::transport(params.n_fock)?,
            generator,
            steady,
        })
    }

    pub fn currents(&self) -> Result<Currents> {
        currents(&self.steady, &self.generator)
    }

    pub fn current(&self, id: ChannelId) -> Result<f64> {
        channel_current(&self.steady, &self.generator, id)
    }

    pub fn moments(&self) -> Result<MomentReport> {
        moment_report(&self.steady, &self.generator)
    }

    pub fn resolvent(&self) -> Result<ResolventSolver<'_>> {
        ResolventSolver::new(&self.generator, &self.steady)
    }

    /// Noise by the resolvent route.
    pub fn noise(&self, pair: Pair, omega: f64, norm: Normalization) -> Result<f64> {
        let raw = self.resolvent()?.noise(pair, omega)?;
        normalize(raw, pair, norm, self.current(pair.i)?)
    }
}
