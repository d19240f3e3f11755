//! Stationary state and single-time observables.

mod moments;
mod solve;

pub use moments::{
    channel_current, currents, fano_from, fano_number, min_quadrature_from, min_quadrature_variance, moment_report,
    quadrature_variance, quadrature_variance_from, resonator_moments, Currents, FanoQ, MomentReport, QuadratureMin,
    ResonatorMoments,
};
pub use solve::{solve_steady_state, SteadyState};

pub(crate) use solve::regularizing_shift;
