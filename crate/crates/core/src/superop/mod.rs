//! Vectorized Lindblad generator, its jump channels, counting deformation and spectrum.
//!
//! Column stacking throughout: `vec(A rho B) = (B^T (x) A) vec(rho)`.

mod layout;
mod liouvillian;
mod spectrum;
mod vectorize;

pub use layout::{Layout, SectorKind};
pub use liouvillian::{
    build_liouvillian, counting_liouvillian, thermal_occupation, ChannelId, Dissipator, JumpChannel, Superoperator,
};
pub use spectrum::{eigenvalues, spectrum, summarize, LiouvillianSpectrum, SpectralSummary};
pub use vectorize::{devectorize, vec_index, vectorize};
