//! Parameter grids with automatic Fock-cutoff control.

mod convergence;
mod presets;
mod run;
mod spec;

pub use convergence::{cutoff_start, fock_convergence, ConvergenceReport, ConvergenceStep, Probe, CUTOFF_TOLERANCE};
pub use presets::{preset, MANIFEST, PRESET_NAMES};
pub use run::{run_sweep, sweep_cutoff, GridFailure, GridResult};
pub use spec::{AxisParam, AxisSpec, AxisValues, FockPolicy, Quantity, SweepSpec};
