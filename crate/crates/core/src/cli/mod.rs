//! Config files, output formats, the invariant suite and the command runner.

mod check;
mod commands;
mod config;
mod output;

pub use check::{
    analytic_checks, factorization_defect, run_checks, single_level_fano, CheckReport, CheckRow, CheckTarget,
    SamplePoint, Status, DENSE_CHECK_CUTOFF, ZERO_SCALE,
};
pub use commands::{
    check_targets, cmd_check, cmd_spectrum, cmd_steady, execute, load_config, resolve_cutoff, run, Command, Overrides,
    SteadyOutput, WORKERS_ENV,
};
pub use config::{
    parse_config, parse_config_str, parse_methods, serialize_config, CheckLevel, OutputFormat, OutputSettings,
    RunConfig, SpectrumSettings,
};
pub use output::{fmt_f64, grid_csv, spectra_csv, to_json, GRID_SCHEMA, SPECTRUM_SCHEMA};
