use std::io::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use super::check::{run_checks, CheckReport, CheckTarget};
use super::config::{parse_config, parse_methods, CheckLevel, OutputFormat, RunConfig};
use super::output::{grid_csv, spectra_csv, to_json};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::noise::{noise_spectrum, NoiseSpectrum};
use crate::steady::MomentReport;
use crate::sweep::{fock_convergence, preset, run_sweep, ConvergenceReport, Probe, PRESET_NAMES};
use crate::system::TransportSystem;

const LOOKAHEAD: usize = 3;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "TRANSPORT_NOISE_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Sweep,
    Steady,
    Check,
}

/// Command-line values layered over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub preset: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub fock_cutoff: Option<usize>,
    pub workers: Option<usize>,
    pub methods: Option<String>,
    pub check: Option<String>,
}

/// Config file first, then command-line overrides.
pub fn load_config(o: &Overrides) -> Result<RunConfig> {
    let mut cfg = match (&o.config, &o.preset) {
        (Some(_), Some(_)) => return Err(Error::config("preset", 0, "give either --config or --preset, not both")),
        (Some(path), None) => parse_config(path)?,
        (None, Some(name)) => {
            let spec = preset(name).map_err(|e| Error::config("preset", 0, e.to_string()))?;
            RunConfig {
                model: spec.base,
                spec: Some(spec),
                ..RunConfig::default()
            }
        }
        (None, None) => RunConfig::default(),
    };
    if let Some(p) = &o.out {
        cfg.output.path = Some(p.clone());
    }
    if let Some(f) = &o.format {
        cfg.output.format = OutputFormat::parse(f).map_err(|e| Error::config("--format", 0, e.to_string()))?;
    }
    if let Some(n) = o.fock_cutoff {
        cfg.fock_cutoff = Some(n);
        cfg.model.n_fock = n;
    }
    if let Some(w) = o.workers {
        cfg.workers = w;
    }
    if let Some(m) = &o.methods {
        cfg.methods = parse_methods(m).map_err(|e| Error::config("--methods", 0, e.to_string()))?;
    }
    if let Some(c) = &o.check {
        cfg.check_level = CheckLevel::parse(c).map_err(|e| Error::config("--check", 0, e.to_string()))?;
    }
    let policy = cfg.fock_policy();
    if let Some(s) = cfg.spec.as_mut() {
        s.base = cfg.model;
        s.fock = policy;
    }
    cfg.validate().map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::config("", 0, other.to_string()),
    })?;
    Ok(cfg)
}

/// Model point with its cutoff fixed, either given or from the convergence ladder.
///
/// A ladder result `N` is run at `N + 3`, the upper end of the converged comparison.
pub fn resolve_cutoff(cfg: &RunConfig, probes: &[Probe]) -> Result<(ModelParams, Option<ConvergenceReport>)> {
    match cfg.fock_cutoff {
        Some(n) => Ok((cfg.model.with_n_fock(n), None)),
        None => {
            let r = fock_convergence(&cfg.model, probes, cfg.fock_cap)?;
            Ok((cfg.model.with_n_fock(r.cutoff + LOOKAHEAD), Some(r)))
        }
    }
}

fn single_point(cfg: &RunConfig, what: &str) -> Result<()> {
    if cfg.spec.is_some() {
        return Err(Error::config(
            "sweep",
            0,
            format!("'{what}' works on one model point; use 'sweep' for a grid"),
        ));
    }
    Ok(())
}

/// Spectra for every requested method.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Vec<NoiseSpectrum>> {
    single_point(cfg, "spectrum")?;
    let (params, _) = resolve_cutoff(cfg, &Probe::DEFAULT)?;
    let sys = TransportSystem::new(&params)?;
    let omegas = cfg.spectrum.omegas.values();
    cfg.methods
        .iter()
        .map(|&m| {
            noise_spectrum(
                &sys.generator,
                &sys.steady,
                cfg.spectrum.pair,
                &omegas,
                m,
                cfg.spectrum.normalization,
                None,
            )
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SteadyOutput {
    pub params: ModelParams,
    pub moments: MomentReport,
    pub convergence: Option<ConvergenceReport>,
}

pub fn cmd_steady(cfg: &RunConfig) -> Result<SteadyOutput> {
    single_point(cfg, "steady")?;
    let (params, convergence) = resolve_cutoff(cfg, &Probe::MOMENTS)?;
    let sys = TransportSystem::new(&params)?;
    Ok(SteadyOutput {
        params,
        moments: sys.moments()?,
        convergence,
    })
}

/// Targets for `check`: the preset or model of the config, or every preset when neither is set
/// and the level is `full`.
pub fn check_targets(cfg: &RunConfig, explicit_model: bool) -> Result<Vec<CheckTarget>> {
    match &cfg.spec {
        Some(s) => Ok(vec![CheckTarget::from_spec(
            s.preset.as_deref().unwrap_or("sweep"),
            s,
            cfg.check_level,
        )]),
        None if explicit_model || cfg.check_level == CheckLevel::Fast => {
            Ok(vec![CheckTarget::from_model("model", cfg.model, cfg.fock_policy())])
        }
        None => PRESET_NAMES
            .iter()
            .map(|n| {
                let mut s = preset(n)?;
                s.fock = cfg.fock_policy();
                Ok(CheckTarget::from_spec(n, &s, cfg.check_level))
            })
            .collect(),
    }
}

pub fn cmd_check(cfg: &RunConfig, explicit_model: bool) -> Result<CheckReport> {
    let targets = check_targets(cfg, explicit_model)?;
    run_checks(&targets, cfg.check_level, cfg.workers)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output.path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Runs one command and writes its output.
pub fn execute(cmd: Command, cfg: &RunConfig, explicit_model: bool) -> Result<()> {
    let json = cfg.output.format == OutputFormat::Json;
    match cmd {
        Command::Spectrum => {
            let spectra = cmd_spectrum(cfg)?;
            emit(
                cfg,
                &if json {
                    to_json(&spectra)?
                } else {
                    spectra_csv(&spectra)
                },
            )
        }
        Command::Sweep => {
            let spec = cfg
                .spec
                .as_ref()
                .ok_or_else(|| Error::config("sweep", 0, "no sweep axes or preset given"))?;
            let grid = run_sweep(spec, cfg.workers)?;
            emit(cfg, &if json { to_json(&grid)? } else { grid_csv(&grid) })?;
            for f in &grid.failures {
                eprintln!("grid point {:?}: {}", f.index, f.message);
            }
            Ok(())
        }
        Command::Steady => {
            let s = cmd_steady(cfg)?;
            emit(cfg, &to_json(&s)?)
        }
        Command::Check => {
            let report = cmd_check(cfg, explicit_model)?;
            emit(cfg, &if json { to_json(&report)? } else { report.table() })?;
            if report.passed() {
                Ok(())
            } else {
                let names: Vec<String> = report.failures().map(|r| format!("{} [{}]", r.name, r.scope)).collect();
                Err(Error::Invariant(names.join(", ")))
            }
        }
    }
}

/// Loads, runs and maps the outcome to an exit status.
pub fn run(cmd: Command, o: &Overrides) -> i32 {
    let result = load_config(o).and_then(|cfg| execute(cmd, &cfg, o.config.is_some()));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_and_config_conflict() {
        let o = Overrides {
            config: Some("x.conf".into()),
            preset: Some("fig2".into()),
            ..Overrides::default()
        };
        assert_eq!(load_config(&o).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn spectrum_on_preset_is_config_error() {
        let o = Overrides {
            preset: Some("fig2".into()),
            ..Overrides::default()
        };
        let cfg = load_config(&o).unwrap();
        assert_eq!(cmd_spectrum(&cfg).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn thermal_fano_from_steady() {
        let mut cfg = RunConfig::default();
        cfg.model.temperature = 1.0;
        cfg.model.g = 0.0;
        let s = cmd_steady(&cfg).unwrap();
        assert!((s.moments.fano_q - 1.5819767).abs() < 1e-6, "{}", s.moments.fano_q);
        assert!(s.convergence.is_some());
    }

    #[test]
    fn override_validation() {
        let o = Overrides {
            workers: Some(0),
            ..Overrides::default()
        };
        assert_eq!(load_config(&o).unwrap_err().exit_code(), 2);
        let o = Overrides {
            format: Some("xml".into()),
            ..Overrides::default()
        };
        assert_eq!(load_config(&o).unwrap_err().exit_code(), 2);
    }
}
