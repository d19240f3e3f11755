use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use transport_noise::cli::{run, Command, Overrides};

#[derive(Parser)]
#[command(
    name = "transport-noise",
    version,
    about = "Current noise of a transport qubit coupled to a resonator"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Noise spectrum at one model point.
    Spectrum(Flags),
    /// Parameter grid from a preset or config.
    Sweep(Flags),
    /// Currents and resonator moments at one model point.
    Steady(Flags),
    /// Invariant and analytic-limit suite.
    Check(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    fock_cutoff: Option<usize>,
    #[arg(long, env = "TRANSPORT_NOISE_WORKERS")]
    workers: Option<usize>,
    /// Comma-separated: resolvent, eigen, macdonald
    #[arg(long)]
    methods: Option<String>,
    /// fast or full
    #[arg(long)]
    check: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    let (cmd, f) = match cli.command {
        Sub::Spectrum(f) => (Command::Spectrum, f),
        Sub::Sweep(f) => (Command::Sweep, f),
        Sub::Steady(f) => (Command::Steady, f),
        Sub::Check(f) => (Command::Check, f),
    };
    let o = Overrides {
        config: f.config,
        preset: f.preset,
        out: f.out,
        format: f.format,
        fock_cutoff: f.fock_cutoff,
        workers: f.workers,
        methods: f.methods,
        check: f.check,
    };
    std::process::exit(run(cmd, &o));
}
