//! Runs a preset grid and writes it as CSV.
//!
//! cargo run --release --example sweep_to_csv -- fig6b grid.csv

use transport_noise::cli::grid_csv;
use transport_noise::sweep::{preset, run_sweep};

fn main() -> transport_noise::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "fig6b".into());
    let out = args
        .next()
        .unwrap_or_else(|| std::env::temp_dir().join(format!("{name}.csv")).display().to_string());
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let grid = run_sweep(&preset(&name)?, workers)?;
    std::fs::write(&out, grid_csv(&grid))?;
    println!(
        "{name}: {:?} points at cutoff {} -> {out}",
        grid.shape, grid.cutoff_used
    );
    for f in &grid.failures {
        println!("gap at {:?}: {}", f.index, f.message);
    }
    Ok(())
}
