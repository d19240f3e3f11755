//! Invariant suite on one preset.

use transport_noise::cli::{run_checks, CheckLevel, CheckTarget};
use transport_noise::sweep::preset;

fn main() -> transport_noise::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig2".into());
    let target = CheckTarget::from_spec(&name, &preset(&name)?, CheckLevel::Fast);
    let report = run_checks(&[target], CheckLevel::Fast, 1)?;
    print!("{}", report.table());
    Ok(())
}
