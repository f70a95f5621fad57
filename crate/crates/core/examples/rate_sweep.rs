//! Analytic membership next to simulated verdicts over a small rate grid,
//! written as CSV to stdout.

use ehrelay::stability::StabilityCriteria;
use ehrelay::sweep::{run_sweep, write_sweep_csv, SweepSpec};
use ehrelay::{AccessPolicy, ChannelParams, EnergyParams};

fn main() -> ehrelay::Result<()> {
    let spec = SweepSpec {
        ch: ChannelParams::new(0.2, 0.6, 0.5)?,
        en: EnergyParams::new(0.5, 0.6)?,
        pol: AccessPolicy::new(0.3, 0.4)?,
        grid: "0:0.15:0.05".parse()?,
        horizon: 200_000,
        seeds: SweepSpec::seeds_from(42),
        criteria: StabilityCriteria::default(),
    };
    let rows = run_sweep(&spec)?;
    write_sweep_csv(std::io::stdout().lock(), &rows)
}
