//! One seed, four modes: the original network, both dominant systems and
//! the saturated system share every random draw.

use ehrelay::sim::{run, SimConfig, SimMode};
use ehrelay::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};

fn main() -> ehrelay::Result<()> {
    let base = SimConfig::new(
        ChannelParams::new(0.2, 0.6, 0.5)?,
        EnergyParams::new(0.5, 0.6)?,
        AccessPolicy::new(0.3, 0.4)?,
        RatePoint::new(0.05, 0.10)?,
        SimMode::Original,
        500_000,
        7,
    );
    println!(
        "{:>16} {:>8} {:>8} {:>8} {:>8} {:>10}",
        "mode", "mu_s", "mu_r", "Pr(B_S)", "Pr(B_R)", "collisions"
    );
    for mode in SimMode::ALL {
        let m = run(&SimConfig { mode, ..base })?;
        println!(
            "{:>16} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>10}",
            mode.as_str(),
            m.measured_mu_s,
            m.measured_mu_r,
            m.pr_bs_nonempty,
            m.pr_br_nonempty,
            m.counts.collisions
        );
        assert!(m.conservation_holds());
    }
    Ok(())
}
