//! Empirical stability verdicts for a point inside the inner bound and a
//! point outside the outer bound.

use ehrelay::sim::{SimConfig, SimMode};
use ehrelay::stability::{assess, StabilityCriteria};
use ehrelay::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};

fn main() -> ehrelay::Result<()> {
    let criteria = StabilityCriteria::default();
    for rates in [RatePoint::new(0.05, 0.10)?, RatePoint::new(0.3, 0.3)?] {
        let cfg = SimConfig::new(
            ChannelParams::new(0.2, 0.6, 0.5)?,
            EnergyParams::new(0.5, 0.6)?,
            AccessPolicy::new(0.3, 0.4)?,
            rates,
            SimMode::Original,
            1_000_000,
            0,
        );
        let v = assess(&cfg, &[1, 2, 3], &criteria)?;
        println!(
            "({}, {}): source {} relay {} network {}",
            rates.lambda_s,
            rates.lambda_r,
            v.source.verdict,
            v.relay.verdict,
            v.network()
        );
        for e in &v.relay.seeds {
            println!(
                "  relay seed {}: slope {:+.2e} +/- {:.1e}, tail mean {:.1}",
                e.seed, e.slope, e.slope_ci95, e.final_quartile_mean
            );
        }
    }
    Ok(())
}
