//! Measured throughputs against the service rates predicted from measured
//! activity probabilities.

use ehrelay::sim::{measure_service_identities, run, SimConfig, SimMode};
use ehrelay::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};

fn main() -> ehrelay::Result<()> {
    let cfg = SimConfig::new(
        ChannelParams::new(0.2, 0.6, 0.5)?,
        EnergyParams::new(0.5, 0.6)?,
        AccessPolicy::new(0.3, 0.4)?,
        RatePoint::new(0.05, 0.10)?,
        SimMode::Original,
        1_000_000,
        3,
    );
    let m = run(&cfg)?;
    let r = measure_service_identities(&m, &cfg)?;
    println!(
        "source: predicted {:.5}, measured {:.5}",
        r.predicted_mu_s, r.measured_mu_s
    );
    println!(
        "relay:  predicted {:.5}, measured {:.5}",
        r.predicted_mu_r, r.measured_mu_r
    );
    println!("relayed share {:.4}", m.relayed_ratio().unwrap_or(f64::NAN));
    Ok(())
}
