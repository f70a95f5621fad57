//! Saturated throughputs, relay share and battery occupancy for one setup.

use ehrelay::model::{
    battery_nonempty_prob, relay_fraction, saturated_throughput, success_aggregate,
};
use ehrelay::{AccessPolicy, ChannelParams, EnergyParams};

fn main() -> ehrelay::Result<()> {
    let ch = ChannelParams::new(0.2, 0.6, 0.5)?;
    let en = EnergyParams::new(0.5, 0.6)?;
    let pol = AccessPolicy::new(0.3, 0.4)?;

    let mu = saturated_throughput(&ch, &en, &pol);
    println!("alpha = {:.4}", success_aggregate(&ch));
    println!(
        "relay share of source departures = {:.4}",
        relay_fraction(&ch)?
    );
    println!("saturated mu_s = {:.4}, mu_r = {:.4}", mu.mu_s, mu.mu_r);
    println!(
        "Pr(battery non-empty): source {:.3}, relay {:.3}",
        battery_nonempty_prob(en.delta_s, pol.q_s),
        battery_nonempty_prob(en.delta_r, pol.q_r)
    );
    Ok(())
}
