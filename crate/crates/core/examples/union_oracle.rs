//! Brute-force union of outer bounds over a policy grid, checked against
//! the closed-form closure boundary.

use ehrelay::closure::{boundary, union_oracle_with, OracleOptions, RateGrid};
use ehrelay::model::success_aggregate;
use ehrelay::{ChannelParams, EnergyParams, RatePoint};

fn main() -> ehrelay::Result<()> {
    let ch = ChannelParams::new(0.2, 0.6, 0.5)?;
    let en = EnergyParams::new(0.5, 0.6)?;
    let opts = OracleOptions {
        rates: RateGrid {
            s_max: success_aggregate(&ch),
            r_max: ch.p_rd,
            points: 61,
        },
        ..OracleOptions::new(60)
    };
    let oracle = union_oracle_with(&ch, &en, &opts);
    let b = boundary(&ch, &en);

    let mut disagree = 0;
    let mut worst: f64 = 0.0;
    for (s, r, inside) in oracle.points() {
        if b.contains(RatePoint {
            lambda_s: s,
            lambda_r: r,
        }) != inside
        {
            disagree += 1;
            worst = worst.max(b.distance_to((s, r), 256));
        }
    }
    println!(
        "{} policies, {} of {} grid points inside, {disagree} disagreements (max distance to boundary {worst:.2e})",
        oracle.policies_evaluated,
        oracle.count_inside(),
        oracle.inside.len()
    );
    Ok(())
}
