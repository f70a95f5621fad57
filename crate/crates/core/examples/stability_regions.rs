//! Inner and outer bounds at a fixed policy: membership and boundary polylines.

use ehrelay::regions::{
    inner_boundary, inner_contains, outer_boundary, outer_contains, RegionSpec,
};
use ehrelay::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};

fn main() -> ehrelay::Result<()> {
    let spec = RegionSpec::new(
        ChannelParams::new(0.2, 0.6, 0.5)?,
        EnergyParams::new(0.5, 0.6)?,
        AccessPolicy::new(0.3, 0.4)?,
    );

    for (s, r) in [(0.05, 0.10), (0.05, 0.16), (0.12, 0.05), (0.3, 0.3)] {
        let p = RatePoint::new(s, r)?;
        println!(
            "({s:.2}, {r:.2}): inner {:5}  outer {:5}",
            inner_contains(p, &spec),
            outer_contains(p, &spec)
        );
    }

    for (name, poly) in [
        ("inner", inner_boundary(&spec)),
        ("outer", outer_boundary(&spec)),
    ] {
        println!("{name} boundary:");
        for (i, v) in poly.vertices.iter().enumerate() {
            let tag = poly.segments.get(i).map_or("", |c| c.as_str());
            println!("  ({:.4}, {:.4}) {tag}", v.lambda_s, v.lambda_r);
        }
    }
    Ok(())
}
