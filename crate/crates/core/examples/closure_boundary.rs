//! Closure of the stability region over all policies, the two optimisation
//! problems behind it, and the policy that attains a boundary point.

use ehrelay::closure::{achieving_policy, boundary, optimize_p1, optimize_p2};
use ehrelay::{ChannelParams, EnergyParams};

fn main() -> ehrelay::Result<()> {
    let ch = ChannelParams::new(0.2, 0.6, 0.5)?;
    for en in [EnergyParams::new(0.5, 0.6)?, EnergyParams::new(0.3, 0.4)?] {
        let b = boundary(&ch, &en);
        println!(
            "delta = ({}, {}), case {:?}",
            en.delta_s, en.delta_r, b.case
        );
        for v in b.vertices() {
            println!("  {} = ({:.4}, {:.4})", v.label, v.lambda_s, v.lambda_r);
        }
        for seg in &b.segments {
            println!("  {} {:?}", seg.name(), seg.shape);
        }

        let x = 0.5 * b.x_end();
        let p2 = optimize_p2(x, &ch, &en)?;
        let p1 = optimize_p1(p2.y_star, &ch, &en)?;
        let pol = achieving_policy(x, &ch, &en)?;
        println!(
            "  at lambda_s = {x:.4}: best lambda_r = {:.4} ({:?}, q_r = {:.4}); inverse gives lambda_s = {:.4}",
            p2.y_star, p2.branch, p2.q_r_star, p1.x_star
        );
        println!("  attained by q_s = {:.4}, q_r = {:.4}", pol.q_s, pol.q_r);
    }
    Ok(())
}
