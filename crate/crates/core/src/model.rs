//! Closed-form scalar quantities of the two-hop network.
//!
//! Throughout, `alpha = p_sd + (1 - p_sd) p_sr` is the probability that a
//! lone source transmission leaves the source queue (delivered directly or
//! taken over by the relay).

use crate::error::{Error, Result};
use crate::params::{
    AccessPolicy, ChannelParams, EnergyParams, RatePoint, ThroughputPair, PROB_TOL,
};

/// Probability that a collision-free source transmission leaves the source.
pub fn success_aggregate(ch: &ChannelParams) -> f64 {
    ch.p_sd + ch.relay_catch()
}

/// Fraction of source departures that are taken over by the relay,
/// `(1 - p_sd) p_sr / alpha`.
///
/// Depends on the channel only. Errors when `alpha = 0`, where no packet ever
/// departs and the conditional fraction is undefined.
pub fn relay_fraction(ch: &ChannelParams) -> Result<f64> {
    let alpha = success_aggregate(ch);
    if alpha <= 0.0 {
        return Err(Error::DegenerateChannel(
            "p_sd + (1 - p_sd) p_sr = 0, the relay share of departures is undefined",
        ));
    }
    Ok(ch.relay_catch() / alpha)
}

/// Total packet arrival rate into the relay queue: exogenous plus the
/// relayed share of the source traffic.
pub fn relay_total_arrival(rates: RatePoint, ch: &ChannelParams) -> Result<f64> {
    Ok(rates.lambda_r + relay_fraction(ch)? * rates.lambda_s)
}

/// Stationary probability that a battery with harvest rate `delta` and
/// per-slot drain probability `q` is non-empty: `min(delta / q, 1)`.
///
/// With `q = 0` the battery is never drained, so it is non-empty iff any
/// energy ever arrives.
pub fn battery_nonempty_prob(delta: f64, q: f64) -> f64 {
    if q <= 0.0 {
        return if delta > 0.0 { 1.0 } else { 0.0 };
    }
    (delta / q).min(1.0)
}

/// Throughputs when both packet queues are permanently backlogged.
pub fn saturated_throughput(
    ch: &ChannelParams,
    en: &EnergyParams,
    pol: &AccessPolicy,
) -> ThroughputPair {
    let (a, b) = pol.effective(en);
    ThroughputPair {
        mu_s: a * (1.0 - b) * success_aggregate(ch),
        mu_r: b * (1.0 - a) * ch.p_rd,
    }
}

fn checked_fraction(numerator: f64, denominator: f64, what: &'static str) -> Result<f64> {
    if denominator <= 0.0 {
        return Err(Error::DegenerateRegion(what));
    }
    let f = numerator / denominator;
    if f > 1.0 + PROB_TOL {
        return Err(Error::UnstableOccupancy(f));
    }
    Ok(f.min(1.0))
}

/// Fraction of slots in which the relay is active when the source always
/// has something (possibly a dummy) to send.
pub fn hypo_active_fraction_relay(
    rates: RatePoint,
    ch: &ChannelParams,
    en: &EnergyParams,
    pol: &AccessPolicy,
) -> Result<f64> {
    let (a, _) = pol.effective(en);
    let load = relay_total_arrival(rates, ch)?;
    checked_fraction(
        load,
        (1.0 - a) * pol.q_r * ch.p_rd,
        "relay never succeeds in the source-dominant system",
    )
}

/// Fraction of slots in which the source is active when the relay always
/// has something to send.
pub fn hypo_active_fraction_source(
    rates: RatePoint,
    ch: &ChannelParams,
    en: &EnergyParams,
    pol: &AccessPolicy,
) -> Result<f64> {
    let (_, b) = pol.effective(en);
    checked_fraction(
        rates.lambda_s,
        pol.q_s * (1.0 - b) * success_aggregate(ch),
        "source never succeeds in the relay-dominant system",
    )
}
