//! Slot-level simulation of the source / relay / destination network.
//!
//! One slot, in order:
//!
//! 1. eligibility from the start-of-slot state: a node may transmit when its
//!    battery is non-empty and it has a packet (or, in a dominant or
//!    saturated mode, a dummy or endless backlog);
//! 2. each eligible node transmits with its access probability and spends
//!    one energy unit per attempt;
//! 3. two transmissions collide; a lone source packet reaches the
//!    destination with `p_sd`, else the relay with `p_sr`; a lone relay
//!    packet reaches the destination with `p_rd`;
//! 4. packet arrivals and energy harvests land at the end of the slot.
//!
//! Every slot draws exactly one uniform from each of nine independent
//! streams, so runs in different modes with the same seed share their
//! randomness slot by slot.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::success_aggregate;
use crate::params::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};
use crate::stability::least_squares_slope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimMode {
    /// The network as specified.
    #[default]
    Original,
    /// The source transmits dummy packets whenever its queue is empty.
    SourceDominant,
    /// The relay transmits dummy packets whenever its queue is empty.
    RelayDominant,
    /// Both nodes always have a real packet to send.
    Saturated,
}

impl SimMode {
    pub const ALL: [SimMode; 4] = [
        SimMode::Original,
        SimMode::SourceDominant,
        SimMode::RelayDominant,
        SimMode::Saturated,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SimMode::Original => "original",
            SimMode::SourceDominant => "source-dominant",
            SimMode::RelayDominant => "relay-dominant",
            SimMode::Saturated => "saturated",
        }
    }

    fn source_always_sends(&self) -> bool {
        matches!(self, SimMode::SourceDominant | SimMode::Saturated)
    }

    fn relay_always_sends(&self) -> bool {
        matches!(self, SimMode::RelayDominant | SimMode::Saturated)
    }
}

impl fmt::Display for SimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SimMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::field("mode", format!("unknown mode {s:?}; expected original, source-dominant, relay-dominant or saturated")))
    }
}

/// Independent random streams derived from the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(usize)]
pub enum Stream {
    SourceArrival,
    RelayArrival,
    SourceHarvest,
    RelayHarvest,
    SourceDecision,
    RelayDecision,
    ChannelSd,
    ChannelSr,
    ChannelRd,
}

const STREAM_COUNT: usize = 9;

#[derive(Debug, Clone)]
pub struct RngStreams {
    rngs: [ChaCha8Rng; STREAM_COUNT],
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        let rngs = std::array::from_fn(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            rng
        });
        Self { rngs }
    }

    /// Uniform draw in `[0, 1)` from one stream.
    pub fn uniform(&mut self, stream: Stream) -> f64 {
        self.rngs[stream as usize].random::<f64>()
    }

    fn slot_draws(&mut self) -> [f64; STREAM_COUNT] {
        std::array::from_fn(|i| self.rngs[i].random::<f64>())
    }
}

/// Packet and energy backlog at the start of a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NetworkState {
    pub q_s_len: u64,
    pub q_r_len: u64,
    pub b_s_level: u64,
    pub b_r_level: u64,
    pub slot_index: u64,
}

impl NetworkState {
    /// Source is active: packet and energy both available.
    pub fn source_active(&self) -> bool {
        self.q_s_len > 0 && self.b_s_level > 0
    }

    pub fn relay_active(&self) -> bool {
        self.q_r_len > 0 && self.b_r_level > 0
    }
}

/// What happened in one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SlotEvents {
    pub source_attempt: bool,
    pub relay_attempt: bool,
    pub source_dummy: bool,
    pub relay_dummy: bool,
    pub collision: bool,
    pub direct_delivery: bool,
    pub transfer_to_relay: bool,
    pub relay_delivery: bool,
    pub source_arrival: bool,
    pub relay_arrival: bool,
    pub source_harvest: bool,
    pub relay_harvest: bool,
}

fn default_stride() -> u64 {
    100
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub ch: ChannelParams,
    pub en: EnergyParams,
    pub pol: AccessPolicy,
    pub rates: RatePoint,
    pub mode: SimMode,
    pub horizon: u64,
    pub seed: u64,
    pub warmup: u64,
    /// Record a trajectory sample every this many slots.
    #[serde(default = "default_stride")]
    pub trajectory_stride: u64,
}

impl SimConfig {
    /// Config with a warmup of 10% of the horizon.
    pub fn new(
        ch: ChannelParams,
        en: EnergyParams,
        pol: AccessPolicy,
        rates: RatePoint,
        mode: SimMode,
        horizon: u64,
        seed: u64,
    ) -> Self {
        Self {
            ch,
            en,
            pol,
            rates,
            mode,
            horizon,
            seed,
            warmup: horizon / 10,
            trajectory_stride: default_stride(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon <= self.warmup {
            return Err(Error::InvalidSimConfig(format!(
                "horizon ({}) must exceed warmup ({})",
                self.horizon, self.warmup
            )));
        }
        if self.trajectory_stride == 0 {
            return Err(Error::InvalidSimConfig(
                "trajectory_stride must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Advances the network by one slot.
pub fn step(
    state: NetworkState,
    cfg: &SimConfig,
    streams: &mut RngStreams,
) -> (NetworkState, SlotEvents) {
    let u = streams.slot_draws();
    step_with(state, cfg, &u)
}

#[inline]
fn step_with(
    mut st: NetworkState,
    cfg: &SimConfig,
    u: &[f64; STREAM_COUNT],
) -> (NetworkState, SlotEvents) {
    use Stream::*;
    let mode = cfg.mode;
    let saturated = mode == SimMode::Saturated;
    let mut ev = SlotEvents::default();

    let s_has_packet = st.q_s_len > 0 || saturated;
    let r_has_packet = st.q_r_len > 0 || saturated;
    let s_eligible = st.b_s_level > 0 && (s_has_packet || mode.source_always_sends());
    let r_eligible = st.b_r_level > 0 && (r_has_packet || mode.relay_always_sends());

    ev.source_attempt = s_eligible && u[SourceDecision as usize] < cfg.pol.q_s;
    ev.relay_attempt = r_eligible && u[RelayDecision as usize] < cfg.pol.q_r;
    ev.source_dummy = ev.source_attempt && !s_has_packet;
    ev.relay_dummy = ev.relay_attempt && !r_has_packet;
    if ev.source_attempt {
        st.b_s_level -= 1;
    }
    if ev.relay_attempt {
        st.b_r_level -= 1;
    }

    match (ev.source_attempt, ev.relay_attempt) {
        (true, true) => ev.collision = true,
        (true, false) if !ev.source_dummy => {
            if u[ChannelSd as usize] < cfg.ch.p_sd {
                ev.direct_delivery = true;
            } else if u[ChannelSr as usize] < cfg.ch.p_sr {
                // The relay is silent this slot, so it can listen.
                ev.transfer_to_relay = true;
            }
            if !saturated {
                if ev.direct_delivery || ev.transfer_to_relay {
                    st.q_s_len -= 1;
                }
                if ev.transfer_to_relay {
                    st.q_r_len += 1;
                }
            }
        }
        (false, true) if !ev.relay_dummy && u[ChannelRd as usize] < cfg.ch.p_rd => {
            ev.relay_delivery = true;
            if !saturated {
                st.q_r_len -= 1;
            }
        }
        _ => {}
    }

    ev.source_arrival = u[SourceArrival as usize] < cfg.rates.lambda_s;
    ev.relay_arrival = u[RelayArrival as usize] < cfg.rates.lambda_r;
    ev.source_harvest = u[SourceHarvest as usize] < cfg.en.delta_s;
    ev.relay_harvest = u[RelayHarvest as usize] < cfg.en.delta_r;
    if !saturated {
        st.q_s_len += u64::from(ev.source_arrival);
        st.q_r_len += u64::from(ev.relay_arrival);
    }
    st.b_s_level += u64::from(ev.source_harvest);
    st.b_r_level += u64::from(ev.relay_harvest);
    st.slot_index += 1;
    (st, ev)
}

/// Whole-run event totals (warmup included).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EventCounts {
    pub arrivals_s: u64,
    pub arrivals_r: u64,
    pub harvested_s: u64,
    pub harvested_r: u64,
    pub attempts_s: u64,
    pub attempts_r: u64,
    pub dummies_s: u64,
    pub dummies_r: u64,
    pub collisions: u64,
    pub direct_deliveries: u64,
    pub transfers_to_relay: u64,
    pub relay_deliveries: u64,
}

impl EventCounts {
    fn record(&mut self, ev: &SlotEvents) {
        self.arrivals_s += u64::from(ev.source_arrival);
        self.arrivals_r += u64::from(ev.relay_arrival);
        self.harvested_s += u64::from(ev.source_harvest);
        self.harvested_r += u64::from(ev.relay_harvest);
        self.attempts_s += u64::from(ev.source_attempt);
        self.attempts_r += u64::from(ev.relay_attempt);
        self.dummies_s += u64::from(ev.source_dummy);
        self.dummies_r += u64::from(ev.relay_dummy);
        self.collisions += u64::from(ev.collision);
        self.direct_deliveries += u64::from(ev.direct_delivery);
        self.transfers_to_relay += u64::from(ev.transfer_to_relay);
        self.relay_deliveries += u64::from(ev.relay_delivery);
    }

    /// Real packets that left the source queue.
    pub fn source_departures(&self) -> u64 {
        self.direct_deliveries + self.transfers_to_relay
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub slot: u64,
    pub q_s: u64,
    pub q_r: u64,
    pub b_s: u64,
    pub b_r: u64,
}

/// Post-warmup slot counters from which the probabilities are formed.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    slots: u64,
    bs: u64,
    br: u64,
    qs: u64,
    qr: u64,
    a_s: u64,
    a_r: u64,
    as_ar: u64,
    departures: u64,
    transfers: u64,
    relay_deliveries: u64,
}

/// Estimates from one run. Rates and probabilities cover post-warmup
/// slots, evaluated on the start-of-slot state; `counts` cover the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetrics {
    pub mode: SimMode,
    pub seed: u64,
    pub slots_measured: u64,
    /// Real packets leaving the source per slot.
    pub measured_mu_s: f64,
    /// Packets delivered by the relay per slot.
    pub measured_mu_r: f64,
    pub measured_lambda_s_to_r: f64,
    pub pr_bs_nonempty: f64,
    pub pr_br_nonempty: f64,
    pub pr_qs_nonempty: f64,
    pub pr_qr_nonempty: f64,
    pub pr_as: f64,
    pub pr_ar: f64,
    pub pr_as_and_ar: f64,
    pub pr_as_not_ar: f64,
    pub pr_ar_not_as: f64,
    pub counts: EventCounts,
    pub final_state: NetworkState,
    #[serde(skip)]
    pub trajectory: Vec<TrajectorySample>,
}

impl SimMetrics {
    /// Relayed share of source departures over the run.
    pub fn relayed_ratio(&self) -> Option<f64> {
        let dep = self.counts.source_departures();
        (dep > 0).then(|| self.counts.transfers_to_relay as f64 / dep as f64)
    }

    /// Packet and energy conservation against the final state (queue
    /// balances apply to every mode but saturated, which keeps no queues).
    pub fn conservation_holds(&self) -> bool {
        let c = &self.counts;
        let s = &self.final_state;
        let energy = c.harvested_s - c.attempts_s == s.b_s_level
            && c.harvested_r - c.attempts_r == s.b_r_level;
        if self.mode == SimMode::Saturated {
            return energy;
        }
        energy
            && c.arrivals_s == c.direct_deliveries + c.transfers_to_relay + s.q_s_len
            && c.transfers_to_relay + c.arrivals_r == c.relay_deliveries + s.q_r_len
    }

    fn post_warmup(&self, warmup: u64) -> impl Iterator<Item = &TrajectorySample> {
        self.trajectory.iter().filter(move |t| t.slot >= warmup)
    }
}

/// Runs the configured horizon from an empty network.
pub fn run(cfg: &SimConfig) -> Result<SimMetrics> {
    cfg.validate()?;
    let mut streams = RngStreams::new(cfg.seed);
    let mut st = NetworkState::default();
    let mut counts = EventCounts::default();
    let mut tally = Tally::default();
    let mut trajectory = Vec::with_capacity((cfg.horizon / cfg.trajectory_stride + 1) as usize);

    for t in 0..cfg.horizon {
        if t % cfg.trajectory_stride == 0 {
            trajectory.push(TrajectorySample {
                slot: t,
                q_s: st.q_s_len,
                q_r: st.q_r_len,
                b_s: st.b_s_level,
                b_r: st.b_r_level,
            });
        }
        let before = st;
        let u = streams.slot_draws();
        let (next, ev) = step_with(st, cfg, &u);
        counts.record(&ev);
        if t >= cfg.warmup {
            let (a_s, a_r) = (before.source_active(), before.relay_active());
            tally.slots += 1;
            tally.bs += u64::from(before.b_s_level > 0);
            tally.br += u64::from(before.b_r_level > 0);
            tally.qs += u64::from(before.q_s_len > 0);
            tally.qr += u64::from(before.q_r_len > 0);
            tally.a_s += u64::from(a_s);
            tally.a_r += u64::from(a_r);
            tally.as_ar += u64::from(a_s && a_r);
            tally.departures += u64::from(ev.direct_delivery || ev.transfer_to_relay);
            tally.transfers += u64::from(ev.transfer_to_relay);
            tally.relay_deliveries += u64::from(ev.relay_delivery);
        }
        st = next;
    }

    let n = tally.slots as f64;
    let frac = |k: u64| k as f64 / n;
    Ok(SimMetrics {
        mode: cfg.mode,
        seed: cfg.seed,
        slots_measured: tally.slots,
        measured_mu_s: frac(tally.departures),
        measured_mu_r: frac(tally.relay_deliveries),
        measured_lambda_s_to_r: frac(tally.transfers),
        pr_bs_nonempty: frac(tally.bs),
        pr_br_nonempty: frac(tally.br),
        pr_qs_nonempty: frac(tally.qs),
        pr_qr_nonempty: frac(tally.qr),
        pr_as: frac(tally.a_s),
        pr_ar: frac(tally.a_r),
        pr_as_and_ar: frac(tally.as_ar),
        pr_as_not_ar: frac(tally.a_s - tally.as_ar),
        pr_ar_not_as: frac(tally.a_r - tally.as_ar),
        counts,
        final_state: st,
        trajectory,
    })
}

/// Service rates predicted from measured activity probabilities, against
/// the measured throughputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub predicted_mu_s: f64,
    pub measured_mu_s: f64,
    pub residual_s: f64,
    pub predicted_mu_r: f64,
    pub measured_mu_r: f64,
    pub residual_r: f64,
}

/// Queue growth above which a run is not treated as stationary.
pub const SCREEN_SLOPE: f64 = 1e-3;

/// Checks the per-slot service-rate identities on an original-mode run:
///
/// `mu_s = [q_s (1 - q_r) Pr(A_S, A_R) + q_s Pr(A_S, not A_R)] alpha`
/// `mu_r = [q_r (1 - q_s) Pr(A_R, A_S) + q_r Pr(A_R, not A_S)] p_rd`
///
/// where `A_i` is "battery and queue both non-empty". Throughputs are
/// departures per slot, so the activity probabilities carry the
/// `Q_i != 0` factor.
pub fn measure_service_identities(metrics: &SimMetrics, cfg: &SimConfig) -> Result<IdentityReport> {
    if metrics.mode != SimMode::Original || cfg.mode != SimMode::Original {
        return Err(Error::Precondition(format!(
            "service identities need an original-mode run, got {}",
            metrics.mode
        )));
    }
    for (name, series) in [
        (
            "source",
            metrics
                .post_warmup(cfg.warmup)
                .map(|t| (t.slot as f64, t.q_s as f64))
                .collect::<Vec<_>>(),
        ),
        (
            "relay",
            metrics
                .post_warmup(cfg.warmup)
                .map(|t| (t.slot as f64, t.q_r as f64))
                .collect(),
        ),
    ] {
        if let Some(slope) = least_squares_slope(&series) {
            if slope >= SCREEN_SLOPE {
                return Err(Error::UnstableRun(format!(
                    "{name} queue grows at {slope:.2e} packets/slot"
                )));
            }
        }
    }
    let (q_s, q_r) = (cfg.pol.q_s, cfg.pol.q_r);
    let predicted_mu_s = (q_s * (1.0 - q_r) * metrics.pr_as_and_ar + q_s * metrics.pr_as_not_ar)
        * success_aggregate(&cfg.ch);
    let predicted_mu_r =
        (q_r * (1.0 - q_s) * metrics.pr_as_and_ar + q_r * metrics.pr_ar_not_as) * cfg.ch.p_rd;
    Ok(IdentityReport {
        predicted_mu_s,
        measured_mu_s: metrics.measured_mu_s,
        residual_s: (predicted_mu_s - metrics.measured_mu_s).abs(),
        predicted_mu_r,
        measured_mu_r: metrics.measured_mu_r,
        residual_r: (predicted_mu_r - metrics.measured_mu_r).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p_star() -> ChannelParams {
        ChannelParams::new(0.2, 0.6, 0.5).unwrap()
    }

    fn cfg(mode: SimMode, rates: RatePoint, horizon: u64, seed: u64) -> SimConfig {
        SimConfig::new(
            p_star(),
            EnergyParams::new(0.5, 0.6).unwrap(),
            AccessPolicy::new(0.3, 0.4).unwrap(),
            rates,
            mode,
            horizon,
            seed,
        )
    }

    /// Uniform vector with every stream set to `v`, then overrides.
    fn draws(v: f64, overrides: &[(Stream, f64)]) -> [f64; STREAM_COUNT] {
        let mut u = [v; STREAM_COUNT];
        for &(s, x) in overrides {
            u[s as usize] = x;
        }
        u
    }

    #[test]
    fn deterministic_drain() {
        let mut c = cfg(SimMode::Original, RatePoint::ORIGIN, 10, 0);
        c.ch = ChannelParams::without_ordering(1.0, 0.5, 0.0).unwrap();
        c.en = EnergyParams::new(1.0, 0.0).unwrap();
        c.pol = AccessPolicy::new(1.0, 0.0).unwrap();
        let mut st = NetworkState {
            q_s_len: 5,
            b_s_level: 1,
            ..Default::default()
        };
        let mut streams = RngStreams::new(7);
        for k in 1..=7 {
            let (next, ev) = step(st, &c, &mut streams);
            assert_eq!(ev.direct_delivery, k <= 5, "slot {k}");
            st = next;
        }
        assert_eq!(st.q_s_len, 0);
    }

    #[test]
    fn collision_moves_no_packets() {
        let c = cfg(SimMode::Original, RatePoint::ORIGIN, 10, 0);
        let st = NetworkState {
            q_s_len: 3,
            q_r_len: 2,
            b_s_level: 4,
            b_r_level: 4,
            slot_index: 0,
        };
        // decisions succeed (u < q), nothing arrives or is harvested (u = 0.99)
        let u = draws(
            0.99,
            &[
                (Stream::SourceDecision, 0.0),
                (Stream::RelayDecision, 0.0),
                (Stream::ChannelSd, 0.0),
            ],
        );
        let (next, ev) = step_with(st, &c, &u);
        assert!(ev.collision);
        assert_eq!((next.q_s_len, next.q_r_len), (3, 2));
        assert_eq!((next.b_s_level, next.b_r_level), (3, 3));
    }

    #[test]
    fn overheard_packet_moves_to_relay() {
        let c = cfg(SimMode::Original, RatePoint::ORIGIN, 10, 0);
        let st = NetworkState {
            q_s_len: 3,
            q_r_len: 0,
            b_s_level: 1,
            b_r_level: 0,
            slot_index: 0,
        };
        let u = draws(
            0.99,
            &[(Stream::SourceDecision, 0.0), (Stream::ChannelSr, 0.1)],
        );
        let (next, ev) = step_with(st, &c, &u);
        assert!(ev.transfer_to_relay && !ev.direct_delivery);
        assert_eq!((next.q_s_len, next.q_r_len), (2, 1));
        assert_eq!(next.b_s_level, 0);
    }

    #[test]
    fn dummy_packets_cost_energy_but_deliver_nothing() {
        let c = cfg(SimMode::SourceDominant, RatePoint::ORIGIN, 10, 0);
        let st = NetworkState {
            b_s_level: 2,
            ..Default::default()
        };
        let u = draws(
            0.99,
            &[(Stream::SourceDecision, 0.0), (Stream::ChannelSd, 0.0)],
        );
        let (next, ev) = step_with(st, &c, &u);
        assert!(ev.source_attempt && ev.source_dummy);
        assert!(!ev.direct_delivery && !ev.transfer_to_relay);
        assert_eq!(next.b_s_level, 1);
        assert_eq!(next.q_s_len, 0);

        // an empty battery blocks even the dummy
        let (_, ev) = step_with(NetworkState::default(), &c, &u);
        assert!(!ev.source_attempt);
    }

    #[test]
    fn arrivals_land_after_the_decision() {
        let c = cfg(SimMode::Original, RatePoint::new(1.0, 0.0).unwrap(), 10, 0);
        let st = NetworkState {
            b_s_level: 5,
            ..Default::default()
        };
        let u = draws(0.0, &[]);
        let (next, ev) = step_with(st, &c, &u);
        assert!(!ev.source_attempt);
        assert_eq!(next.q_s_len, 1);
    }

    #[test]
    fn same_seed_same_metrics() {
        let c = cfg(
            SimMode::Original,
            RatePoint::new(0.05, 0.1).unwrap(),
            50_000,
            42,
        );
        assert_eq!(run(&c).unwrap(), run(&c).unwrap());
        let mut other = c;
        other.seed = 43;
        assert_ne!(run(&c).unwrap().counts, run(&other).unwrap().counts);
    }

    #[test]
    fn modes_share_arrival_streams() {
        let base = cfg(
            SimMode::Original,
            RatePoint::new(0.05, 0.1).unwrap(),
            20_000,
            9,
        );
        let arrivals: Vec<_> = SimMode::ALL
            .iter()
            .map(|&mode| run(&SimConfig { mode, ..base }).unwrap().counts)
            .map(|c| (c.arrivals_s, c.arrivals_r, c.harvested_s, c.harvested_r))
            .collect();
        assert!(arrivals.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn bad_config_rejected() {
        let mut c = cfg(SimMode::Original, RatePoint::ORIGIN, 100, 0);
        c.warmup = 100;
        assert!(matches!(run(&c), Err(Error::InvalidSimConfig(_))));
    }

    #[test]
    fn identities_need_original_mode() {
        let c = cfg(SimMode::Saturated, RatePoint::ORIGIN, 10_000, 1);
        let m = run(&c).unwrap();
        assert!(matches!(
            measure_service_identities(&m, &c),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn idle_network_identities_are_zero() {
        let c = cfg(SimMode::Original, RatePoint::ORIGIN, 10_000, 1);
        let m = run(&c).unwrap();
        let r = measure_service_identities(&m, &c).unwrap();
        assert_eq!(
            (
                r.predicted_mu_s,
                r.measured_mu_s,
                r.predicted_mu_r,
                r.measured_mu_r
            ),
            (0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn growing_queue_fails_screen() {
        let c = cfg(
            SimMode::Original,
            RatePoint::new(0.3, 0.3).unwrap(),
            100_000,
            1,
        );
        let m = run(&c).unwrap();
        assert!(matches!(
            measure_service_identities(&m, &c),
            Err(Error::UnstableRun(_))
        ));
    }

    #[test]
    fn saturated_run_matches_closed_form() {
        let m = run(&cfg(SimMode::Saturated, RatePoint::ORIGIN, 1_000_000, 5)).unwrap();
        assert!(
            (m.measured_mu_s - 0.108).abs() <= 0.01,
            "{}",
            m.measured_mu_s
        );
        assert!(
            (m.measured_mu_r - 0.168).abs() <= 0.01,
            "{}",
            m.measured_mu_r
        );
    }

    #[test]
    fn single_node_reduction() {
        let c = SimConfig {
            ch: ChannelParams::new(0.4, 0.6, 0.0).unwrap(),
            pol: AccessPolicy::new(0.7, 0.0).unwrap(),
            ..cfg(
                SimMode::Original,
                RatePoint::new(0.9, 0.0).unwrap(),
                1_000_000,
                5,
            )
        };
        let m = run(&c).unwrap();
        // the overloaded source is always backlogged: min(0.5, 0.7) * 0.4
        assert!((m.measured_mu_s - 0.2).abs() <= 0.01, "{}", m.measured_mu_s);
        assert_eq!(m.counts.transfers_to_relay, 0);
    }

    #[test]
    fn mode_parsing() {
        for m in SimMode::ALL {
            assert_eq!(m.as_str().parse::<SimMode>().unwrap(), m);
        }
        assert!("dominant".parse::<SimMode>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn conservation_and_half_duplex(
            seed in any::<u64>(),
            ls in 0.0..0.3f64, lr in 0.0..0.3f64,
            ds in 0.0..=1.0f64, dr in 0.0..=1.0f64,
            qs in 0.0..=1.0f64, qr in 0.0..=1.0f64,
            mode_ix in 0usize..4,
        ) {
            let c = SimConfig {
                en: EnergyParams::new(ds, dr).unwrap(),
                pol: AccessPolicy::new(qs, qr).unwrap(),
                ..cfg(SimMode::ALL[mode_ix], RatePoint::new(ls, lr).unwrap(), 5_000, seed)
            };
            let m = run(&c).unwrap();
            prop_assert!(m.conservation_holds());
            for p in [m.pr_bs_nonempty, m.pr_br_nonempty, m.pr_as, m.pr_ar, m.pr_as_and_ar, m.pr_as_not_ar] {
                prop_assert!((0.0..=1.0).contains(&p));
            }

            let mut streams = RngStreams::new(seed);
            let mut st = NetworkState { q_s_len: 3, q_r_len: 3, b_s_level: 3, b_r_level: 3, slot_index: 0 };
            for _ in 0..2_000 {
                let (next, ev) = step(st, &c, &mut streams);
                prop_assert!(!(ev.transfer_to_relay && ev.relay_attempt));
                prop_assert!(!(ev.collision && (ev.direct_delivery || ev.relay_delivery)));
                st = next;
            }
        }
    }
}
