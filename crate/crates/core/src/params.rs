//! Network parameter types.
//!
//! Every probability and rate in the model is a number in `[0, 1]`. The
//! constructors reject anything else; the fields stay public so the formula
//! code can read them without ceremony.

use serde::{Deserialize, Serialize};

use crate::error::{Error, FieldError, Result};

/// Absolute tolerance used for probability comparisons.
pub const PROB_TOL: f64 = 1e-9;

pub(crate) fn check_unit(field: &str, value: f64, errors: &mut Vec<FieldError>) {
    if !value.is_finite() {
        errors.push(FieldError::new(
            field,
            format!("must be a finite number, got {value}"),
        ));
    } else if !(0.0..=1.0).contains(&value) {
        errors.push(FieldError::new(
            field,
            format!("must lie in [0, 1], got {value}"),
        ));
    }
}

fn finish(errors: Vec<FieldError>) -> Result<()> {
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(errors))
    }
}

/// Per-slot link success probabilities of the collision channel with erasures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Source to destination.
    pub p_sd: f64,
    /// Relay to destination.
    pub p_rd: f64,
    /// Source to relay (overhearing).
    pub p_sr: f64,
}

impl ChannelParams {
    /// Builds a channel in which the relay has the better link to the
    /// destination (`p_rd > p_sd`), the operating assumption of the model.
    pub fn new(p_sd: f64, p_rd: f64, p_sr: f64) -> Result<Self> {
        let ch = Self::without_ordering(p_sd, p_rd, p_sr)?;
        if ch.p_rd <= ch.p_sd {
            return Err(Error::field(
                "p_rd",
                format!(
                    "must exceed p_sd (relay has the better link), got p_rd={p_rd} p_sd={p_sd}"
                ),
            ));
        }
        Ok(ch)
    }

    /// Range checks only. None of the formulas need `p_rd > p_sd`; this is
    /// for corner cases such as a perfect direct link.
    pub fn without_ordering(p_sd: f64, p_rd: f64, p_sr: f64) -> Result<Self> {
        let mut errors = Vec::new();
        check_unit("p_sd", p_sd, &mut errors);
        check_unit("p_rd", p_rd, &mut errors);
        check_unit("p_sr", p_sr, &mut errors);
        finish(errors)?;
        Ok(Self { p_sd, p_rd, p_sr })
    }

    /// `(1 - p_sd) p_sr`: probability that a lone source transmission misses
    /// the destination but is decoded by the relay.
    pub fn relay_catch(&self) -> f64 {
        (1.0 - self.p_sd) * self.p_sr
    }
}

/// Bernoulli energy-harvesting rates (energy units per slot).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    pub delta_s: f64,
    pub delta_r: f64,
}

impl EnergyParams {
    pub fn new(delta_s: f64, delta_r: f64) -> Result<Self> {
        let mut errors = Vec::new();
        check_unit("delta_s", delta_s, &mut errors);
        check_unit("delta_r", delta_r, &mut errors);
        finish(errors)?;
        Ok(Self { delta_s, delta_r })
    }

    /// Aggregate charging rate `delta_s + delta_r`.
    pub fn total(&self) -> f64 {
        self.delta_s + self.delta_r
    }
}

/// Random-access transmit probabilities used whenever a node is active.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccessPolicy {
    pub q_s: f64,
    pub q_r: f64,
}

impl AccessPolicy {
    pub fn new(q_s: f64, q_r: f64) -> Result<Self> {
        let mut errors = Vec::new();
        check_unit("q_s", q_s, &mut errors);
        check_unit("q_r", q_r, &mut errors);
        finish(errors)?;
        Ok(Self { q_s, q_r })
    }

    /// `(min(delta_s, q_s), min(delta_r, q_r))`, the long-run fraction of
    /// slots in which a backlogged node actually transmits.
    pub fn effective(&self, en: &EnergyParams) -> (f64, f64) {
        (en.delta_s.min(self.q_s), en.delta_r.min(self.q_r))
    }

    /// The policy with each probability clamped to its harvesting rate.
    /// Every bound is invariant under this map.
    pub fn clamped(&self, en: &EnergyParams) -> Self {
        let (q_s, q_r) = self.effective(en);
        Self { q_s, q_r }
    }
}

/// An arrival-rate pair `(lambda_s, lambda_r)` in packets per slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub lambda_s: f64,
    pub lambda_r: f64,
}

impl RatePoint {
    pub fn new(lambda_s: f64, lambda_r: f64) -> Result<Self> {
        let mut errors = Vec::new();
        check_unit("lambda_s", lambda_s, &mut errors);
        check_unit("lambda_r", lambda_r, &mut errors);
        finish(errors)?;
        Ok(Self { lambda_s, lambda_r })
    }

    pub const ORIGIN: RatePoint = RatePoint {
        lambda_s: 0.0,
        lambda_r: 0.0,
    };

    /// Radial scaling used for depth tests, clamped back into the unit square.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            lambda_s: (self.lambda_s * factor).clamp(0.0, 1.0),
            lambda_r: (self.lambda_r * factor).clamp(0.0, 1.0),
        }
    }
}

/// Service (or saturated) throughputs of source and relay, packets per slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputPair {
    pub mu_s: f64,
    pub mu_r: f64,
}
