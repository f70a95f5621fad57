//! Empirical stability classification from simulated queue trajectories.
//!
//! A queue is called stable when its length does not drift: the
//! least-squares slope of the post-warmup trajectory stays below a small
//! threshold and the tail occupancy stays bounded. Points near a region
//! boundary can legitimately come out `INCONCLUSIVE`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{relay_fraction, saturated_throughput};
use crate::params::RatePoint;
use crate::sim::{run, SimConfig, SimMetrics, SimMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Stable,
    Unstable,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Stable => "STABLE",
            Verdict::Unstable => "UNSTABLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityCriteria {
    /// Drift threshold in packets per slot.
    pub slope_eps: f64,
    /// `L_max = l_max_factor / (1 - rho)` when the analytic load is below one.
    pub l_max_factor: f64,
    /// `L_max` when no analytic load estimate applies.
    pub l_max_default: f64,
    pub warmup_fraction: f64,
    pub min_horizon: u64,
    pub min_seeds: usize,
}

impl Default for StabilityCriteria {
    fn default() -> Self {
        Self {
            slope_eps: 1e-3,
            l_max_factor: 50.0,
            l_max_default: 1e3,
            warmup_fraction: 0.1,
            min_horizon: 100_000,
            min_seeds: 3,
        }
    }
}

/// Ordinary least-squares line through `(x, y)` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// Naive standard error (ignores autocorrelation).
    pub stderr: f64,
}

pub fn fit_slope(points: &[(f64, f64)]) -> Option<SlopeFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let stderr = if n > 2 {
        let sse: f64 = points
            .iter()
            .map(|&(x, y)| {
                let r = y - my - slope * (x - mx);
                r * r
            })
            .sum();
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(SlopeFit { slope, stderr })
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    fit_slope(points).map(|f| f.slope)
}

/// Trajectory statistics of one queue in one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedEvidence {
    pub seed: u64,
    /// Measured departures per slot from this queue.
    pub measured_mu: f64,
    pub slope: f64,
    pub slope_ci95: f64,
    pub first_quartile_mean: f64,
    pub final_quartile_mean: f64,
    pub max_len: u64,
    pub final_len: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueVerdict {
    pub verdict: Verdict,
    /// Analytic load from the saturated (inner-bound) service rate.
    pub rho_hat: Option<f64>,
    pub l_max: f64,
    pub seeds: Vec<SeedEvidence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub rates: RatePoint,
    pub horizon: u64,
    pub warmup: u64,
    pub source: QueueVerdict,
    pub relay: QueueVerdict,
}

impl QueueVerdict {
    pub fn mean_measured_mu(&self) -> f64 {
        if self.seeds.is_empty() {
            return 0.0;
        }
        self.seeds.iter().map(|e| e.measured_mu).sum::<f64>() / self.seeds.len() as f64
    }
}

impl StabilityVerdict {
    /// Both queues stable, or either unstable; otherwise inconclusive.
    pub fn network(&self) -> Verdict {
        match (self.source.verdict, self.relay.verdict) {
            (Verdict::Stable, Verdict::Stable) => Verdict::Stable,
            (Verdict::Unstable, _) | (_, Verdict::Unstable) => Verdict::Unstable,
            _ => Verdict::Inconclusive,
        }
    }
}

#[derive(Clone, Copy)]
enum Queue {
    Source,
    Relay,
}

fn evidence(m: &SimMetrics, warmup: u64, queue: Queue) -> SeedEvidence {
    let series: Vec<(f64, f64)> = m
        .trajectory
        .iter()
        .filter(|t| t.slot >= warmup)
        .map(|t| {
            let len = match queue {
                Queue::Source => t.q_s,
                Queue::Relay => t.q_r,
            };
            (t.slot as f64, len as f64)
        })
        .collect();
    let fit = fit_slope(&series).unwrap_or(SlopeFit {
        slope: 0.0,
        stderr: 0.0,
    });
    let quarter = (series.len() / 4).max(1);
    let mean = |s: &[(f64, f64)]| {
        if s.is_empty() {
            0.0
        } else {
            s.iter().map(|p| p.1).sum::<f64>() / s.len() as f64
        }
    };
    let head = &series[..quarter.min(series.len())];
    let tail = &series[series.len().saturating_sub(quarter)..];
    let (final_len, measured_mu) = match queue {
        Queue::Source => (m.final_state.q_s_len, m.measured_mu_s),
        Queue::Relay => (m.final_state.q_r_len, m.measured_mu_r),
    };
    SeedEvidence {
        seed: m.seed,
        measured_mu,
        slope: fit.slope,
        slope_ci95: 1.96 * fit.stderr,
        first_quartile_mean: mean(head),
        final_quartile_mean: mean(tail),
        max_len: series.iter().map(|p| p.1 as u64).max().unwrap_or(0),
        final_len,
    }
}

fn classify(
    seeds: Vec<SeedEvidence>,
    rho_hat: Option<f64>,
    criteria: &StabilityCriteria,
) -> QueueVerdict {
    let l_max = match rho_hat {
        Some(rho) if rho < 1.0 => criteria.l_max_factor / (1.0 - rho),
        _ => criteria.l_max_default,
    };
    let stable = seeds
        .iter()
        .all(|e| e.slope < criteria.slope_eps && e.final_quartile_mean < l_max);
    let unstable = seeds
        .iter()
        .all(|e| e.slope > criteria.slope_eps && e.final_quartile_mean > e.first_quartile_mean);
    let verdict = if stable {
        Verdict::Stable
    } else if unstable {
        Verdict::Unstable
    } else {
        Verdict::Inconclusive
    };
    QueueVerdict {
        verdict,
        rho_hat,
        l_max,
        seeds,
    }
}

/// Analytic loads `(rho_s, rho_r)` against the saturated service rates.
pub fn analytic_load(cfg: &SimConfig) -> (Option<f64>, Option<f64>) {
    let mu = saturated_throughput(&cfg.ch, &cfg.en, &cfg.pol);
    let rho_s = (mu.mu_s > 0.0).then(|| cfg.rates.lambda_s / mu.mu_s);
    let rho_r = match relay_fraction(&cfg.ch) {
        Ok(f) if mu.mu_r > 0.0 => Some((cfg.rates.lambda_r + f * cfg.rates.lambda_s) / mu.mu_r),
        _ => None,
    };
    (rho_s, rho_r)
}

/// Classifies both queues of the original network from one run per seed.
/// The mode and warmup of `base` are overridden.
pub fn assess(
    base: &SimConfig,
    seeds: &[u64],
    criteria: &StabilityCriteria,
) -> Result<StabilityVerdict> {
    if base.horizon < criteria.min_horizon {
        return Err(Error::field(
            "horizon",
            format!(
                "stability assessment needs at least {} slots, got {}",
                criteria.min_horizon, base.horizon
            ),
        ));
    }
    if seeds.len() < criteria.min_seeds {
        return Err(Error::field(
            "seed",
            format!(
                "stability assessment needs at least {} seeds, got {}",
                criteria.min_seeds,
                seeds.len()
            ),
        ));
    }
    let warmup = (base.horizon as f64 * criteria.warmup_fraction) as u64;
    let runs: Vec<SimMetrics> = seeds
        .par_iter()
        .map(|&seed| {
            run(&SimConfig {
                mode: SimMode::Original,
                seed,
                warmup,
                ..*base
            })
        })
        .collect::<Result<_>>()?;

    let (rho_s, rho_r) = analytic_load(base);
    let per_queue = |q| runs.iter().map(|m| evidence(m, warmup, q)).collect();
    Ok(StabilityVerdict {
        rates: base.rates,
        horizon: base.horizon,
        warmup,
        source: classify(per_queue(Queue::Source), rho_s, criteria),
        relay: classify(per_queue(Queue::Relay), rho_r, criteria),
    })
}
