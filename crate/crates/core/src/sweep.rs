//! Rate-grid sweeps: analytic region membership next to simulated verdicts.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closure;
use crate::error::{Error, Result};
use crate::export::fmt_num;
use crate::params::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};
use crate::regions::{inner_contains, outer_contains, RegionSpec};
use crate::sim::{SimConfig, SimMode};
use crate::stability::{assess, StabilityCriteria, Verdict};

/// Inclusive arithmetic range `min:max:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let bad = |msg: String| Err(Error::field("grid", msg));
        if ![min, max, step].iter().all(|v| v.is_finite()) {
            return bad(format!("non-finite value in {min}:{max}:{step}"));
        }
        if step <= 0.0 {
            return bad(format!("step must be positive, got {step}"));
        }
        if min > max {
            return bad(format!("empty range: min {min} exceeds max {max}"));
        }
        if min < 0.0 || max > 1.0 {
            return bad(format!("range {min}:{max} leaves [0, 1]"));
        }
        Ok(Self { min, max, step })
    }

    /// Grid values; `max` is included when it falls on the lattice.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| (self.min + i as f64 * self.step).min(self.max))
            .collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [min, max, step] = parts[..] else {
            return Err(Error::field(
                "grid",
                format!("expected min:max:step, got {s:?}"),
            ));
        };
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::field("grid", format!("not a number: {v:?}")))
        };
        Axis::new(num(min)?, num(max)?, num(step)?)
    }
}

/// `lambda_s` and `lambda_r` axes; a single range applies to both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateGridSpec {
    pub lambda_s: Axis,
    pub lambda_r: Axis,
}

impl FromStr for RateGridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(',') {
            None => {
                let a: Axis = s.parse()?;
                Ok(Self {
                    lambda_s: a,
                    lambda_r: a,
                })
            }
            Some((a, b)) => Ok(Self {
                lambda_s: a.parse()?,
                lambda_r: b.parse()?,
            }),
        }
    }
}

impl RateGridSpec {
    /// Grid points, `lambda_s` outer and `lambda_r` inner.
    pub fn points(&self) -> Vec<RatePoint> {
        let rs = self.lambda_r.values();
        self.lambda_s
            .values()
            .into_iter()
            .flat_map(|s| {
                rs.iter().map(move |&r| RatePoint {
                    lambda_s: s,
                    lambda_r: r,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub ch: ChannelParams,
    pub en: EnergyParams,
    pub pol: AccessPolicy,
    pub grid: RateGridSpec,
    pub horizon: u64,
    /// Simulation seeds per grid point; every point reuses the same list.
    pub seeds: Vec<u64>,
    pub criteria: StabilityCriteria,
}

impl SweepSpec {
    /// Three consecutive seeds starting at `seed`.
    pub fn seeds_from(seed: u64) -> Vec<u64> {
        (0..3).map(|i| seed.wrapping_add(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda_s: f64,
    pub lambda_r: f64,
    pub in_inner: bool,
    pub in_outer: bool,
    pub in_closure: bool,
    pub sim_verdict_s: Verdict,
    pub sim_verdict_r: Verdict,
    pub measured_mu_s: f64,
    pub measured_mu_r: f64,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let region = RegionSpec::new(spec.ch, spec.en, spec.pol);
    let closure = closure::boundary(&spec.ch, &spec.en);
    spec.grid
        .points()
        .par_iter()
        .map(|&p| {
            let cfg = SimConfig::new(
                spec.ch,
                spec.en,
                spec.pol,
                p,
                SimMode::Original,
                spec.horizon,
                0,
            );
            let v = assess(&cfg, &spec.seeds, &spec.criteria)?;
            Ok(SweepRow {
                lambda_s: p.lambda_s,
                lambda_r: p.lambda_r,
                in_inner: inner_contains(p, &region),
                in_outer: outer_contains(p, &region),
                in_closure: closure.contains(p),
                sim_verdict_s: v.source.verdict,
                sim_verdict_r: v.relay.verdict,
                measured_mu_s: v.source.mean_measured_mu(),
                measured_mu_r: v.relay.mean_measured_mu(),
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "lambda_s",
        "lambda_r",
        "in_inner",
        "in_outer",
        "in_closure",
        "sim_verdict_s",
        "sim_verdict_r",
        "measured_mu_s",
        "measured_mu_r",
    ])?;
    for r in rows {
        w.write_record([
            fmt_num(r.lambda_s),
            fmt_num(r.lambda_r),
            r.in_inner.to_string(),
            r.in_outer.to_string(),
            r.in_closure.to_string(),
            r.sim_verdict_s.to_string(),
            r.sim_verdict_r.to_string(),
            fmt_num(r.measured_mu_s),
            fmt_num(r.measured_mu_r),
        ])?;
    }
    w.flush()?;
    Ok(())
}
