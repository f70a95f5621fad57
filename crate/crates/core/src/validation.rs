//! The acceptance checks, shared by `ehrelay validate` and the test suite.
//!
//! Each check returns a [`CheckResult`] carrying the worst observed value of
//! the checked quantity next to its tolerance. Brute-force oracles in this
//! module work from the saturated throughput formulas and the region
//! inequalities only; they never call the closed-form optimisers they check.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cli;
use crate::closure::{self, union_oracle_with, OracleOptions, RateGrid, VertexLabel};
use crate::config::Config;
use crate::error::Result;
use crate::model::{
    battery_nonempty_prob, relay_fraction, saturated_throughput, success_aggregate,
};
use crate::params::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};
use crate::regions::{inner_contains, outer_contains, RegionSpec};
use crate::sim::{measure_service_identities, run, SimConfig, SimMode};
use crate::stability::{assess, StabilityCriteria, Verdict};
use crate::sweep::SweepSpec;

pub const CHECK_IDS: [u8; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Slots per simulation run.
    pub horizon: u64,
    /// Replaces the first parameter set of the simulation checks.
    pub base: Option<Config>,
}

impl ValidationOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            horizon: 1_000_000,
            base: None,
        }
    }

    fn seed_for(&self, id: u8, k: u64) -> u64 {
        self.seed ^ (u64::from(id) << 56) ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15)
    }

    fn rng(&self, id: u8) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed_for(id, u64::MAX))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub detail: String,
    pub budget_secs: f64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckResult {
    /// One human-readable summary line.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: worst {:.3e} (tol {:.1e}, n={}) in {:.1}s; {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.worst,
            self.tolerance,
            self.samples,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub horizon: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Outcome {
    worst: f64,
    tolerance: f64,
    samples: usize,
    detail: String,
    /// Extra failure condition beyond `worst <= tolerance`.
    ok: bool,
}

impl Outcome {
    fn new(worst: f64, tolerance: f64, samples: usize, detail: String) -> Self {
        Self {
            worst,
            tolerance,
            samples,
            detail,
            ok: true,
        }
    }
}

pub fn check_name(id: u8) -> &'static str {
    match id {
        1 => "battery occupancy law",
        2 => "relay traffic split",
        3 => "saturated throughput",
        4 => "service-rate identities",
        5 => "bound sandwich",
        6 => "closure vs brute-force union",
        7 => "boundary continuity",
        8 => "optimizer correctness",
        9 => "stability concordance",
        10 => "achievability",
        11 => "determinism",
        _ => "unknown",
    }
}

fn budget(id: u8) -> f64 {
    match id {
        1 => 60.0,
        5 | 7 => 30.0,
        6 => 6.0 * 120.0,
        9 => 900.0,
        _ => 600.0,
    }
}

pub fn run_check(id: u8, opts: &ValidationOptions) -> Result<CheckResult> {
    let start = Instant::now();
    let out = match id {
        1 => battery_occupancy(opts)?,
        2 => relay_split(opts)?,
        3 => saturated(opts)?,
        4 => identities(opts)?,
        5 => sandwich(opts),
        6 => closure_vs_union(opts)?,
        7 => continuity(opts),
        8 => optimizers(opts)?,
        9 => concordance(opts)?,
        10 => achievability(opts)?,
        11 => determinism(opts)?,
        _ => {
            return Err(crate::Error::Precondition(format!(
                "no acceptance check {id}"
            )))
        }
    };
    let elapsed = start.elapsed();
    let budget_secs = budget(id);
    let passed = out.ok && out.worst <= out.tolerance && elapsed.as_secs_f64() <= budget_secs;
    Ok(CheckResult {
        id,
        name: check_name(id).to_string(),
        passed,
        worst: out.worst,
        tolerance: out.tolerance,
        samples: out.samples,
        detail: out.detail,
        budget_secs,
        elapsed,
    })
}

/// Runs every check; results come back in id order.
pub fn run_all(opts: &ValidationOptions) -> Result<ValidationReport> {
    let checks: Vec<CheckResult> = CHECK_IDS
        .par_iter()
        .map(|&id| run_check(id, opts))
        .collect::<Result<_>>()?;
    Ok(ValidationReport {
        seed: opts.seed,
        horizon: opts.horizon,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn ch(p_sd: f64, p_rd: f64, p_sr: f64) -> ChannelParams {
    ChannelParams::new(p_sd, p_rd, p_sr).expect("valid channel")
}

fn en(delta_s: f64, delta_r: f64) -> EnergyParams {
    EnergyParams::new(delta_s, delta_r).expect("valid energy")
}

fn pol(q_s: f64, q_r: f64) -> AccessPolicy {
    AccessPolicy::new(q_s, q_r).expect("valid policy")
}

/// Rates at roughly half depth inside the inner bound.
fn half_depth_rates(spec: &RegionSpec) -> RatePoint {
    let mu = saturated_throughput(&spec.ch, &spec.en, &spec.pol);
    let f = relay_fraction(&spec.ch).unwrap_or(0.0);
    let lambda_s = 0.5 * mu.mu_s;
    RatePoint {
        lambda_s,
        lambda_r: 0.5 * (mu.mu_r - f * lambda_s),
    }
}

/// Parameter sets for the checks that simulate the original network.
fn stable_sets(opts: &ValidationOptions) -> Vec<(RegionSpec, RatePoint)> {
    let specs = [
        RegionSpec::new(ch(0.2, 0.6, 0.5), en(0.5, 0.6), pol(0.3, 0.4)),
        RegionSpec::new(ch(0.3, 0.8, 0.6), en(0.6, 0.7), pol(0.5, 0.5)),
        RegionSpec::new(ch(0.1, 0.5, 0.7), en(0.4, 0.9), pol(0.4, 0.3)),
        RegionSpec::new(ch(0.25, 0.7, 0.4), en(0.8, 0.3), pol(0.6, 0.3)),
        RegionSpec::new(ch(0.05, 0.9, 0.9), en(0.3, 0.5), pol(0.3, 0.6)),
    ];
    let mut sets: Vec<(RegionSpec, RatePoint)> =
        specs.iter().map(|s| (*s, half_depth_rates(s))).collect();
    sets[0].1 = RatePoint {
        lambda_s: 0.05,
        lambda_r: 0.10,
    };
    if let Some(base) = &opts.base {
        let spec = RegionSpec::new(base.ch, base.en, base.pol);
        let rates = if inner_contains(base.rates.scaled(1.0 / 0.9), &spec) {
            base.rates
        } else {
            half_depth_rates(&spec)
        };
        sets[0] = (spec, rates);
    }
    sets
}

fn sim(spec: &RegionSpec, rates: RatePoint, mode: SimMode, horizon: u64, seed: u64) -> SimConfig {
    SimConfig::new(spec.ch, spec.en, spec.pol, rates, mode, horizon, seed)
}

/// Maximum that lets a NaN through, so that it fails the tolerance test.
fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |acc, v| if v.is_nan() || v > acc { v } else { acc })
}

fn battery_occupancy(opts: &ValidationOptions) -> Result<Outcome> {
    let pairs = [
        (0.2, 0.5),
        (0.3, 0.9),
        (0.1, 1.0),
        (0.45, 0.5),
        (0.3, 0.3),
        (0.5, 0.5),
        (0.8, 0.8),
        (1.0, 1.0),
        (0.6, 0.2),
        (0.9, 0.5),
        (0.4, 0.1),
        (0.7, 0.0),
    ];
    let errs: Vec<f64> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(delta, q))| {
            let spec = RegionSpec::new(ch(0.2, 0.6, 0.5), en(delta, delta), pol(q, q));
            let m = run(&sim(
                &spec,
                RatePoint::ORIGIN,
                SimMode::Saturated,
                opts.horizon,
                opts.seed_for(1, k as u64),
            ))?;
            let want = battery_nonempty_prob(delta, q);
            Ok((m.pr_bs_nonempty - want)
                .abs()
                .max((m.pr_br_nonempty - want).abs()))
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::new(
        max_of(errs),
        0.01,
        pairs.len(),
        "|Pr(B != 0) - min(delta/q, 1)|, both nodes".into(),
    ))
}

fn relay_split(opts: &ValidationOptions) -> Result<Outcome> {
    let sets = stable_sets(opts);
    let errs: Vec<f64> = sets
        .par_iter()
        .enumerate()
        .map(|(k, (spec, rates))| {
            let cfg = sim(
                spec,
                *rates,
                SimMode::Original,
                opts.horizon,
                opts.seed_for(2, k as u64),
            );
            let m = run(&cfg)?;
            let want = relay_fraction(&spec.ch)?;
            Ok(m.relayed_ratio()
                .map_or(f64::INFINITY, |r| (r - want).abs()))
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::new(
        max_of(errs),
        0.02,
        sets.len(),
        "|relayed/departed - relay_fraction|".into(),
    ))
}

fn random_channel(rng: &mut ChaCha8Rng) -> ChannelParams {
    let p_sd = rng.random_range(0.05..0.6);
    let p_rd = rng.random_range(p_sd + 0.05..0.95);
    ch(p_sd, p_rd, rng.random_range(0.05..0.95))
}

fn saturated(opts: &ValidationOptions) -> Result<Outcome> {
    let mut rng = opts.rng(3);
    let specs: Vec<RegionSpec> = (0..10)
        .map(|_| {
            let c = random_channel(&mut rng);
            let e = en(rng.random_range(0.05..1.0), rng.random_range(0.05..1.0));
            let p = pol(rng.random_range(0.05..1.0), rng.random_range(0.05..1.0));
            RegionSpec::new(c, e, p)
        })
        .collect();
    let errs: Vec<f64> = specs
        .par_iter()
        .enumerate()
        .map(|(k, spec)| {
            let m = run(&sim(
                spec,
                RatePoint::ORIGIN,
                SimMode::Saturated,
                opts.horizon,
                opts.seed_for(3, k as u64),
            ))?;
            let want = saturated_throughput(&spec.ch, &spec.en, &spec.pol);
            Ok((m.measured_mu_s - want.mu_s)
                .abs()
                .max((m.measured_mu_r - want.mu_r).abs()))
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::new(
        max_of(errs),
        0.01,
        specs.len(),
        "max |measured - closed form| over (mu_s, mu_r)".into(),
    ))
}

fn identities(opts: &ValidationOptions) -> Result<Outcome> {
    let sets = stable_sets(opts);
    let errs: Vec<f64> = sets
        .par_iter()
        .enumerate()
        .map(|(k, (spec, rates))| {
            let cfg = sim(
                spec,
                *rates,
                SimMode::Original,
                opts.horizon,
                opts.seed_for(4, k as u64),
            );
            let m = run(&cfg)?;
            let r = measure_service_identities(&m, &cfg)?;
            Ok(r.residual_s.max(r.residual_r))
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::new(
        max_of(errs),
        0.01,
        sets.len(),
        "max residual over both identities".into(),
    ))
}

fn sandwich(opts: &ValidationOptions) -> Outcome {
    let mut rng = opts.rng(5);
    let (mut violations, mut inner_hits) = (0usize, 0usize);
    let n = 10_000;
    for _ in 0..n {
        let spec = RegionSpec::new(
            ChannelParams::without_ordering(rng.random(), rng.random(), rng.random())
                .expect("unit draws"),
            en(rng.random(), rng.random()),
            pol(rng.random(), rng.random()),
        );
        // Scale draws to the saturated throughputs so that a good share
        // of points lands inside the inner bound.
        let mu = saturated_throughput(&spec.ch, &spec.en, &spec.pol);
        let p = RatePoint::new(
            (rng.random::<f64>() * 1.5 * mu.mu_s).min(1.0),
            (rng.random::<f64>() * 1.5 * mu.mu_r).min(1.0),
        )
        .expect("unit square");
        if inner_contains(p, &spec) {
            inner_hits += 1;
            if !outer_contains(p, &spec) {
                violations += 1;
            }
        }
    }
    Outcome::new(
        violations as f64,
        0.0,
        n,
        format!("{inner_hits} points inside the inner bound, {violations} outside the outer bound"),
    )
}

fn closure_sets() -> Vec<(ChannelParams, EnergyParams)> {
    vec![
        (ch(0.2, 0.6, 0.5), en(0.5, 0.6)),
        (ch(0.2, 0.6, 0.5), en(1.0, 1.0)),
        (ch(0.3, 0.8, 0.6), en(0.9, 0.5)),
        (ch(0.2, 0.6, 0.5), en(0.3, 0.4)),
        (ch(0.1, 0.5, 0.7), en(0.4, 0.3)),
        (ch(0.25, 0.7, 0.4), en(0.2, 0.6)),
    ]
}

fn closure_vs_union(_opts: &ValidationOptions) -> Result<Outcome> {
    let sets = closure_sets();
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    let mut slowest = Duration::ZERO;
    for (c, e) in &sets {
        let t = Instant::now();
        let alpha = success_aggregate(c);
        let opts = OracleOptions {
            rates: RateGrid {
                s_max: alpha,
                r_max: c.p_rd,
                points: 201,
            },
            exact_relay_optimum: false,
            ..OracleOptions::new(200)
        };
        let oracle = union_oracle_with(c, e, &opts);
        let b = closure::boundary(c, e);
        let mut disagree = 0usize;
        for (s, r, inside) in oracle.points() {
            let p = RatePoint {
                lambda_s: s,
                lambda_r: r,
            };
            if b.contains(p) != inside {
                disagree += 1;
                worst = worst.max(b.distance_to((s, r), closure::DEFAULT_CURVE_SAMPLES));
            }
        }
        slowest = slowest.max(t.elapsed());
        detail.push(format!("{disagree}"));
    }
    let mut out = Outcome::new(
        worst,
        0.01,
        sets.len(),
        format!(
            "distance of disagreeing grid points to the boundary; disagreements per set [{}]",
            detail.join(", ")
        ),
    );
    out.ok = slowest.as_secs_f64() <= 120.0;
    Ok(out)
}

fn continuity(opts: &ValidationOptions) -> Outcome {
    let mut rng = opts.rng(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let c = random_channel(&mut rng);
        let ds: f64 = rng.random_range(0.05..=1.0);
        let dr = rng.random_range((1.0 - ds).max(0.05)..=1.0);
        let b = closure::boundary(&c, &en(ds, dr));
        for label in [VertexLabel::B, VertexLabel::C] {
            if let Some(v) = b.theorem_vertices.iter().find(|v| v.label == label) {
                worst = worst.max((closure::curve_y(v.lambda_s, &c) - v.lambda_r).abs());
            }
        }
    }
    let b = closure::boundary(&ch(0.2, 0.6, 0.5), &en(0.5, 0.6));
    let expected = [(0.0, 0.36), (0.096, 0.152), (0.15, 0.05), (0.18, 0.0)];
    let vertices = b.vertices();
    let example_err = if vertices.len() == expected.len() {
        max_of(
            vertices
                .iter()
                .zip(expected)
                .map(|(v, (x, y))| (v.lambda_s - x).abs().max((v.lambda_r - y).abs())),
        )
    } else {
        f64::INFINITY
    };
    Outcome::new(
        worst.max(example_err),
        1e-9,
        101,
        format!("curve gap at B and C over 100 sets; example vertex error {example_err:.1e}"),
    )
}

/// Largest `mu_r - f x` over a `1e-4` grid of relay probabilities, with the
/// source probability set so that it just sustains `x`.
pub fn p2_grid_search(x: f64, c: &ChannelParams, e: &EnergyParams) -> Option<f64> {
    let alpha = success_aggregate(c);
    let f = relay_fraction(c).ok()?;
    let steps = (e.delta_r / 1e-4).round() as usize;
    let mut best: Option<f64> = None;
    for i in 0..=steps {
        let q_r = (i as f64 * 1e-4).min(e.delta_r);
        if q_r >= 1.0 {
            continue;
        }
        let q_s = x / ((1.0 - q_r) * alpha);
        if q_s > e.delta_s {
            continue;
        }
        let mu = saturated_throughput(c, e, &AccessPolicy { q_s, q_r });
        let y = mu.mu_r - f * x;
        best = Some(best.map_or(y, |b: f64| b.max(y)));
    }
    best
}

/// Largest `lambda_s` supporting `lambda_r = y` over a 1001 x 1001 grid on
/// `[0, δS] x [0, δR]`.
pub fn p1_grid_search(y: f64, c: &ChannelParams, e: &EnergyParams) -> Option<f64> {
    let f = relay_fraction(c).ok()?;
    let n = 1000;
    let mut best: Option<f64> = None;
    for i in 0..=n {
        let q_s = e.delta_s * i as f64 / n as f64;
        for j in 0..=n {
            let q_r = e.delta_r * j as f64 / n as f64;
            let mu = saturated_throughput(c, e, &AccessPolicy { q_s, q_r });
            if mu.mu_r < y {
                continue;
            }
            let x = if f > 0.0 {
                mu.mu_s.min((mu.mu_r - y) / f)
            } else {
                mu.mu_s
            };
            best = Some(best.map_or(x, |b: f64| b.max(x)));
        }
    }
    best
}

fn optimizers(opts: &ValidationOptions) -> Result<Outcome> {
    let mut rng = opts.rng(8);
    let cases: Vec<(ChannelParams, EnergyParams, f64, f64)> = (0..100)
        .map(|_| {
            let c = random_channel(&mut rng);
            let e = en(rng.random_range(0.05..=1.0), rng.random_range(0.05..=1.0));
            let x = rng.random::<f64>() * e.delta_s * success_aggregate(&c);
            let y = rng.random::<f64>() * e.delta_r * c.p_rd;
            (c, e, x, y)
        })
        .collect();
    let errs: Vec<(f64, f64)> = cases
        .par_iter()
        .map(|(c, e, x, y)| {
            let p2_err = match (closure::optimize_p2(*x, c, e), p2_grid_search(*x, c, e)) {
                (Ok(s), Some(g)) => (s.y_star - g).abs(),
                // the closed form says no policy reaches y >= 0 here
                (Err(crate::Error::Infeasible(_)), g) => g.map_or(0.0, |g| g.max(0.0)),
                (Ok(_), None) | (Err(_), _) => f64::INFINITY,
            };
            let p1_err = match (closure::optimize_p1(*y, c, e), p1_grid_search(*y, c, e)) {
                (Ok(s), Some(g)) => (s.x_star - g).abs(),
                _ => f64::INFINITY,
            };
            (p2_err, p1_err)
        })
        .collect();
    let p2_worst = max_of(errs.iter().map(|e| e.0));
    let p1_worst = max_of(errs.iter().map(|e| e.1));
    // P1 carries its own tolerance through `ok`.
    let mut out = Outcome::new(
        p2_worst,
        1e-3,
        cases.len(),
        format!("P2 worst {p2_worst:.2e} (tol 1e-3), P1 worst {p1_worst:.2e} (tol 2e-3)"),
    );
    out.ok = p1_worst <= 2e-3;
    Ok(out)
}

/// Largest `t` with `inside(t * dir)`, by bisection on `[0, t_max]`.
fn radial_crossing(dir: (f64, f64), inside: impl Fn(RatePoint) -> bool) -> f64 {
    let t_max = 1.0 / dir.0.max(dir.1);
    let at = |t: f64| RatePoint {
        lambda_s: (t * dir.0).min(1.0),
        lambda_r: (t * dir.1).min(1.0),
    };
    if inside(at(t_max)) {
        return t_max;
    }
    let (mut lo, mut hi) = (0.0, t_max);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Probe points for the stability check: `(spec, point, expected verdict)`.
pub fn concordance_points(opts: &ValidationOptions) -> Vec<(RegionSpec, RatePoint, Verdict)> {
    let mut specs: Vec<RegionSpec> = stable_sets(opts).into_iter().map(|s| s.0).take(4).collect();
    if specs.len() < 4 {
        specs.push(RegionSpec::new(
            ch(0.2, 0.6, 0.5),
            en(0.5, 0.6),
            pol(0.3, 0.4),
        ));
    }
    let angles = [10.0f64, 30.0, 45.0, 60.0, 80.0];
    let mut out = Vec::new();
    for spec in &specs {
        for deg in angles {
            let dir = (deg.to_radians().cos(), deg.to_radians().sin());
            let t_in = radial_crossing(dir, |p| inner_contains(p, spec));
            let t_out = radial_crossing(dir, |p| outer_contains(p, spec));
            let point = |t: f64| RatePoint {
                lambda_s: (t * dir.0).min(1.0),
                lambda_r: (t * dir.1).min(1.0),
            };
            out.push((*spec, point(0.9 * t_in), Verdict::Stable));
            out.push((*spec, point(1.1 * t_out), Verdict::Unstable));
        }
    }
    out
}

fn concordance(opts: &ValidationOptions) -> Result<Outcome> {
    let points = concordance_points(opts);
    let criteria = StabilityCriteria::default();
    let results: Vec<Verdict> = points
        .par_iter()
        .enumerate()
        .map(|(k, (spec, p, _))| {
            let cfg = sim(spec, *p, SimMode::Original, opts.horizon, 0);
            let seeds: Vec<u64> = (0..3).map(|i| opts.seed_for(9, 3 * k as u64 + i)).collect();
            Ok(assess(&cfg, &seeds, &criteria)?.network())
        })
        .collect::<Result<_>>()?;
    let mut wrong = Vec::new();
    for ((spec, p, want), got) in points.iter().zip(&results) {
        if got != want {
            wrong.push(format!(
                "({:.4}, {:.4}) at q=({}, {}) expected {want} got {got}",
                p.lambda_s, p.lambda_r, spec.pol.q_s, spec.pol.q_r
            ));
        }
    }
    let stable = points.iter().filter(|p| p.2 == Verdict::Stable).count();
    let detail = if wrong.is_empty() {
        format!(
            "{stable} inside points STABLE, {} outside points UNSTABLE",
            points.len() - stable
        )
    } else {
        format!("misclassified: {}", wrong.join("; "))
    };
    Ok(Outcome::new(wrong.len() as f64, 0.0, points.len(), detail))
}

fn achievability(opts: &ValidationOptions) -> Result<Outcome> {
    let sets = [
        (ch(0.2, 0.6, 0.5), en(0.5, 0.6)),
        (ch(0.2, 0.6, 0.5), en(0.3, 0.4)),
    ];
    let mut jobs = Vec::new();
    for (c, e) in sets {
        let b = closure::boundary(&c, &e);
        for k in 1..=5 {
            let x = b.x_end() * k as f64 / 6.0;
            jobs.push((c, e, x, b.y_at(x).unwrap_or(0.0)));
        }
    }
    let errs: Vec<f64> = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (c, e, x, y))| {
            let policy = closure::achieving_policy(*x, c, e)?;
            let spec = RegionSpec::new(*c, *e, policy);
            let m = run(&sim(
                &spec,
                RatePoint::ORIGIN,
                SimMode::Saturated,
                opts.horizon,
                opts.seed_for(10, k as u64),
            ))?;
            let f = relay_fraction(c)?;
            let got = (m.measured_mu_s, m.measured_mu_r - f * m.measured_mu_s);
            Ok((got.0 - x).abs().max((got.1 - y).abs()))
        })
        .collect::<Result<_>>()?;
    Ok(Outcome::new(
        max_of(errs),
        0.015,
        jobs.len(),
        "|(mu_s, mu_r - f mu_s) - boundary point|".into(),
    ))
}

fn determinism(opts: &ValidationOptions) -> Result<Outcome> {
    let base = opts.base.clone().unwrap_or_else(|| {
        Config::new(
            ch(0.2, 0.6, 0.5),
            en(0.5, 0.6),
            pol(0.3, 0.4),
            RatePoint {
                lambda_s: 0.05,
                lambda_r: 0.1,
            },
        )
    });
    let sweep = SweepSpec {
        ch: base.ch,
        en: base.en,
        pol: base.pol,
        grid: "0:0.1:0.05".parse()?,
        horizon: 100_000,
        seeds: SweepSpec::seeds_from(opts.seed),
        criteria: StabilityCriteria::default(),
    };
    let mut sim_cfg = base.sim_config()?;
    sim_cfg.horizon = 200_000;
    sim_cfg.warmup = 20_000;
    sim_cfg.seed = opts.seed;

    let render = || -> Result<Vec<Vec<u8>>> {
        let (metrics, trajectory) = cli::render_simulate(&sim_cfg)?;
        Ok(vec![
            cli::render_regions(&base)?.0,
            cli::render_closure(&base)?,
            cli::render_sweep(&sweep)?,
            metrics,
            trajectory,
        ])
    };
    let (a, b) = (render()?, render()?);
    let differing = a.iter().zip(&b).filter(|(x, y)| x != y).count();
    Ok(Outcome::new(
        differing as f64,
        0.0,
        a.len(),
        format!(
            "{differing} of {} outputs differ between repeated runs",
            a.len()
        ),
    ))
}
