//! Inner and outer bounds of the stability region at a fixed access policy.
//!
//! Each bound is an intersection of strict half-planes
//! `coef_s * lambda_s + coef_r * lambda_r < bound` with nonnegative
//! coefficients, so every region is downward closed in both coordinates and
//! its boundary is a concave, nonincreasing polyline.
//!
//! * inner bound (sufficient): the source beats its saturated throughput and
//!   the relay's total load beats the relay's saturated throughput;
//! * `R1` (necessary, source sends dummies when empty);
//! * `R2` (necessary, relay sends dummies when empty);
//! * outer bound: `R1 ∪ R2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{relay_fraction, saturated_throughput, success_aggregate};
use crate::params::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};

const GEOM_TOL: f64 = 1e-12;

/// Which inequality is tight along a boundary segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// `lambda_s < mu_s^sat`.
    InnerSource,
    /// `lambda_r,total < mu_r^sat`.
    InnerRelay,
    /// Source queue in the source-dominant system.
    R1Source,
    /// Relay queue in the source-dominant system.
    R1Relay,
    /// Relay queue in the relay-dominant system.
    R2Relay,
    /// Source queue in the relay-dominant system.
    R2Source,
    /// Edge of the unit square (arrival rates are Bernoulli).
    UnitSquare,
}

impl Constraint {
    pub fn as_str(&self) -> &'static str {
        match self {
            Constraint::InnerSource => "inner_source",
            Constraint::InnerRelay => "inner_relay",
            Constraint::R1Source => "r1_source",
            Constraint::R1Relay => "r1_relay",
            Constraint::R2Relay => "r2_relay",
            Constraint::R2Source => "r2_source",
            Constraint::UnitSquare => "unit_square",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Strict half-plane `coef_s * lambda_s + coef_r * lambda_r < bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub coef_s: f64,
    pub coef_r: f64,
    pub bound: f64,
    pub tag: Constraint,
}

impl HalfPlane {
    pub fn holds(&self, p: RatePoint) -> bool {
        self.coef_s * p.lambda_s + self.coef_r * p.lambda_r < self.bound
    }

    fn is_vertical(&self) -> bool {
        self.coef_r == 0.0
    }

    /// `lambda_r` on the line at abscissa `x` (non-vertical lines only).
    fn y_at(&self, x: f64) -> f64 {
        (self.bound - self.coef_s * x) / self.coef_r
    }
}

/// Intersection of strict half-planes.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRegion {
    pub constraints: Vec<HalfPlane>,
}

impl LinearRegion {
    pub fn contains(&self, p: RatePoint) -> bool {
        self.constraints.iter().all(|h| h.holds(p))
    }

    fn frontier(&self) -> Option<Frontier> {
        let mut lines = vec![HalfPlane {
            coef_s: 0.0,
            coef_r: 1.0,
            bound: 1.0,
            tag: Constraint::UnitSquare,
        }];
        let mut x_end = 1.0;
        let mut end_tag = Constraint::UnitSquare;
        for h in &self.constraints {
            if h.is_vertical() {
                if h.coef_s <= 0.0 {
                    if h.bound <= 0.0 {
                        return None;
                    }
                    continue;
                }
                let x = h.bound / h.coef_s;
                if x < x_end {
                    x_end = x;
                    end_tag = h.tag;
                }
            } else {
                lines.push(*h);
            }
        }
        if x_end < 0.0 {
            return None;
        }
        let mut f = Frontier {
            lines,
            x_end,
            end_tag,
        };
        if f.y_at(0.0) <= 0.0 {
            return None;
        }
        // Where the lower envelope reaches the lambda_s axis.
        for h in &f.lines {
            if h.coef_s > 0.0 {
                let root = h.bound / h.coef_s;
                if root < f.x_end {
                    f.x_end = root;
                    f.end_tag = h.tag;
                }
            }
        }
        Some(f)
    }

    /// Exact boundary polyline of the region's closure inside `[0, 1]^2`.
    pub fn boundary(&self) -> BoundaryPolyline {
        envelope(&[self.frontier()].into_iter().flatten().collect::<Vec<_>>())
    }
}

/// The upper edge `lambda_r = y(lambda_s)` of one region on `[0, x_end]`.
#[derive(Debug, Clone)]
struct Frontier {
    lines: Vec<HalfPlane>,
    x_end: f64,
    end_tag: Constraint,
}

impl Frontier {
    fn active(&self, x: f64) -> (f64, Constraint) {
        self.lines.iter().map(|h| (h.y_at(x), h.tag)).fold(
            (f64::INFINITY, Constraint::UnitSquare),
            |acc, cur| {
                if cur.0 < acc.0 {
                    cur
                } else {
                    acc
                }
            },
        )
    }

    fn y_at(&self, x: f64) -> f64 {
        self.active(x).0
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut xs = vec![0.0, self.x_end];
        for (i, a) in self.lines.iter().enumerate() {
            for b in &self.lines[i + 1..] {
                xs.extend(crossing(a, b));
            }
        }
        xs
    }
}

fn crossing(a: &HalfPlane, b: &HalfPlane) -> Option<f64> {
    // (ba - sa x)/ra = (bb - sb x)/rb
    let denom = a.coef_s * b.coef_r - b.coef_s * a.coef_r;
    if denom.abs() < 1e-300 {
        return None;
    }
    Some((a.bound * b.coef_r - b.bound * a.coef_r) / denom)
}

/// Pointwise maximum of several frontiers, as an exact polyline.
fn envelope(frontiers: &[Frontier]) -> BoundaryPolyline {
    if frontiers.is_empty() {
        return BoundaryPolyline::default();
    }
    let x_max = frontiers.iter().map(|f| f.x_end).fold(0.0, f64::max);

    let mut xs: Vec<f64> = frontiers.iter().flat_map(Frontier::breakpoints).collect();
    for (i, fa) in frontiers.iter().enumerate() {
        for fb in &frontiers[i + 1..] {
            for a in &fa.lines {
                for b in &fb.lines {
                    xs.extend(crossing(a, b));
                }
            }
        }
    }
    xs.retain(|x| x.is_finite() && (0.0..=x_max).contains(x));
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= GEOM_TOL);

    // Value and tag just left of / at `x` (frontiers still alive at x).
    let left = |x: f64| -> Option<(f64, Constraint)> {
        frontiers
            .iter()
            .filter(|f| x <= f.x_end + GEOM_TOL)
            .map(|f| f.active(x.min(f.x_end)))
            .max_by(|a, b| a.0.total_cmp(&b.0))
    };
    // Value just right of `x`; the tag is the frontier that ends here.
    let right = |x: f64| -> Option<f64> {
        frontiers
            .iter()
            .filter(|f| f.x_end > x + GEOM_TOL)
            .map(|f| f.y_at(x))
            .max_by(f64::total_cmp)
    };
    let ending_tag = |x: f64| -> Constraint {
        frontiers
            .iter()
            .filter(|f| (f.x_end - x).abs() <= GEOM_TOL)
            .max_by(|a, b| a.y_at(x).total_cmp(&b.y_at(x)))
            .map(|f| f.end_tag)
            .unwrap_or(Constraint::UnitSquare)
    };

    let mut poly = BoundaryPolyline::default();
    let mut prev: Option<f64> = None;
    for &x in &xs {
        let Some((y_left, _)) = left(x) else { break };
        if let Some(px) = prev {
            let mid = 0.5 * (px + x);
            let tag = left(mid).map(|(_, t)| t).unwrap_or(Constraint::UnitSquare);
            poly.push_segment(tag, x, y_left);
        } else {
            poly.vertices.push(point(x, y_left));
        }
        let y_right = right(x).unwrap_or(0.0).max(0.0);
        if y_right < y_left.max(0.0) - GEOM_TOL {
            poly.push_segment(ending_tag(x), x, y_right);
        }
        prev = Some(x);
    }
    poly.merge_collinear();
    poly
}

fn point(x: f64, y: f64) -> RatePoint {
    RatePoint {
        lambda_s: x.clamp(0.0, 1.0),
        lambda_r: y.clamp(0.0, 1.0),
    }
}

/// Boundary of a region as vertices joined by straight segments;
/// `segments[i]` tags the edge from `vertices[i]` to `vertices[i + 1]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryPolyline {
    pub vertices: Vec<RatePoint>,
    pub segments: Vec<Constraint>,
}

impl BoundaryPolyline {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn push_segment(&mut self, tag: Constraint, x: f64, y: f64) {
        let p = point(x, y);
        if let Some(last) = self.vertices.last() {
            if (last.lambda_s - p.lambda_s).abs() <= GEOM_TOL
                && (last.lambda_r - p.lambda_r).abs() <= GEOM_TOL
            {
                return;
            }
        }
        self.segments.push(tag);
        self.vertices.push(p);
    }

    /// Drops vertices between two segments on the same constraint line.
    fn merge_collinear(&mut self) {
        let mut i = 1;
        while i < self.segments.len() {
            if self.segments[i] == self.segments[i - 1] {
                self.segments.remove(i);
                self.vertices.remove(i);
            } else {
                i += 1;
            }
        }
    }

    /// Upper boundary value at abscissa `x` (the largest `lambda_r` on the
    /// polyline there), or `None` when `x` is past the last vertex.
    pub fn y_at(&self, x: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        for w in self.vertices.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (lo, hi) = (a.lambda_s, b.lambda_s);
            if x < lo - GEOM_TOL || x > hi + GEOM_TOL {
                continue;
            }
            let y = if (hi - lo).abs() <= GEOM_TOL {
                a.lambda_r.max(b.lambda_r)
            } else {
                a.lambda_r + (b.lambda_r - a.lambda_r) * (x - lo) / (hi - lo)
            };
            best = Some(best.map_or(y, |v: f64| v.max(y)));
        }
        if best.is_none()
            && self.vertices.len() == 1
            && (self.vertices[0].lambda_s - x).abs() <= GEOM_TOL
        {
            best = Some(self.vertices[0].lambda_r);
        }
        best
    }
}

/// The tuple `(channel, energy, policy)` fixing one stability region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub ch: ChannelParams,
    pub en: EnergyParams,
    pub pol: AccessPolicy,
}

impl RegionSpec {
    pub fn new(ch: ChannelParams, en: EnergyParams, pol: AccessPolicy) -> Self {
        Self { ch, en, pol }
    }

    fn split(&self) -> f64 {
        // With alpha = 0 the source bound is lambda_s < 0 and the region is
        // empty whatever the split.
        relay_fraction(&self.ch).unwrap_or(0.0)
    }

    pub fn inner_region(&self) -> LinearRegion {
        let sat = saturated_throughput(&self.ch, &self.en, &self.pol);
        LinearRegion {
            constraints: vec![
                HalfPlane {
                    coef_s: 1.0,
                    coef_r: 0.0,
                    bound: sat.mu_s,
                    tag: Constraint::InnerSource,
                },
                HalfPlane {
                    coef_s: self.split(),
                    coef_r: 1.0,
                    bound: sat.mu_r,
                    tag: Constraint::InnerRelay,
                },
            ],
        }
    }

    pub fn r1_region(&self) -> Result<LinearRegion> {
        let (a, b) = self.pol.effective(&self.en);
        let alpha = success_aggregate(&self.ch);
        let p_rd = self.ch.p_rd;
        let denom = (1.0 - a) * p_rd;
        if denom <= 0.0 {
            return Err(Error::DegenerateRegion(
                "R1 needs (1 - min(delta_s, q_s)) p_rd > 0",
            ));
        }
        Ok(LinearRegion {
            constraints: vec![
                HalfPlane {
                    coef_s: 1.0 + a * self.ch.relay_catch() / denom,
                    coef_r: a * alpha / denom,
                    bound: a * alpha,
                    tag: Constraint::R1Source,
                },
                HalfPlane {
                    coef_s: self.split(),
                    coef_r: 1.0,
                    bound: b * (1.0 - a) * p_rd,
                    tag: Constraint::R1Relay,
                },
            ],
        })
    }

    pub fn r2_region(&self) -> Result<LinearRegion> {
        let (a, b) = self.pol.effective(&self.en);
        let alpha = success_aggregate(&self.ch);
        let p_rd = self.ch.p_rd;
        let denom = (1.0 - b) * alpha;
        if denom <= 0.0 {
            return Err(Error::DegenerateRegion(
                "R2 needs (1 - min(delta_r, q_r)) (p_sd + (1 - p_sd) p_sr) > 0",
            ));
        }
        Ok(LinearRegion {
            constraints: vec![
                HalfPlane {
                    coef_s: ((1.0 - b) * self.ch.relay_catch() + b * p_rd) / denom,
                    coef_r: 1.0,
                    bound: b * p_rd,
                    tag: Constraint::R2Relay,
                },
                HalfPlane {
                    coef_s: 1.0,
                    coef_r: 0.0,
                    bound: a * (1.0 - b) * alpha,
                    tag: Constraint::R2Source,
                },
            ],
        })
    }
}

/// Sufficient condition for stability at this policy.
pub fn inner_contains(p: RatePoint, spec: &RegionSpec) -> bool {
    spec.inner_region().contains(p)
}

pub fn r1_contains(p: RatePoint, spec: &RegionSpec) -> Result<bool> {
    Ok(spec.r1_region()?.contains(p))
}

pub fn r2_contains(p: RatePoint, spec: &RegionSpec) -> Result<bool> {
    Ok(spec.r2_region()?.contains(p))
}

/// Necessary condition for stability: membership in `R1 ∪ R2`. A degenerate
/// sub-region counts as empty.
pub fn outer_contains(p: RatePoint, spec: &RegionSpec) -> bool {
    r1_contains(p, spec).unwrap_or(false) || r2_contains(p, spec).unwrap_or(false)
}

pub fn inner_boundary(spec: &RegionSpec) -> BoundaryPolyline {
    spec.inner_region().boundary()
}

/// Upper envelope of the `R1` and `R2` boundaries.
pub fn outer_boundary(spec: &RegionSpec) -> BoundaryPolyline {
    let frontiers: Vec<Frontier> = [spec.r1_region().ok(), spec.r2_region().ok()]
        .into_iter()
        .flatten()
        .filter_map(|r| r.frontier())
        .collect();
    envelope(&frontiers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn standard() -> RegionSpec {
        RegionSpec::new(
            ChannelParams::new(0.2, 0.6, 0.5).unwrap(),
            EnergyParams::new(0.5, 0.6).unwrap(),
            AccessPolicy::new(0.3, 0.4).unwrap(),
        )
    }

    fn rp(s: f64, r: f64) -> RatePoint {
        RatePoint::new(s, r).unwrap()
    }

    #[test]
    fn inner_examples() {
        let spec = standard();
        assert!(inner_contains(rp(0.05, 0.10), &spec));
        assert!(!inner_contains(rp(0.12, 0.0), &spec));
        assert!(inner_contains(RatePoint::ORIGIN, &spec));
    }

    #[test]
    fn r1_examples() {
        let spec = standard();
        assert!(r1_contains(rp(0.05, 0.10), &spec).unwrap());
        assert!(!r1_contains(rp(0.3, 0.3), &spec).unwrap());
        assert!(r1_contains(RatePoint::ORIGIN, &spec).unwrap());
        let r1 = spec.r1_region().unwrap();
        let c = r1.constraints[0];
        assert!((c.coef_s - 1.285_714_285_714_285_7).abs() < 1e-12);
        assert!((c.coef_r - 0.428_571_428_571_428_5).abs() < 1e-12);
        assert!((c.bound - 0.18).abs() < 1e-12);
    }

    #[test]
    fn r2_examples() {
        let spec = standard();
        assert!(r2_contains(rp(0.05, 0.10), &spec).unwrap());
        assert!(!r2_contains(rp(0.3, 0.3), &spec).unwrap());
        assert!(r2_contains(RatePoint::ORIGIN, &spec).unwrap());
    }

    #[test]
    fn degenerate_sub_regions() {
        let mut spec = standard();
        spec.en = EnergyParams::new(1.0, 1.0).unwrap();
        spec.pol = AccessPolicy::new(1.0, 0.4).unwrap();
        assert!(matches!(
            r1_contains(RatePoint::ORIGIN, &spec),
            Err(Error::DegenerateRegion(_))
        ));
        spec.pol = AccessPolicy::new(0.3, 1.0).unwrap();
        assert!(matches!(
            r2_contains(RatePoint::ORIGIN, &spec),
            Err(Error::DegenerateRegion(_))
        ));
        spec.pol = AccessPolicy::new(1.0, 1.0).unwrap();
        assert!(!outer_contains(RatePoint::ORIGIN, &spec));
        assert!(outer_boundary(&spec).is_empty());
    }

    #[test]
    fn outer_examples() {
        let spec = standard();
        assert!(!outer_contains(rp(0.3, 0.3), &spec));
        // R2 relay inequality: 0.16 + (0.24 + 0.24) / 0.36 * 0.05 = 0.22667 < 0.24,
        // and 0.05 < 0.108; R1 fails on its relay inequality (0.19333 >= 0.168).
        let p = rp(0.05, 0.16);
        assert!(!r1_contains(p, &spec).unwrap());
        assert!(r2_contains(p, &spec).unwrap());
        assert!(outer_contains(p, &spec));
    }

    #[test]
    fn inner_boundary_corner() {
        let poly = inner_boundary(&standard());
        let v = &poly.vertices;
        assert_eq!(v.len(), 3);
        assert!((v[0].lambda_s - 0.0).abs() < 1e-12 && (v[0].lambda_r - 0.168).abs() < 1e-12);
        assert!((v[1].lambda_s - 0.108).abs() < 1e-12 && (v[1].lambda_r - 0.096).abs() < 1e-12);
        assert!((v[2].lambda_s - 0.108).abs() < 1e-12 && v[2].lambda_r == 0.0);
        assert_eq!(
            poly.segments,
            [Constraint::InnerRelay, Constraint::InnerSource]
        );
    }

    #[test]
    fn inner_boundary_without_source() {
        let mut spec = standard();
        spec.pol = AccessPolicy::new(0.0, 0.4).unwrap();
        let poly = inner_boundary(&spec);
        assert_eq!(poly.vertices.len(), 2);
        assert_eq!(poly.vertices[0].lambda_s, 0.0);
        assert!((poly.vertices[0].lambda_r - 0.24).abs() < 1e-12);
        assert_eq!(poly.vertices[1], RatePoint::ORIGIN);

        spec.pol = AccessPolicy::new(0.0, 0.0).unwrap();
        assert!(inner_boundary(&spec).is_empty());
    }

    #[test]
    fn outer_boundary_dominates_sub_regions() {
        let spec = standard();
        let outer = outer_boundary(&spec);
        let r1 = spec.r1_region().unwrap().boundary();
        let r2 = spec.r2_region().unwrap().boundary();
        for sub in [&r1, &r2] {
            for v in &sub.vertices {
                let y = outer
                    .y_at(v.lambda_s)
                    .expect("outer covers sub-region abscissa");
                assert!(y >= v.lambda_r - 1e-12, "{v:?} above envelope {y}");
            }
        }
        // every outer vertex lies on one of the two sub-boundaries
        for v in &outer.vertices {
            let on = [&r1, &r2]
                .iter()
                .any(|b| b.vertices.windows(2).any(|w| on_segment(*v, w[0], w[1])));
            assert!(on, "{v:?}");
        }
    }

    fn on_segment(p: RatePoint, a: RatePoint, b: RatePoint) -> bool {
        let (dx, dy) = (b.lambda_s - a.lambda_s, b.lambda_r - a.lambda_r);
        let (px, py) = (p.lambda_s - a.lambda_s, p.lambda_r - a.lambda_r);
        let len2 = dx * dx + dy * dy;
        let t = if len2 > 0.0 {
            ((px * dx + py * dy) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (px - t * dx).hypot(py - t * dy) < 1e-9
    }

    fn monotone_nonincreasing(poly: &BoundaryPolyline) -> bool {
        poly.vertices.windows(2).all(|w| {
            w[1].lambda_s >= w[0].lambda_s - 1e-12 && w[1].lambda_r <= w[0].lambda_r + 1e-12
        })
    }

    fn spec_strategy() -> impl Strategy<Value = RegionSpec> {
        (
            0.0..0.9f64,
            0.0..=1.0f64,
            0.0..=1.0f64,
            0.0..=1.0f64,
            0.0..=1.0f64,
            0.0..=1.0f64,
            0.0..=1.0f64,
        )
            .prop_map(|(p_sd, rd_frac, p_sr, d_s, d_r, q_s, q_r)| {
                let p_rd = p_sd + (1.0 - p_sd) * rd_frac.max(1e-3);
                RegionSpec::new(
                    ChannelParams::new(p_sd, p_rd.min(1.0), p_sr).unwrap(),
                    EnergyParams::new(d_s, d_r).unwrap(),
                    AccessPolicy::new(q_s, q_r).unwrap(),
                )
            })
    }

    fn raw_r1(p: RatePoint, spec: &RegionSpec) -> bool {
        let (a, b) = spec.pol.effective(&spec.en);
        let (p_sd, p_rd, p_sr) = (spec.ch.p_sd, spec.ch.p_rd, spec.ch.p_sr);
        let alpha = p_sd + (1.0 - p_sd) * p_sr;
        let first = (1.0 + a * (1.0 - p_sd) * p_sr / ((1.0 - a) * p_rd)) * p.lambda_s
            + a * alpha / ((1.0 - a) * p_rd) * p.lambda_r
            < a * alpha;
        let second = p.lambda_r + (1.0 - p_sd) * p_sr / alpha * p.lambda_s < b * (1.0 - a) * p_rd;
        first && second
    }

    fn raw_r2(p: RatePoint, spec: &RegionSpec) -> bool {
        let (a, b) = spec.pol.effective(&spec.en);
        let (p_sd, p_rd, p_sr) = (spec.ch.p_sd, spec.ch.p_rd, spec.ch.p_sr);
        let alpha = p_sd + (1.0 - p_sd) * p_sr;
        let first = p.lambda_r
            + ((1.0 - b) * (1.0 - p_sd) * p_sr + b * p_rd) / ((1.0 - b) * alpha) * p.lambda_s
            < b * p_rd;
        let second = p.lambda_s < a * (1.0 - b) * alpha;
        first && second
    }

    proptest! {
        #[test]
        fn sandwich(spec in spec_strategy(), s in 0.0..=1.0f64, r in 0.0..=1.0f64) {
            let p = RatePoint::new(s * 0.5, r * 0.5).unwrap();
            if inner_contains(p, &spec) {
                prop_assert!(outer_contains(p, &spec));
            }
        }

        #[test]
        fn downward_closed(spec in spec_strategy(), s in 0.0..=0.5f64, r in 0.0..=0.5f64,
                           ks in 0.0..=1.0f64, kr in 0.0..=1.0f64) {
            let p = RatePoint::new(s, r).unwrap();
            let lower = RatePoint::new(s * ks, r * kr).unwrap();
            if inner_contains(p, &spec) { prop_assert!(inner_contains(lower, &spec)); }
            if r1_contains(p, &spec).unwrap_or(false) { prop_assert!(r1_contains(lower, &spec).unwrap()); }
            if r2_contains(p, &spec).unwrap_or(false) { prop_assert!(r2_contains(lower, &spec).unwrap()); }
        }

        #[test]
        fn clamping_is_invisible(spec in spec_strategy(), s in 0.0..=0.5f64, r in 0.0..=0.5f64) {
            let p = RatePoint::new(s, r).unwrap();
            let clamped = RegionSpec { pol: spec.pol.clamped(&spec.en), ..spec };
            prop_assert_eq!(inner_contains(p, &spec), inner_contains(p, &clamped));
            prop_assert_eq!(r1_contains(p, &spec).ok(), r1_contains(p, &clamped).ok());
            prop_assert_eq!(r2_contains(p, &spec).ok(), r2_contains(p, &clamped).ok());
            prop_assert_eq!(outer_contains(p, &spec), outer_contains(p, &clamped));
        }

        #[test]
        fn outer_matches_raw_inequalities(spec in spec_strategy(), s in 0.0..=0.5f64, r in 0.0..=0.5f64) {
            let p = RatePoint::new(s, r).unwrap();
            let (a, b) = spec.pol.effective(&spec.en);
            let alpha = crate::model::success_aggregate(&spec.ch);
            prop_assume!(alpha > 0.0);
            let r1 = if (1.0 - a) * spec.ch.p_rd > 0.0 { raw_r1(p, &spec) } else { false };
            let r2 = if (1.0 - b) * alpha > 0.0 { raw_r2(p, &spec) } else { false };
            prop_assert_eq!(outer_contains(p, &spec), r1 || r2);
        }

        #[test]
        fn polylines_are_monotone_and_consistent(spec in spec_strategy(), s in 0.0..=1.0f64) {
            let inner = inner_boundary(&spec);
            let outer = outer_boundary(&spec);
            prop_assert!(monotone_nonincreasing(&inner));
            prop_assert!(monotone_nonincreasing(&outer));
            prop_assert_eq!(inner.segments.len() + usize::from(!inner.is_empty()), inner.vertices.len());
            // points strictly under the outer envelope are in R1 ∪ R2
            if let Some(y) = outer.y_at(s * 0.6) {
                let x = s * 0.6;
                if y > 1e-6 && x > 1e-9 {
                    let below = RatePoint::new(x * (1.0 - 1e-6), y * (1.0 - 1e-6)).unwrap();
                    prop_assert!(outer_contains(below, &spec), "{below:?} under {y}");
                }
            }
        }
    }
}
