//! The stable-throughput closure: the union of the stability regions over
//! every access policy, for fixed harvesting rates.
//!
//! With `alpha = p_sd + (1 - p_sd) p_sr`, `c = (1 - p_sd) p_sr` and
//! `P = p_rd`, the closure is bounded by
//!
//! * `δS + δR >= 1`: a line `AB` (relay transmits at its harvest rate), the
//!   curve `sqrt(x/alpha) + sqrt(c x / (P alpha) + y / P) = 1` from `B` to
//!   `C`, and a line `CD` (source transmits at its harvest rate);
//! * `δS + δR < 1`: two lines `EF` and `FG`.
//!
//! Vertices that fall below the `lambda_s` axis are dropped and the boundary
//! ends where it first crosses the axis.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{relay_fraction, success_aggregate};
use crate::params::{AccessPolicy, ChannelParams, EnergyParams, RatePoint, PROB_TOL};
use crate::regions::{LinearRegion, RegionSpec};

const TOL: f64 = 1e-12;

/// Default number of curve samples when exporting a boundary.
pub const DEFAULT_CURVE_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClosureCase {
    /// `δS + δR >= 1`
    AboveOne,
    /// `δS + δR < 1`
    BelowOne,
}

impl ClosureCase {
    pub fn of(en: &EnergyParams) -> Self {
        if en.total() >= 1.0 {
            ClosureCase::AboveOne
        } else {
            ClosureCase::BelowOne
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A named corner of the closure boundary. Coordinates are raw and may be
/// negative for vertices the boundary never reaches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub label: VertexLabel,
    pub lambda_s: f64,
    pub lambda_r: f64,
}

impl Vertex {
    fn new(label: VertexLabel, lambda_s: f64, lambda_r: f64) -> Self {
        Self {
            label,
            lambda_s,
            lambda_r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentShape {
    Line,
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySegment {
    pub from: Vertex,
    pub to: Vertex,
    pub shape: SegmentShape,
}

impl BoundarySegment {
    pub fn name(&self) -> String {
        format!("{}{}", self.from.label, self.to.label)
    }
}

/// Which expression attains the minimum in the closed-form abscissa of the
/// final vertex (`D` or `G`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointBranch {
    /// `(1-δS)^2 alpha / c` (or `(1-δS) δR P alpha / c` below one).
    RelayLoad,
    /// `δS (1-δS) P alpha / ((1-δS) P + δS c)`.
    SourceLine,
    Both,
}

/// Parameters of the square-root curve; `y = P (1 - sqrt(x/alpha))^2 - c x / alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub alpha: f64,
    pub p_rd: f64,
    pub relay_catch: f64,
}

impl CurveParams {
    pub fn of(ch: &ChannelParams) -> Self {
        Self {
            alpha: success_aggregate(ch),
            p_rd: ch.p_rd,
            relay_catch: ch.relay_catch(),
        }
    }

    pub fn y_at(&self, x: f64) -> f64 {
        if self.alpha <= 0.0 {
            return self.p_rd;
        }
        let r = x / self.alpha;
        let s = r.max(0.0).sqrt();
        self.p_rd * (1.0 - s) * (1.0 - s) - self.relay_catch * r
    }

    /// Abscissa where the curve meets `lambda_r = 0`.
    fn axis_crossing(&self) -> f64 {
        let (sp, sc) = (self.p_rd.sqrt(), self.relay_catch.sqrt());
        if sp + sc <= 0.0 {
            return 0.0;
        }
        let s = sp / (sp + sc);
        self.alpha * s * s
    }

    /// Inverse of [`CurveParams::y_at`] on the decreasing branch.
    fn x_at(&self, y: f64) -> f64 {
        let (p, c) = (self.p_rd, self.relay_catch);
        // (P - c) t^2 - 2 P t + (P - y) = 0, smaller root, rationalised.
        let disc = (p * y + c * (p - y)).max(0.0);
        let denom = p + disc.sqrt();
        if denom <= 0.0 {
            return 0.0;
        }
        let t = (p - y) / denom;
        self.alpha * t * t
    }
}

/// Explicit `lambda_r` on the curve through `B` and `C` at `lambda_s = x`.
/// May be negative; callers clip.
pub fn curve_y(x: f64, ch: &ChannelParams) -> f64 {
    CurveParams::of(ch).y_at(x)
}

/// Boundary of the closure for one pair of harvesting rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureBoundary {
    pub case: ClosureCase,
    pub channel: ChannelParams,
    pub energy: EnergyParams,
    /// Closed-form vertices before any clipping, in boundary order.
    pub theorem_vertices: Vec<Vertex>,
    pub endpoint_branch: EndpointBranch,
    /// The boundary actually traced, from the `lambda_r` axis to the
    /// `lambda_s` axis.
    pub segments: Vec<BoundarySegment>,
    /// Vertices below the `lambda_s` axis that the traced boundary skips.
    pub dropped: Vec<VertexLabel>,
    pub curve: CurveParams,
    /// Interior-optimum window of the relay problem, `((1-δR)^2 alpha, δS^2 alpha)`.
    pub x1: f64,
    pub x2: f64,
}

impl ClosureBoundary {
    /// Vertices on the traced boundary, in order.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = Vec::with_capacity(self.segments.len() + 1);
        for seg in &self.segments {
            if out.is_empty() {
                out.push(seg.from);
            }
            out.push(seg.to);
        }
        if out.is_empty() {
            if let Some(first) = self.theorem_vertices.first() {
                out.push(*first);
                out.push(Vertex::new(self.last_label(), 0.0, 0.0));
            }
        }
        out
    }

    pub fn vertex(&self, label: VertexLabel) -> Option<Vertex> {
        self.vertices().into_iter().find(|v| v.label == label)
    }

    fn last_label(&self) -> VertexLabel {
        match self.case {
            ClosureCase::AboveOne => VertexLabel::D,
            ClosureCase::BelowOne => VertexLabel::G,
        }
    }

    /// Largest `lambda_s` reached by the boundary.
    pub fn x_end(&self) -> f64 {
        self.vertices().last().map_or(0.0, |v| v.lambda_s)
    }

    /// Boundary ordinate at `lambda_s = x`; `None` past the final vertex.
    pub fn y_at(&self, x: f64) -> Option<f64> {
        if x < 0.0 || x > self.x_end() + TOL {
            return None;
        }
        let mut best: Option<f64> = None;
        for seg in &self.segments {
            let (x0, x1) = (seg.from.lambda_s, seg.to.lambda_s);
            if x < x0 - TOL || x > x1 + TOL {
                continue;
            }
            let y = match seg.shape {
                SegmentShape::Curve => self.curve.y_at(x),
                SegmentShape::Line if (x1 - x0).abs() <= TOL => {
                    seg.from.lambda_r.max(seg.to.lambda_r)
                }
                SegmentShape::Line => {
                    let t = (x - x0) / (x1 - x0);
                    seg.from.lambda_r + t * (seg.to.lambda_r - seg.from.lambda_r)
                }
            };
            best = Some(best.map_or(y, |b: f64| b.max(y)));
        }
        best.or_else(|| {
            self.vertices()
                .first()
                .map(|v| v.lambda_r)
                .filter(|_| x <= TOL)
        })
        .map(|y| y.max(0.0))
    }

    /// Strict membership: the point lies below the boundary at its abscissa,
    /// by more than [`PROB_TOL`] so that rounded boundary points stay outside.
    pub fn contains(&self, p: RatePoint) -> bool {
        p.lambda_s >= 0.0
            && p.lambda_r >= 0.0
            && self
                .y_at(p.lambda_s)
                .is_some_and(|y| p.lambda_r < y - PROB_TOL)
    }

    /// Points along the boundary: vertices exactly, plus `curve_samples`
    /// interior samples on the curve segment. Each point carries the label
    /// of the vertex or segment it belongs to.
    pub fn sample(&self, curve_samples: usize) -> Vec<(String, f64, f64)> {
        let mut rows = Vec::new();
        let verts = self.vertices();
        if let Some(first) = verts.first() {
            rows.push((first.label.to_string(), first.lambda_s, first.lambda_r));
        }
        for seg in &self.segments {
            if seg.shape == SegmentShape::Curve {
                let name = seg.name();
                let (x0, x1) = (seg.from.lambda_s, seg.to.lambda_s);
                for i in 1..=curve_samples {
                    let x = x0 + (x1 - x0) * i as f64 / (curve_samples + 1) as f64;
                    rows.push((name.clone(), x, self.curve.y_at(x).max(0.0)));
                }
            }
            rows.push((seg.to.label.to_string(), seg.to.lambda_s, seg.to.lambda_r));
        }
        if self.segments.is_empty() && verts.len() > 1 {
            let last = verts[verts.len() - 1];
            rows.push((last.label.to_string(), last.lambda_s, last.lambda_r));
        }
        rows
    }

    /// Euclidean distance from `p` to the boundary curve.
    pub fn distance_to(&self, p: (f64, f64), curve_samples: usize) -> f64 {
        let pts = self.sample(curve_samples);
        let mut best = f64::INFINITY;
        for w in pts.windows(2) {
            best = best.min(point_segment_distance(
                p,
                (w[0].1, w[0].2),
                (w[1].1, w[1].2),
            ));
        }
        if pts.len() == 1 {
            best = ((p.0 - pts[0].1).powi(2) + (p.1 - pts[0].2).powi(2)).sqrt();
        }
        best
    }
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (cx, cy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

fn endpoint_min(relay_load: f64, source_line: f64) -> (f64, EndpointBranch) {
    if (relay_load - source_line).abs() <= TOL {
        (source_line, EndpointBranch::Both)
    } else if relay_load < source_line {
        (relay_load, EndpointBranch::RelayLoad)
    } else {
        (source_line, EndpointBranch::SourceLine)
    }
}

fn safe_div(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Computes the closure boundary.
pub fn boundary(ch: &ChannelParams, en: &EnergyParams) -> ClosureBoundary {
    use VertexLabel::*;

    let case = ClosureCase::of(en);
    let curve = CurveParams::of(ch);
    let CurveParams {
        alpha,
        p_rd: p,
        relay_catch: c,
    } = curve;
    let (ds, dr) = (en.delta_s, en.delta_r);

    let source_line_end = safe_div(ds * (1.0 - ds) * p * alpha, (1.0 - ds) * p + ds * c);
    let x1 = (1.0 - dr).powi(2) * alpha;
    let x2 = ds * ds * alpha;

    // Raw chain: vertex list plus the shape of each joining segment.
    let (theorem_vertices, shapes, endpoint_branch) = match case {
        ClosureCase::AboveOne => {
            let (x_d, branch) =
                endpoint_min(safe_div((1.0 - ds).powi(2) * alpha, c), source_line_end);
            (
                vec![
                    Vertex::new(A, 0.0, dr * p),
                    Vertex::new(B, x1, dr * dr * p - (1.0 - dr).powi(2) * c),
                    Vertex::new(C, x2, (1.0 - ds).powi(2) * p - ds * ds * c),
                    Vertex::new(D, x_d, 0.0),
                ],
                vec![SegmentShape::Line, SegmentShape::Curve, SegmentShape::Line],
                branch,
            )
        }
        ClosureCase::BelowOne => {
            let (x_g, branch) =
                endpoint_min(safe_div((1.0 - ds) * dr * p * alpha, c), source_line_end);
            (
                vec![
                    Vertex::new(E, 0.0, dr * p),
                    Vertex::new(
                        F,
                        ds * (1.0 - dr) * alpha,
                        dr * (1.0 - ds) * p - ds * (1.0 - dr) * c,
                    ),
                    Vertex::new(G, x_g, 0.0),
                ],
                vec![SegmentShape::Line, SegmentShape::Line],
                branch,
            )
        }
    };

    let last_label = theorem_vertices.last().map(|v| v.label).unwrap_or(D);
    let mut segments = Vec::new();
    let mut dropped = Vec::new();

    if alpha <= 0.0 {
        // The source can never deliver: only the lambda_r axis remains.
        let top = theorem_vertices[0];
        let end = Vertex::new(last_label, 0.0, 0.0);
        if top.lambda_r > 0.0 {
            segments.push(BoundarySegment {
                from: top,
                to: end,
                shape: SegmentShape::Line,
            });
        }
        dropped.extend(
            theorem_vertices[1..theorem_vertices.len() - 1]
                .iter()
                .map(|v| v.label),
        );
        return ClosureBoundary {
            case,
            channel: *ch,
            energy: *en,
            theorem_vertices,
            endpoint_branch,
            segments,
            dropped,
            curve,
            x1,
            x2,
        };
    }

    // Walk the chain, clipping at the first crossing of the lambda_s axis.
    // The last piece is always the line on which the source transmits at
    // its harvest rate; it ends where that line meets the axis.
    let n = theorem_vertices.len();
    let mut from = theorem_vertices[0];
    if from.lambda_r <= 0.0 {
        dropped.extend(theorem_vertices[1..n - 1].iter().map(|v| v.label));
    } else {
        for i in 1..n {
            let shape = shapes[i - 1];
            if i == n - 1 {
                let x_end = if ds > 0.0 {
                    source_line_end.max(from.lambda_s)
                } else {
                    from.lambda_s
                };
                let to = Vertex::new(last_label, x_end, 0.0);
                segments.push(BoundarySegment { from, to, shape });
                break;
            }
            let to = theorem_vertices[i];
            if (to.lambda_s - from.lambda_s).abs() <= TOL
                && (to.lambda_r - from.lambda_r).abs() <= TOL
            {
                // Zero-length piece, e.g. δR = 1 puts B on A.
                continue;
            }
            if to.lambda_r <= 0.0 {
                let x_cross = match shape {
                    SegmentShape::Curve => curve.axis_crossing().clamp(from.lambda_s, to.lambda_s),
                    SegmentShape::Line => {
                        let t = from.lambda_r / (from.lambda_r - to.lambda_r);
                        from.lambda_s + t * (to.lambda_s - from.lambda_s)
                    }
                };
                dropped.extend(theorem_vertices[i..n - 1].iter().map(|v| v.label));
                let end = Vertex::new(last_label, x_cross, 0.0);
                segments.push(BoundarySegment {
                    from,
                    to: end,
                    shape,
                });
                break;
            }
            segments.push(BoundarySegment { from, to, shape });
            from = to;
        }
    }

    ClosureBoundary {
        case,
        channel: *ch,
        energy: *en,
        theorem_vertices,
        endpoint_branch,
        segments,
        dropped,
        curve,
        x1,
        x2,
    }
}

/// Strict membership in the closure.
pub fn contains(p: RatePoint, ch: &ChannelParams, en: &EnergyParams) -> bool {
    boundary(ch, en).contains(p)
}

/// Which constraint pins the maximiser of the relay problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P2Branch {
    /// Stationary point `q_r = 1 - sqrt(x / alpha)`.
    Interior,
    /// `q_r = δR`: the relay transmits at its harvest rate.
    ClampedAtDelta,
    /// `q_r = 1 - x / (δS alpha)`: the source, transmitting at its harvest
    /// rate, only just sustains `x`.
    SourceLimited,
}

/// Maximiser of `lambda_r` over the relay transmit probability at a fixed
/// source rate `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P2Solution {
    pub q_r_star: f64,
    pub y_star: f64,
    pub branch: P2Branch,
}

/// The relay problem's objective: `q P - c x / alpha - q P x / ((1 - q) alpha)`.
pub fn p2_objective(x: f64, q_r: f64, ch: &ChannelParams) -> f64 {
    let alpha = success_aggregate(ch);
    let p = ch.p_rd;
    if x <= 0.0 {
        return q_r * p;
    }
    q_r * p - ch.relay_catch() * x / alpha - q_r * p * x / ((1.0 - q_r) * alpha)
}

/// Solves `max_{q_r} lambda_r` at `lambda_s = x` over policies in
/// `[0, δS] x [0, δR]`, subject to the source sustaining `x`.
pub fn optimize_p2(x: f64, ch: &ChannelParams, en: &EnergyParams) -> Result<P2Solution> {
    let alpha = success_aggregate(ch);
    if !(0.0..=alpha + TOL).contains(&x) {
        return Err(Error::Precondition(format!(
            "optimize_p2 needs 0 <= x <= alpha = {alpha}, got {x}"
        )));
    }
    let (ds, dr) = (en.delta_s, en.delta_r);
    if x <= 0.0 {
        return Ok(P2Solution {
            q_r_star: dr,
            y_star: dr * ch.p_rd,
            branch: P2Branch::ClampedAtDelta,
        });
    }
    if ds <= 0.0 || x >= ds * alpha {
        return Err(Error::Infeasible(format!(
            "the source cannot sustain x = {x} (at most δS alpha = {})",
            ds * alpha
        )));
    }
    let q_cap = 1.0 - x / (ds * alpha);
    let x1 = (1.0 - dr).powi(2) * alpha;
    let x2 = ds * ds * alpha;
    let (q, branch) = if x1 < x && x <= x2 {
        (1.0 - (x / alpha).sqrt(), P2Branch::Interior)
    } else if dr <= q_cap {
        (dr, P2Branch::ClampedAtDelta)
    } else {
        (q_cap, P2Branch::SourceLimited)
    };
    let y = p2_objective(x, q, ch);
    if y < 0.0 {
        return Err(Error::Infeasible(format!(
            "best lambda_r at x = {x} is {y} < 0"
        )));
    }
    Ok(P2Solution {
        q_r_star: q,
        y_star: y,
        branch,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P1Branch {
    /// `q_s = sqrt(x / alpha)` on the square-root curve.
    Curve,
    /// The relay, transmitting at its harvest rate, is the bottleneck.
    RelayLimited,
    /// `q_s = δS`.
    SourceLimited,
}

/// Maximiser of `lambda_s` over the source transmit probability at a fixed
/// relay rate `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct P1Solution {
    pub q_s_star: f64,
    pub x_star: f64,
    pub branch: P1Branch,
}

/// The source problem's objective at relay transmit probability `q_r`:
/// the largest `x` allowed by both source-dominant inequalities.
pub fn p1_objective(y: f64, q_s: f64, q_r: f64, ch: &ChannelParams) -> f64 {
    let alpha = success_aggregate(ch);
    let (p, c) = (ch.p_rd, ch.relay_catch());
    let den = (1.0 - q_s) * p + q_s * c;
    let source = if den > 0.0 {
        q_s * alpha * ((1.0 - q_s) * p - y) / den
    } else {
        f64::NEG_INFINITY
    };
    let slack = q_r * (1.0 - q_s) * p - y;
    let relay = if c > 0.0 {
        slack * alpha / c
    } else if slack > 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    };
    source.min(relay)
}

/// Solves `max_{q_s} lambda_s` at `lambda_r = y` in closed form.
pub fn optimize_p1(y: f64, ch: &ChannelParams, en: &EnergyParams) -> Result<P1Solution> {
    let p = ch.p_rd;
    if !(0.0..=p + TOL).contains(&y) {
        return Err(Error::Precondition(format!(
            "optimize_p1 needs 0 <= y <= p_rd = {p}, got {y}"
        )));
    }
    let alpha = success_aggregate(ch);
    let c = ch.relay_catch();
    let (ds, dr) = (en.delta_s, en.delta_r);
    let infeasible = || Error::Infeasible(format!("no policy supports lambda_r = {y}"));
    if y > dr * p + TOL {
        return Err(infeasible());
    }
    if alpha <= 0.0 {
        return Ok(P1Solution {
            q_s_star: 0.0,
            x_star: 0.0,
            branch: P1Branch::RelayLimited,
        });
    }
    let relay_limited = || {
        let den = (1.0 - dr) * c + dr * p;
        let x = if dr >= 1.0 || den <= 0.0 {
            0.0
        } else {
            (dr * p - y) * (1.0 - dr) * alpha / den
        };
        let q = if dr >= 1.0 {
            0.0
        } else {
            x / ((1.0 - dr) * alpha)
        };
        P1Solution {
            q_s_star: q.min(ds),
            x_star: x,
            branch: P1Branch::RelayLimited,
        }
    };
    let source_limited = || {
        let den = (1.0 - ds) * p + ds * c;
        let x = if den > 0.0 {
            ds * alpha * ((1.0 - ds) * p - y) / den
        } else {
            -1.0
        };
        P1Solution {
            q_s_star: ds,
            x_star: x,
            branch: P1Branch::SourceLimited,
        }
    };
    let sol = match ClosureCase::of(en) {
        ClosureCase::AboveOne => {
            let y_b = dr * dr * p - (1.0 - dr).powi(2) * c;
            let y_c = (1.0 - ds).powi(2) * p - ds * ds * c;
            if y >= y_b && dr < 1.0 {
                relay_limited()
            } else if y >= y_c || ds >= 1.0 {
                let x = CurveParams::of(ch).x_at(y);
                P1Solution {
                    q_s_star: (x / alpha).sqrt(),
                    x_star: x,
                    branch: P1Branch::Curve,
                }
            } else {
                source_limited()
            }
        }
        ClosureCase::BelowOne => {
            let y_f = dr * (1.0 - ds) * p - ds * (1.0 - dr) * c;
            if y >= y_f {
                relay_limited()
            } else {
                source_limited()
            }
        }
    };
    if sol.x_star < -TOL {
        return Err(infeasible());
    }
    Ok(P1Solution {
        x_star: sol.x_star.max(0.0),
        ..sol
    })
}

/// Policy that puts the saturated throughput pair on the closure boundary
/// at `lambda_s = x`: the relay problem's maximiser for `q_r`, then
/// `q_s = x / ((1 - q_r) alpha)` from the source's saturated throughput.
pub fn achieving_policy(x: f64, ch: &ChannelParams, en: &EnergyParams) -> Result<AccessPolicy> {
    let sol = optimize_p2(x, ch, en)?;
    let alpha = success_aggregate(ch);
    let q_s = if x <= 0.0 {
        0.0
    } else {
        x / ((1.0 - sol.q_r_star) * alpha)
    };
    AccessPolicy::new(
        q_s.clamp(0.0, en.delta_s),
        sol.q_r_star.clamp(0.0, en.delta_r),
    )
}

/// Axis ranges and resolution of the rate grid an oracle run labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateGrid {
    pub s_max: f64,
    pub r_max: f64,
    /// Points per axis, endpoints included.
    pub points: usize,
}

impl Default for RateGrid {
    fn default() -> Self {
        Self {
            s_max: 1.0,
            r_max: 1.0,
            points: 201,
        }
    }
}

impl RateGrid {
    fn axis(max: f64, points: usize) -> Vec<f64> {
        let n = points.max(2);
        (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
    }
}

/// Policy set the oracle unions over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyDomain {
    /// `[0, δS] x [0, δR]`.
    HarvestBox,
    /// `[0, 1]^2`.
    UnitSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    /// Policy grid points per axis.
    pub grid_n: usize,
    pub domain: PolicyDomain,
    pub rates: RateGrid,
    /// Add `q_r = 1 - sqrt(lambda_s / alpha)` for every sampled `lambda_s`.
    pub exact_relay_optimum: bool,
}

impl OracleOptions {
    pub fn new(grid_n: usize) -> Self {
        Self {
            grid_n,
            domain: PolicyDomain::HarvestBox,
            rates: RateGrid::default(),
            exact_relay_optimum: true,
        }
    }
}

/// Membership of a rate grid in the union of outer bounds over a policy grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRegion {
    pub lambda_s: Vec<f64>,
    pub lambda_r: Vec<f64>,
    /// Row-major over `(lambda_r index, lambda_s index)`.
    pub inside: Vec<bool>,
    pub policies_evaluated: usize,
}

impl OracleRegion {
    pub fn get(&self, i_s: usize, i_r: usize) -> bool {
        self.inside[i_r * self.lambda_s.len() + i_s]
    }

    pub fn count_inside(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64, bool)> + '_ {
        self.lambda_r.iter().enumerate().flat_map(move |(j, &r)| {
            self.lambda_s
                .iter()
                .enumerate()
                .map(move |(i, &s)| (s, r, self.get(i, j)))
        })
    }
}

/// Brute-force closure: a rate point is inside when it lies in `R1 ∪ R2`
/// for at least one policy on a `grid_n x grid_n` grid over `[0, δS] x [0, δR]`.
pub fn union_oracle(ch: &ChannelParams, en: &EnergyParams, grid_n: usize) -> OracleRegion {
    union_oracle_with(ch, en, &OracleOptions::new(grid_n))
}

pub fn union_oracle_with(
    ch: &ChannelParams,
    en: &EnergyParams,
    opts: &OracleOptions,
) -> OracleRegion {
    let n = opts.grid_n.max(2);
    let (s_hi, r_hi) = match opts.domain {
        PolicyDomain::HarvestBox => (en.delta_s, en.delta_r),
        PolicyDomain::UnitSquare => (1.0, 1.0),
    };
    let lambda_s = RateGrid::axis(opts.rates.s_max, opts.rates.points);
    let lambda_r = RateGrid::axis(opts.rates.r_max, opts.rates.points);

    let q_s_axis = RateGrid::axis(s_hi, n);
    let mut q_r_axis = RateGrid::axis(r_hi, n);
    let alpha = success_aggregate(ch);
    if opts.exact_relay_optimum && alpha > 0.0 {
        q_r_axis.extend(
            lambda_s
                .iter()
                .filter(|&&x| x <= alpha)
                .map(|&x| 1.0 - (x / alpha).sqrt())
                .filter(|q| (0.0..=r_hi).contains(q)),
        );
        q_r_axis.sort_by(f64::total_cmp);
        q_r_axis.dedup();
    }

    let regions: Vec<LinearRegion> = q_s_axis
        .iter()
        .flat_map(|&q_s| q_r_axis.iter().map(move |&q_r| (q_s, q_r)))
        .flat_map(|(q_s, q_r)| {
            let spec = RegionSpec::new(*ch, *en, AccessPolicy { q_s, q_r });
            [spec.r1_region().ok(), spec.r2_region().ok()]
        })
        .flatten()
        .collect();
    let policies_evaluated = q_s_axis.len() * q_r_axis.len();

    let inside: Vec<bool> = lambda_r
        .par_iter()
        .flat_map_iter(|&r| {
            let regions = &regions;
            lambda_s.iter().map(move |&s| {
                let p = RatePoint {
                    lambda_s: s,
                    lambda_r: r,
                };
                regions.iter().any(|reg| reg.contains(p))
            })
        })
        .collect();

    OracleRegion {
        lambda_s,
        lambda_r,
        inside,
        policies_evaluated,
    }
}

/// Relay share of source departures, for callers working in closure
/// coordinates; zero on a degenerate channel.
pub fn split(ch: &ChannelParams) -> f64 {
    relay_fraction(ch).unwrap_or(0.0)
}
