//! CSV and JSON writers for regions, closure boundaries and simulation runs.
//!
//! Floats in CSV output are rounded to 12 decimal places with trailing
//! zeros trimmed, so `0.10799999999999998` is written as `0.108`.

use std::io::Write;

use serde::Serialize;

use crate::closure::ClosureBoundary;
use crate::error::Result;
use crate::regions::BoundaryPolyline;
use crate::sim::{SimMetrics, TrajectorySample};

/// Formats a coordinate for CSV output.
pub fn fmt_num(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        other => other.to_string(),
    }
}

/// Tag of each polyline vertex: the constraint of the edge arriving at it
/// (the first vertex takes the edge leaving it).
fn vertex_tags(poly: &BoundaryPolyline) -> impl Iterator<Item = (f64, f64, &'static str)> + '_ {
    poly.vertices.iter().enumerate().map(|(i, v)| {
        let tag = poly
            .segments
            .get(i.saturating_sub(1))
            .or(poly.segments.first())
            .map_or("", |c| c.as_str());
        (v.lambda_s, v.lambda_r, tag)
    })
}

/// Writes `lambda_s,lambda_r,active_constraint` rows for a set of named
/// polylines; tags are prefixed with the polyline name, as in
/// `inner/inner_relay` or `outer/r2_relay`.
pub fn write_regions_csv<W: Write>(out: W, polylines: &[(&str, &BoundaryPolyline)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda_s", "lambda_r", "active_constraint"])?;
    for (name, poly) in polylines {
        for (x, y, tag) in vertex_tags(poly) {
            w.write_record([fmt_num(x), fmt_num(y), format!("{name}/{tag}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `segment,lambda_s,lambda_r` rows: vertex rows carry the vertex
/// label, curve samples carry the segment name.
pub fn write_closure_csv<W: Write>(
    out: W,
    boundary: &ClosureBoundary,
    curve_samples: usize,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["segment", "lambda_s", "lambda_r"])?;
    for (label, x, y) in boundary.sample(curve_samples) {
        w.write_record([label, fmt_num(x), fmt_num(y)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trajectory_csv<W: Write>(out: W, trajectory: &[TrajectorySample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for sample in trajectory {
        w.serialize(sample)?;
    }
    if trajectory.is_empty() {
        w.write_record(["slot", "q_s", "q_r", "b_s", "b_r"])?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_metrics_json<W: Write>(out: W, metrics: &SimMetrics) -> Result<()> {
    write_json(out, metrics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::boundary;
    use crate::params::{AccessPolicy, ChannelParams, EnergyParams};
    use crate::regions::{inner_boundary, outer_boundary, RegionSpec};

    fn text(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn regions_csv_has_inner_corner() {
        let spec = RegionSpec::new(
            ChannelParams::new(0.2, 0.6, 0.5).unwrap(),
            EnergyParams::new(0.5, 0.6).unwrap(),
            AccessPolicy::new(0.3, 0.4).unwrap(),
        );
        let (inner, outer) = (inner_boundary(&spec), outer_boundary(&spec));
        let s = text(|b| write_regions_csv(b, &[("inner", &inner), ("outer", &outer)]));
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("lambda_s,lambda_r,active_constraint"));
        let rows: Vec<_> = lines.collect();
        assert!(rows
            .iter()
            .any(|r| r.starts_with("0.108,0.096") && r.contains("inner/")));
        assert!(rows.iter().any(|r| r.contains("outer/")));
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(0.10799999999999998), "0.108");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-1e-15), "0");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.123456789012345), "0.123456789012");
    }

    #[test]
    fn empty_polylines_write_header_only() {
        let empty = BoundaryPolyline::default();
        let s = text(|b| write_regions_csv(b, &[("inner", &empty)]));
        assert_eq!(s, "lambda_s,lambda_r,active_constraint\n");
    }

    #[test]
    fn closure_csv_vertex_rows() {
        let b = boundary(
            &ChannelParams::new(0.2, 0.6, 0.5).unwrap(),
            &EnergyParams::new(0.3, 0.4).unwrap(),
        );
        let s = text(|buf| write_closure_csv(buf, &b, 4));
        let labels: Vec<_> = s
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap())
            .collect();
        assert_eq!(labels, ["E", "F", "G"]);
    }

    #[test]
    fn trajectory_csv_header() {
        let s = text(|b| {
            write_trajectory_csv(
                b,
                &[TrajectorySample {
                    slot: 0,
                    q_s: 1,
                    q_r: 2,
                    b_s: 3,
                    b_r: 4,
                }],
            )
        });
        assert_eq!(s, "slot,q_s,q_r,b_s,b_r\n0,1,2,3,4\n");
        assert_eq!(
            text(|b| write_trajectory_csv(b, &[])),
            "slot,q_s,q_r,b_s,b_r\n"
        );
    }
}
