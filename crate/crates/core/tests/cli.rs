use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const STANDARD: &str = r#"{"p_sd": 0.2, "p_rd": 0.6, "p_sr": 0.5,
  "delta_s": 0.5, "delta_r": 0.6, "q_s": 0.3, "q_r": 0.4,
  "lambda_s": 0.05, "lambda_r": 0.1}"#;

fn ehrelay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehrelay"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn with_keys(replacements: &[(&str, &str)]) -> String {
    let mut s = STANDARD.to_string();
    for (from, to) in replacements {
        assert!(s.contains(from), "{from}");
        s = s.replace(from, to);
    }
    s
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn regions_csv_has_inner_corner() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", STANDARD);
    let out = dir.path().join("regions.csv");
    let o = ehrelay(&["regions", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("lambda_s,lambda_r,active_constraint\n"));
    assert!(text.lines().any(|l| l.starts_with("0.108,0.096,inner/")));
}

#[test]
fn degenerate_policy_warns_and_succeeds() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "cfg.json",
        &with_keys(&[
            ("\"q_s\": 0.3", "\"q_s\": 0"),
            ("\"q_r\": 0.4", "\"q_r\": 0"),
        ]),
    );
    let out = dir.path().join("regions.csv");
    let o = ehrelay(&["regions", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(rows(&out).is_empty());
}

#[test]
fn bad_configs_exit_2() {
    let dir = TempDir::new().unwrap();
    let malformed = write_config(&dir, "bad.json", "{\"p_sd\": 0.2,");
    let o = ehrelay(&["regions", "--config", s(&malformed)]);
    assert_eq!(o.status.code(), Some(2));

    let out_of_range = write_config(
        &dir,
        "range.json",
        &with_keys(&[("\"delta_s\": 0.5", "\"delta_s\": 1.5")]),
    );
    let o = ehrelay(&["closure", "--config", s(&out_of_range)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta_s"));

    let o = ehrelay(&["simulate", "--config", s(&out_of_range), "--mode", "fast"]);
    assert_eq!(o.status.code(), Some(2));
}

fn closure_vertices(delta_s: &str, delta_r: &str) -> Vec<Vec<String>> {
    let dir = TempDir::new().unwrap();
    let body = with_keys(&[("\"delta_s\": 0.5", delta_s), ("\"delta_r\": 0.6", delta_r)]);
    let cfg = write_config(&dir, "cfg.json", &body);
    let out = dir.path().join("closure.csv");
    let o = ehrelay(&["closure", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    rows(&out).into_iter().filter(|r| r[0].len() == 1).collect()
}

#[test]
fn closure_vertex_rows() {
    let v = closure_vertices("\"delta_s\": 0.5", "\"delta_r\": 0.6");
    let expected = [
        ["A", "0", "0.36"],
        ["B", "0.096", "0.152"],
        ["C", "0.15", "0.05"],
        ["D", "0.18", "0"],
    ];
    assert_eq!(v, expected.map(|r| r.map(String::from).to_vec()));

    let v = closure_vertices("\"delta_s\": 0.3", "\"delta_r\": 0.4");
    let expected = [
        ["E", "0", "0.24"],
        ["F", "0.108", "0.096"],
        ["G", "0.14", "0"],
    ];
    assert_eq!(v, expected.map(|r| r.map(String::from).to_vec()));
}

#[test]
fn full_harvest_closure_is_a_pure_curve() {
    let dir = TempDir::new().unwrap();
    let body = with_keys(&[
        ("\"delta_s\": 0.5", "\"delta_s\": 1"),
        ("\"delta_r\": 0.6", "\"delta_r\": 1"),
    ]);
    let cfg = write_config(&dir, "cfg.json", &body);
    let out = dir.path().join("closure.csv");
    assert_eq!(
        ehrelay(&[
            "closure",
            "--config",
            s(&cfg),
            "--out",
            s(&out),
            "--samples",
            "16"
        ])
        .status
        .code(),
        Some(0)
    );
    let r = rows(&out);
    let labels: Vec<&str> = r.iter().map(|row| row[0].as_str()).collect();
    assert_eq!(labels.first(), Some(&"A"));
    assert_eq!(labels.last(), Some(&"D"));
    assert!(labels[1..labels.len() - 1].iter().all(|l| *l == "AD"));
}

#[test]
fn sweep_grid_and_determinism() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", STANDARD);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = ehrelay(&[
            "sweep",
            "--config",
            s(&cfg),
            "--out",
            s(out),
            "--seed",
            "11",
            "--grid",
            "0:0.2:0.05",
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let r = rows(&a);
    assert_eq!(r.len(), 25);
    for row in r.iter().filter(|row| row[2] == "true") {
        assert_eq!(
            (row[5].as_str(), row[6].as_str()),
            ("STABLE", "STABLE"),
            "{row:?}"
        );
    }
}

#[test]
fn sweep_rejects_empty_grid_and_missing_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", STANDARD);
    let o = ehrelay(&[
        "sweep",
        "--config",
        s(&cfg),
        "--seed",
        "1",
        "--grid",
        "0.3:0.1:0.05",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = ehrelay(&["sweep", "--config", s(&cfg), "--grid", "0:0.1:0.05"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ehrelay(&["validate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_writes_metrics_and_trajectory() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", STANDARD);
    let mut outputs = Vec::new();
    for k in 0..2 {
        let (json, traj) = (
            dir.path().join(format!("m{k}.json")),
            dir.path().join(format!("t{k}.csv")),
        );
        let o = ehrelay(&[
            "simulate",
            "--config",
            s(&cfg),
            "--out",
            s(&json),
            "--trajectory",
            s(&traj),
            "--seed",
            "3",
            "--horizon",
            "200000",
            "--mode",
            "saturated",
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        outputs.push((fs::read(&json).unwrap(), fs::read(&traj).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);

    let metrics: serde_json::Value = serde_json::from_slice(&outputs[0].0).unwrap();
    assert_eq!(metrics["mode"], "saturated");
    assert!((metrics["measured_mu_s"].as_f64().unwrap() - 0.108).abs() < 0.01);
    let traj = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert!(traj.starts_with("slot,q_s,q_r,b_s,b_r\n"));
    assert_eq!(traj.lines().count(), 1 + 200_000 / 100);
}

#[test]
fn config_keys_are_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let body = STANDARD.replace(
        '}',
        r#", "mode": "relay-dominant", "horizon": 50000, "seed": 1}"#,
    );
    let cfg = write_config(&dir, "cfg.json", &body);
    let o = ehrelay(&[
        "simulate",
        "--config",
        s(&cfg),
        "--mode",
        "original",
        "--horizon",
        "20000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let m: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(m["mode"], "original");
    assert_eq!(m["slots_measured"], 18_000);
}
