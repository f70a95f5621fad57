//! JSON configuration documents.
//!
//! ```json
//! {
//!   "p_sd": 0.2, "p_rd": 0.6, "p_sr": 0.5,
//!   "delta_s": 0.5, "delta_r": 0.6,
//!   "q_s": 0.3, "q_r": 0.4,
//!   "lambda_s": 0.05, "lambda_r": 0.1,
//!   "mode": "original", "horizon": 1000000, "seed": 7, "warmup": 100000
//! }
//! ```
//!
//! The nine model keys are required. `mode`, `horizon`, `seed`, `warmup`,
//! `trajectory_stride` and `grid` are optional simulation and sweep
//! settings. Unknown keys are rejected so that typos surface.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, FieldError, Result};
use crate::params::{AccessPolicy, ChannelParams, EnergyParams, RatePoint};
use crate::sim::{SimConfig, SimMode};

const MODEL_KEYS: [&str; 9] = [
    "p_sd", "p_rd", "p_sr", "delta_s", "delta_r", "q_s", "q_r", "lambda_s", "lambda_r",
];
const INT_KEYS: [&str; 4] = ["horizon", "seed", "warmup", "trajectory_stride"];

pub const DEFAULT_HORIZON: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub ch: ChannelParams,
    pub en: EnergyParams,
    pub pol: AccessPolicy,
    pub rates: RatePoint,
    pub mode: Option<SimMode>,
    pub horizon: Option<u64>,
    pub seed: Option<u64>,
    pub warmup: Option<u64>,
    pub trajectory_stride: Option<u64>,
    pub grid: Option<String>,
}

impl Config {
    pub fn new(ch: ChannelParams, en: EnergyParams, pol: AccessPolicy, rates: RatePoint) -> Self {
        Self {
            ch,
            en,
            pol,
            rates,
            mode: None,
            horizon: None,
            seed: None,
            warmup: None,
            trajectory_stride: None,
            grid: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        match serde_json::from_str::<Value>(text)? {
            Value::Object(map) => Self::from_map(&map),
            _ => Err(Error::field("<root>", "expected a JSON object")),
        }
    }

    fn from_map(map: &Map<String, Value>) -> Result<Self> {
        let mut errors = Vec::new();
        for key in map.keys() {
            let known = MODEL_KEYS.contains(&key.as_str())
                || INT_KEYS.contains(&key.as_str())
                || key == "mode"
                || key == "grid";
            if !known {
                errors.push(FieldError::new(key, "unknown key"));
            }
        }

        let mut num = |key: &str| match map.get(key) {
            None => {
                errors.push(FieldError::new(key, "missing"));
                0.0
            }
            Some(v) => v.as_f64().unwrap_or_else(|| {
                errors.push(FieldError::new(key, format!("must be a number, got {v}")));
                0.0
            }),
        };
        let [p_sd, p_rd, p_sr, delta_s, delta_r, q_s, q_r, lambda_s, lambda_r] =
            MODEL_KEYS.map(&mut num);

        let mut int = |key: &str| {
            map.get(key).and_then(|v| {
                let n = v.as_u64();
                if n.is_none() {
                    errors.push(FieldError::new(
                        key,
                        format!("must be a non-negative integer, got {v}"),
                    ));
                }
                n
            })
        };
        let [horizon, seed, warmup, trajectory_stride] = INT_KEYS.map(&mut int);

        let mode = match map.get("mode") {
            None => None,
            Some(Value::String(s)) => match s.parse::<SimMode>() {
                Ok(m) => Some(m),
                Err(Error::Config(mut e)) => {
                    errors.append(&mut e);
                    None
                }
                Err(_) => None,
            },
            Some(v) => {
                errors.push(FieldError::new(
                    "mode",
                    format!("must be a string, got {v}"),
                ));
                None
            }
        };
        let grid = match map.get("grid") {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(v) => {
                errors.push(FieldError::new(
                    "grid",
                    format!("must be a string, got {v}"),
                ));
                None
            }
        };
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }

        let ch = absorb(ChannelParams::new(p_sd, p_rd, p_sr), &mut errors);
        let en = absorb(EnergyParams::new(delta_s, delta_r), &mut errors);
        let pol = absorb(AccessPolicy::new(q_s, q_r), &mut errors);
        let rates = absorb(RatePoint::new(lambda_s, lambda_r), &mut errors);
        match (ch, en, pol, rates) {
            (Some(ch), Some(en), Some(pol), Some(rates)) => Ok(Self {
                ch,
                en,
                pol,
                rates,
                mode,
                horizon,
                seed,
                warmup,
                trajectory_stride,
                grid,
            }),
            _ => Err(Error::Config(errors)),
        }
    }

    /// Simulation settings with defaults filled in: original mode, 10^6
    /// slots, seed 0, warmup 10% of the horizon.
    pub fn sim_config(&self) -> Result<SimConfig> {
        let horizon = self.horizon.unwrap_or(DEFAULT_HORIZON);
        let mut cfg = SimConfig::new(
            self.ch,
            self.en,
            self.pol,
            self.rates,
            self.mode.unwrap_or_default(),
            horizon,
            self.seed.unwrap_or(DEFAULT_SEED),
        );
        if let Some(w) = self.warmup {
            cfg.warmup = w;
        }
        if let Some(s) = self.trajectory_stride {
            cfg.trajectory_stride = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        let nums = [
            self.ch.p_sd,
            self.ch.p_rd,
            self.ch.p_sr,
            self.en.delta_s,
            self.en.delta_r,
            self.pol.q_s,
            self.pol.q_r,
            self.rates.lambda_s,
            self.rates.lambda_r,
        ];
        for (k, v) in MODEL_KEYS.iter().zip(nums) {
            map.insert((*k).into(), v.into());
        }
        if let Some(m) = self.mode {
            map.insert("mode".into(), m.as_str().into());
        }
        for (k, v) in
            INT_KEYS
                .iter()
                .zip([self.horizon, self.seed, self.warmup, self.trajectory_stride])
        {
            if let Some(v) = v {
                map.insert((*k).into(), v.into());
            }
        }
        if let Some(g) = &self.grid {
            map.insert("grid".into(), g.clone().into());
        }
        Value::Object(map)
    }
}

fn absorb<T>(r: Result<T>, errors: &mut Vec<FieldError>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(Error::Config(mut e)) => {
            errors.append(&mut e);
            None
        }
        Err(e) => {
            errors.push(FieldError::new("<root>", e.to_string()));
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STANDARD: &str = r#"{"p_sd":0.2,"p_rd":0.6,"p_sr":0.5,"delta_s":0.5,"delta_r":0.6,
        "q_s":0.3,"q_r":0.4,"lambda_s":0.05,"lambda_r":0.1}"#;

    fn fields(err: Error) -> Vec<String> {
        match err {
            Error::Config(f) => f.into_iter().map(|f| f.field).collect(),
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn standard_document() {
        let c = Config::from_json_str(STANDARD).unwrap();
        assert_eq!(c.ch, ChannelParams::new(0.2, 0.6, 0.5).unwrap());
        assert_eq!(c.rates, RatePoint::new(0.05, 0.1).unwrap());
        let sim = c.sim_config().unwrap();
        assert_eq!(
            (sim.mode, sim.horizon, sim.warmup),
            (SimMode::Original, 1_000_000, 100_000)
        );
        assert_eq!(Config::from_json_str(&c.to_json().to_string()).unwrap(), c);
    }

    #[test]
    fn out_of_range_names_the_field() {
        let doc = STANDARD.replace("\"delta_r\":0.6", "\"delta_r\":1.6");
        assert_eq!(
            fields(Config::from_json_str(&doc).unwrap_err()),
            ["delta_r"]
        );
    }

    #[test]
    fn missing_unknown_and_mistyped() {
        let doc = r#"{"p_sd":0.2,"p_rd":"high","p_sr":0.5,"delta_s":0.5,"delta_r":0.6,
            "q_s":0.3,"lambda_s":0.05,"lambda_r":0.1,"qr":0.4,"mode":"fast","horizon":-3}"#;
        let mut f = fields(Config::from_json_str(doc).unwrap_err());
        f.sort();
        assert_eq!(f, ["horizon", "mode", "p_rd", "q_r", "qr"]);
    }

    #[test]
    fn malformed_json() {
        assert!(matches!(
            Config::from_json_str("{\"p_sd\": 0.2,"),
            Err(Error::Json(_))
        ));
        assert!(matches!(
            Config::from_json_str("[1, 2]"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn simulation_keys() {
        let doc = STANDARD.replace(
            '}',
            r#","mode":"saturated","horizon":5000,"seed":9,"warmup":0}"#,
        );
        let sim = Config::from_json_str(&doc).unwrap().sim_config().unwrap();
        assert_eq!(
            (sim.mode, sim.horizon, sim.seed, sim.warmup),
            (SimMode::Saturated, 5000, 9, 0)
        );

        let doc = STANDARD.replace('}', r#","horizon":10,"warmup":10}"#);
        let c = Config::from_json_str(&doc).unwrap();
        assert!(matches!(c.sim_config(), Err(Error::InvalidSimConfig(_))));
    }
}
