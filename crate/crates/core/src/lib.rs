//! Stable throughput of a two-hop energy-harvesting relay network under
//! slotted random access.
//!
//! A source `S` and a relay `R` share a collision channel to a destination
//! `D`. Both harvest energy into unbounded batteries, both carry exogenous
//! Bernoulli traffic, and the relay takes over source packets it overhears
//! when the destination misses them. The crate provides
//!
//! * [`model`]: closed-form service rates, battery occupancy and the relay's
//!   traffic split;
//! * [`regions`]: inner and outer bounds of the stability region at a fixed
//!   access policy;
//! * [`closure`]: the exact union of stability regions over all policies,
//!   the two underlying optimisation problems, and a brute-force oracle;
//! * [`sim`]: a slot-level simulator of the original network and its
//!   dominant/saturated variants;
//! * [`stability`]: empirical stable/unstable classification;
//! * [`sweep`], [`export`], [`config`], [`validation`], [`cli`]: the batch
//!   and file-format layer behind the `ehrelay` binary.

pub mod cli;
pub mod closure;
pub mod config;
pub mod error;
pub mod export;
pub mod model;
pub mod params;
pub mod regions;
pub mod sim;
pub mod stability;
pub mod sweep;
pub mod validation;

pub use error::{Error, FieldError, Result};
pub use params::{AccessPolicy, ChannelParams, EnergyParams, RatePoint, ThroughputPair};
