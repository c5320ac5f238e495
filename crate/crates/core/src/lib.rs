//! Simulator and optimization library for a two-tier multi-UAV IoT uplink
//! system.
//!
//! A temporary base station (TBS) sits at the center of a circular region.
//! The annulus outside its coverage radius is split into `M` angular sectors,
//! each served by a hovering sector UAV (SU) that collects uplink traffic
//! from its IoT devices via power-domain NOMA. A fixed-wing anchor UAV (AU)
//! circles the TBS and relays each SU's buffer to the TBS during that
//! sector's time frame of a cyclical TDMA schedule.
//!
//! The library covers:
//!
//! * seeded scenario generation ([`scenario`]),
//! * line-of-sight channel gains for all three link classes ([`channel`]),
//! * SU placement via per-sector centroids ([`placement`]),
//! * per-sector per-slot transmit power optimization under SIC ordering
//!   constraints, solved with a Lagrange-dual subgradient method
//!   ([`power`]),
//! * spectral-efficiency accounting for the full relay chain ([`rate`]),
//! * Monte-Carlo sweep and scheme-comparison drivers ([`experiment`]).
//!
//! Conventions used throughout: sectors are indexed `0..M`; time slots carry
//! their mathematical names `1..=K` (matrices store slot `k` at column
//! `k - 1`). All randomness flows through explicitly seeded ChaCha8 streams,
//! so every result is reproducible bit-for-bit across platforms and thread
//! counts.
//!
//! Runnable walkthroughs for each capability live in `examples/`; the
//! `uavnoma` binary exposes the same pipelines as `run`, `sweep`, `compare`
//! and `trace` subcommands.

pub mod channel;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod placement;
pub mod power;
pub mod rate;
pub mod scenario;

pub use config::{PlacementRegion, ScenarioConfig};
pub use error::Error;
pub use experiment::{ResultRow, Scheme, SweepSpec};
pub use scenario::{Deployment, TimeGrid};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
