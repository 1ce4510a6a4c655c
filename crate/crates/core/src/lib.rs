//! Monte-Carlo secrecy analysis of a wiretap link relayed by a
//! reconfigurable intelligent surface (RIS) under Rician fading.
//!
//! A source S reaches a legitimate receiver D only through an RIS of `K`
//! passive elements; an eavesdropper E listens through the same surface.
//! The crate samples the two-hop channels, designs the RIS phases
//! ([`phase_design`]) and estimates the secrecy outage probability and the
//! average secrecy rate ([`secrecy_metrics`]) over parameter sweeps
//! ([`experiments`]).
//!
//! Trials run on a rayon pool when the `parallel` feature is on (the
//! default). Results are identical either way.

pub mod channel;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod phase_design;
pub mod rng;
pub mod secrecy_metrics;
pub mod stats;

pub use channel::{ChannelVector, LinkBudget, PathlossConvention, Position2D, RadioParams};
pub use error::{Error, Result};
pub use exec::Executor;
pub use experiments::{ScenarioConfig, SweepSpec, SweepVariable};
pub use phase_design::{AmplitudeProfile, PairingPlan, PhaseConfig};
pub use rng::RandomStream;
pub use secrecy_metrics::{estimate, PreparedScenario, Scheme, SecrecyEstimate, SnrPair};
pub use stats::EstimateWithCI;
