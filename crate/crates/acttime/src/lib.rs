//! Timing side-channel analysis of neural-network activation
//! functions, and the desynchronization countermeasure that defeats it.
//!
//! The toolkit simulates the data-dependent execution time of ReLU,
//! sigmoid, and tanh with cluster-based statistical profiles, then
//! covers the full attack/defense loop:
//!
//! - [`profile`] / [`trace`] — calibrated timing profiles and seeded
//!   campaign capture (plus an optional host-clock backend in [`host`]).
//! - [`countermeasure`] — random-delay calibration (cluster averages,
//!   order-of-magnitude variance rule) and trace protection.
//! - [`leakage`] — fixed-vs-random Welch t-test (TVLA, threshold 4.5)
//!   and the mean-distance activation distinguisher.
//! - [`overhead`] — deployment cost model for fully-connected layers.
//! - [`harness`] — config-driven pipelines that write traces, plot
//!   data, and report documents.
//!
//! Every campaign is deterministic given its 64-bit seed. See the
//! `examples/` directory for one runnable program per capability.

pub mod activation;
pub mod cluster;
pub mod countermeasure;
pub mod error;
pub mod harness;
pub mod host;
pub mod leakage;
pub mod overhead;
pub mod profile;
pub mod stats;
pub mod trace;

pub use activation::{evaluate, ActivationKind};
pub use countermeasure::{
    calibrate, order_of_magnitude, protect_trace, CalibrationReport, DelayDistribution,
};
pub use error::{Error, Result};
pub use leakage::{
    accuracy_sweep, distinguish, welch_t, Aggregate, DistinguisherVerdict, TvlaCampaign,
    TvlaResult, TVLA_THRESHOLD,
};
pub use overhead::{overhead_report, NetworkCostModel, OverheadReport, TimeRange};
pub use profile::{paper_profiles, Interval, TimingCluster, TimingProfile};
pub use stats::RunningStats;
pub use trace::{capture_trace, InputSampler, TimingTrace};
