//! Signed histograms, distribution estimators and error metrics.

mod estimate;
mod histogram;
mod metrics;

pub use estimate::{
    clip_renormalize, direct_estimate, sampling_estimate, stderr_per_string, DistributionEstimate, EstimateEntry,
    EstimateKind, StdErr,
};
pub use histogram::{Counts, SignedHistogram};
pub use metrics::{distance, metrics, total_variance_bounds, ErrorMetrics};
