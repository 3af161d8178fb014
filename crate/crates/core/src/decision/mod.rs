//! Hypothesis tests on mitigated estimates: thresholds, smallest-string
//! extraction, threshold-interval analysis and ground-state observables.

mod ground_state;
mod interval;
mod min_string;
mod policy;
mod quantile;

pub use ground_state::{exact_conditional_expectation, ground_state_observable, GroundStateQuery, ObservableEstimate};
pub use interval::{valid_threshold_interval_digitwise, valid_threshold_interval_global, ThresholdInterval};
pub use min_string::{
    min_string_digitwise, min_string_global, prefix_marginal, AuditEntry, Method, MinStringResult, Verdict,
};
pub use policy::{threshold_for, ThresholdPolicy};
pub use quantile::normal_quantile;
