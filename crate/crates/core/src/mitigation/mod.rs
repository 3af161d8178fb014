//! Probabilistic error cancellation, post-selection and signed response sampling.

mod campaign;
mod oracle;
mod plan;
mod predicate;
mod qpd;
mod sampler;

pub use campaign::{chunk_count, chunk_len, chunk_rng, run_campaign, sample_chunk, CHUNK_SHOTS};
pub use oracle::{exact_response_rates, ResponseRates};
pub use plan::{plan_pec, MitigationMode, MitigationPlan, PlanSummary, SiteSummary};
pub use predicate::PostSelectionPredicate;
pub use qpd::{invert_channel, QpdTerm, QuasiProbabilityDecomposition};
pub use sampler::{draw_response_sample, ResponseSample, ResponseSampler, Sign};
