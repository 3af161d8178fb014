use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::plan::MitigationPlan;
use super::sampler::ResponseSampler;
use crate::estimator::SignedHistogram;
use crate::Result;

/// Shots per chunk. Chunk `c` always uses stream `c` of the seed, so results
/// do not depend on how chunks are spread over workers.
pub const CHUNK_SHOTS: u64 = 1 << 14;

pub fn chunk_count(shots: u64) -> u64 {
    shots.div_ceil(CHUNK_SHOTS)
}

/// Number of shots in chunk `chunk` of a `shots`-shot campaign.
pub fn chunk_len(shots: u64, chunk: u64) -> u64 {
    (shots - chunk * CHUNK_SHOTS).min(CHUNK_SHOTS)
}

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Samples one chunk into a fresh histogram.
pub fn sample_chunk(sampler: &mut ResponseSampler<'_>, seed: u64, chunk: u64, shots: u64) -> SignedHistogram {
    let mut rng = chunk_rng(seed, chunk);
    let mut hist = SignedHistogram::new(sampler.plan().n_bits());
    for _ in 0..chunk_len(shots, chunk) {
        hist.record(sampler.sample(&mut rng));
    }
    hist
}

/// Runs a whole campaign on the current thread.
pub fn run_campaign(plan: &MitigationPlan, shots: u64, seed: u64) -> Result<SignedHistogram> {
    let mut sampler = ResponseSampler::new(plan)?;
    let mut hist = SignedHistogram::new(plan.n_bits());
    for chunk in 0..chunk_count(shots) {
        hist.merge(&sample_chunk(&mut sampler, seed, chunk, shots))?;
    }
    Ok(hist)
}
