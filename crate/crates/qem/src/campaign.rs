use std::thread;

use qem_core::estimator::SignedHistogram;
use qem_core::mitigation::{chunk_count, run_campaign, sample_chunk, MitigationPlan, ResponseSampler};
use qem_core::Result;

/// Samples `shots` response circuits on up to `threads` workers.
///
/// Worker `w` takes chunks `w, w + threads, ...`; each chunk draws from its
/// own stream of `seed`, so the merged histogram is the same for any thread
/// count.
pub fn run_parallel(plan: &MitigationPlan, shots: u64, seed: u64, threads: usize) -> Result<SignedHistogram> {
    let n_chunks = chunk_count(shots);
    let threads = threads.clamp(1, n_chunks.max(1) as usize);
    if threads == 1 {
        return run_campaign(plan, shots, seed);
    }
    let parts = thread::scope(|s| {
        let workers: Vec<_> = (0..threads)
            .map(|w| {
                s.spawn(move || -> Result<SignedHistogram> {
                    let mut sampler = ResponseSampler::new(plan)?;
                    let mut hist = SignedHistogram::new(plan.n_bits());
                    for chunk in (w as u64..n_chunks).step_by(threads) {
                        hist.merge(&sample_chunk(&mut sampler, seed, chunk, shots))?;
                    }
                    Ok(hist)
                })
            })
            .collect();
        workers.into_iter().map(|h| h.join().expect("sampling worker panicked")).collect::<Result<Vec<_>>>()
    })?;
    let mut hist = SignedHistogram::new(plan.n_bits());
    for part in &parts {
        hist.merge(part)?;
    }
    Ok(hist)
}
