use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::policy::{threshold_for, ThresholdPolicy};
use crate::estimator::{DistributionEstimate, SignedHistogram};
use crate::{Bitstring, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Global,
    Digitwise,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Global => "global",
            Self::Digitwise => "digitwise",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `p̂ ≤ 0`: taken to have zero probability without testing.
    Skipped,
    /// `p̂ ≤ p_th`.
    AcceptNull,
    /// `p̂ > p_th`.
    RejectNull,
}

impl Verdict {
    fn of(value: f64, threshold: f64) -> Self {
        if value > threshold {
            Self::RejectNull
        } else {
            Self::AcceptNull
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Skipped => "skipped",
            Self::AcceptNull => "accept_null",
            Self::RejectNull => "reject_null",
        }
    }
}

/// One hypothesis test. For the digitwise method `tested` is the prefix
/// `z_1…z_{k−1}0` and a rejected null sets digit `k` to 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditEntry {
    pub tested: Bitstring,
    pub value: f64,
    pub stderr: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinStringResult {
    pub z_min: Bitstring,
    pub method: Method,
    pub policy: ThresholdPolicy,
    pub audit: Vec<AuditEntry>,
    /// Strings skipped because `p̂ ≤ 0` (global method only).
    pub skipped: Vec<Bitstring>,
}

/// Tests observed strings in ascending order against `p_em(z) = 0`; the first
/// with `p̂ > p_th` is the smallest string. Unobserved and non-positive
/// entries are taken to be zero.
pub fn min_string_global(est: &DistributionEstimate, policy: &ThresholdPolicy) -> Result<MinStringResult> {
    let mut audit = Vec::new();
    let mut skipped = Vec::new();
    for e in est.entries() {
        let threshold = threshold_for(policy, e.stderr);
        let verdict = if e.value <= 0.0 { Verdict::Skipped } else { Verdict::of(e.value, threshold) };
        audit.push(AuditEntry { tested: e.z, value: e.value, stderr: e.stderr, threshold, verdict });
        match verdict {
            Verdict::Skipped => skipped.push(e.z),
            Verdict::RejectNull => {
                return Ok(MinStringResult { z_min: e.z, method: Method::Global, policy: *policy, audit, skipped })
            }
            Verdict::AcceptNull => {}
        }
    }
    Err(Error::NoStringRejected)
}

/// `(A Σ_{suffix} (N_+ − N_−) / N_cir, ε √(Σ_{suffix} N_z / N_cir))` for the
/// strings starting with `prefix`.
pub fn prefix_marginal(hist: &SignedHistogram, a: f64, prefix: Bitstring) -> Result<(f64, f64)> {
    if hist.n_cir() == 0 {
        return Err(Error::NoCircuitRuns);
    }
    if prefix.len() > hist.n_bits() {
        return Err(Error::InvalidBitstring(prefix.to_string_digits()));
    }
    let n = hist.n_cir() as f64;
    let c = hist.prefix_counts(prefix);
    let value = a * c.signed() as f64 / n;
    let stderr = a / n.sqrt() * (c.total() as f64 / n).sqrt();
    Ok((value, stderr))
}

/// Decides the smallest string one digit at a time: digit `k` is 1 exactly
/// when the marginal of `z_1…z_{k−1}0` is at most `p_th`.
pub fn min_string_digitwise(hist: &SignedHistogram, a: f64, policy: &ThresholdPolicy) -> Result<MinStringResult> {
    let n_bits = hist.n_bits();
    let mut audit = Vec::with_capacity(n_bits);
    let mut decided: Option<Bitstring> = None;
    for _ in 0..n_bits {
        let tested = match decided {
            None => Bitstring::zeros(1)?,
            Some(d) => d.push(false)?,
        };
        let (value, stderr) = prefix_marginal(hist, a, tested)?;
        let threshold = threshold_for(policy, stderr);
        let verdict = Verdict::of(value, threshold);
        audit.push(AuditEntry { tested, value, stderr, threshold, verdict });
        let digit = verdict == Verdict::AcceptNull;
        decided = Some(match decided {
            None => Bitstring::new(digit as u64, 1)?,
            Some(d) => d.push(digit)?,
        });
    }
    let z_min = decided.ok_or(Error::EmptyMeasuredRegister)?;
    Ok(MinStringResult { z_min, method: Method::Digitwise, policy: *policy, audit, skipped: Vec::new() })
}
