use super::min_string::prefix_marginal;
use crate::estimator::{DistributionEstimate, SignedHistogram};
use crate::{Bitstring, Result};

/// Thresholds `lo ≤ p_th < hi` that give the right answer; `hi` may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ThresholdInterval {
    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn contains(&self, p_th: f64) -> bool {
        self.lo <= p_th && p_th < self.hi
    }

    /// `hi − lo`, or 0 when empty.
    pub fn width(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }
}

/// Fixed thresholds for which the global method returns `true_z_min`:
/// `lo` is the largest positive estimate below `true_z_min` (0 if none),
/// `hi` is the estimate of `true_z_min`.
pub fn valid_threshold_interval_global(est: &DistributionEstimate, true_z_min: Bitstring) -> ThresholdInterval {
    let lo = est.entries().iter().take_while(|e| e.z < true_z_min).map(|e| e.value).fold(0.0, f64::max);
    ThresholdInterval { lo, hi: est.value(true_z_min) }
}

/// Intersection of per-digit constraints for the digitwise method: a 0 digit
/// needs `p_th < p̂(z_1…z_k)`, a 1 digit needs `p_th ≥ 1 − p̂(z_1…z_k)`.
pub fn valid_threshold_interval_digitwise(
    hist: &SignedHistogram,
    a: f64,
    true_z_min: Bitstring,
) -> Result<ThresholdInterval> {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for k in 1..=true_z_min.len() {
        let (m, _) = prefix_marginal(hist, a, true_z_min.prefix(k)?)?;
        if true_z_min.bit(k - 1) {
            lo = lo.max(1.0 - m);
        } else {
            hi = hi.min(m);
        }
    }
    Ok(ThresholdInterval { lo, hi })
}
