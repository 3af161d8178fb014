use super::estimate::DistributionEstimate;
use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Error of an estimate against a reference distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorMetrics {
    /// `Σ_z (p̂(z) − p(z))²`.
    pub tse: f64,
    /// `½ Σ_z |p̂(z) − p(z)|`.
    pub tvd: f64,
    /// `((A² − 1)/N_cir, A²/N_cir)` for the estimate's `A` and `N_cir`;
    /// `(0, 0)` for estimates without circuit runs.
    pub total_variance_bounds: (f64, f64),
    /// `2δ`, which bounds the sum of squared per-string deviations (at most 2
    /// for normalized distributions).
    pub bias_sq_bound: f64,
}

/// `((A² − 1)/N_cir, A²/N_cir)`.
pub fn total_variance_bounds(a: f64, n_cir: u64) -> Result<(f64, f64)> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(Error::InvalidNormalization(a));
    }
    if n_cir == 0 {
        return Err(Error::NoCircuitRuns);
    }
    let n = n_cir as f64;
    Ok(((a * a - 1.0) / n, a * a / n))
}

/// `(TSE, TVD)` between two dense vectors over `2^N` strings, checking
/// `½√TSE ≤ TVD ≤ 2^{N/2−1} √TSE`.
pub fn distance(estimate: &[f64], reference: &[f64]) -> Result<(f64, f64)> {
    if estimate.len() != reference.len() || !reference.len().is_power_of_two() {
        return Err(Error::SupportMismatch { estimate: estimate.len(), reference: reference.len() });
    }
    let n_bits = reference.len().trailing_zeros() as i32;
    let tse: f64 = estimate.iter().zip(reference).map(|(a, b)| (a - b) * (a - b)).sum();
    let tvd: f64 = estimate.iter().zip(reference).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
    let root = tse.sqrt();
    let slack = 1e-12 * (1.0 + tvd);
    let upper = 2f64.powf(n_bits as f64 / 2.0 - 1.0) * root;
    if 0.5 * root > tvd + slack || tvd > upper + slack {
        return Err(Error::NormInequalityViolated { tse, tvd });
    }
    Ok((tse, tvd))
}

/// Metrics of `est` against a dense reference indexed by string value.
pub fn metrics(est: &DistributionEstimate, reference: &[f64]) -> Result<ErrorMetrics> {
    if reference.len() != 1usize << est.n_bits() {
        return Err(Error::SupportMismatch { estimate: est.n_bits(), reference: reference.len() });
    }
    let (tse, tvd) = distance(&est.to_dense(), reference)?;
    let total_variance_bounds = match est.n_cir() {
        0 => (0.0, 0.0),
        n => total_variance_bounds(est.normalization(), n)?,
    };
    Ok(ErrorMetrics { tse, tvd, total_variance_bounds, bias_sq_bound: 2.0 * tvd })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_distributions() {
        let p = [0.25, 0.25, 0.5, 0.0];
        let est = DistributionEstimate::exact(2, &p).unwrap();
        let m = metrics(&est, &p).unwrap();
        assert_eq!((m.tse, m.tvd), (0.0, 0.0));
    }

    #[test]
    fn extreme_one_bit_case() {
        let (tse, tvd) = distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!((tse, tvd), (2.0, 1.0));
        assert!(0.5 * 2f64.sqrt() <= tvd && tvd <= 0.5 * 2f64.sqrt() * 2f64.sqrt() + 1e-15);
    }

    #[test]
    fn variance_bounds_arithmetic() {
        assert_eq!(total_variance_bounds(1.0, 100).unwrap(), (0.0, 0.01));
        let (lo, hi) = total_variance_bounds(10.0, 10_000).unwrap();
        assert!((lo - 0.0099).abs() < 1e-15 && (hi - 0.01).abs() < 1e-15);
        assert!(total_variance_bounds(0.5, 10).is_err());
        assert!(total_variance_bounds(2.0, 0).is_err());
    }

    #[test]
    fn support_mismatch() {
        let est = DistributionEstimate::exact(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(metrics(&est, &[1.0, 0.0]), Err(Error::SupportMismatch { .. })));
    }
}
