use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::estimator::SignedHistogram;
use crate::quantum::Observable;
use crate::{Bitstring, Error, Result};

/// Conditional observable `⟨Π_{E₀} ⊗ O⟩ / ⟨Π_{E₀} ⊗ I⟩` on a measured
/// register made of the counting bits followed by the system bits.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateQuery {
    pub energy: Bitstring,
    /// Acts on the system register; must be diagonal in the computational basis.
    pub observable: Observable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Signed estimate of the ground-energy weight `⟨Π_{E₀} ⊗ I⟩`.
    pub denominator: f64,
}

impl GroundStateQuery {
    fn diagonal(&self, total_bits: usize) -> Result<Vec<f64>> {
        let values = self.observable.diagonal_values().ok_or(Error::NonDiagonalObservable)?;
        let system_bits = self.observable.n_qubits();
        if self.energy.len() + system_bits != total_bits {
            return Err(Error::DimensionMismatch { expected: total_bits, got: self.energy.len() + system_bits });
        }
        Ok(values)
    }
}

/// Ratio estimate from signed samples with a delta-method standard error.
pub fn ground_state_observable(hist: &SignedHistogram, a: f64, query: &GroundStateQuery) -> Result<ObservableEstimate> {
    let values = query.diagonal(hist.n_bits())?;
    if hist.n_cir() == 0 {
        return Err(Error::NoCircuitRuns);
    }
    let n = hist.n_cir() as f64;
    let shift = values.len().trailing_zeros();
    let (mut x, mut y, mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (z, c) in hist.iter() {
        if z.value() >> shift != query.energy.value() {
            continue;
        }
        let o = values[(z.value() & ((1 << shift) - 1)) as usize];
        let signed = c.signed() as f64;
        let total = c.total() as f64;
        x += o * signed;
        y += signed;
        xx += o * o * total;
        xy += o * total;
        yy += total;
    }
    // Per-run means of X = A s O 1[E₀] and Y = A s 1[E₀]; s² = 1 on accepted runs.
    let (mx, my) = (a * x / n, a * y / n);
    if !(my > 0.0) {
        return Err(Error::NonPositiveDenominator(my));
    }
    let a2 = a * a;
    let var_x = a2 * xx / n - mx * mx;
    let var_y = a2 * yy / n - my * my;
    let cov = a2 * xy / n - mx * my;
    let ratio = mx / my;
    let var = (var_x - 2.0 * ratio * cov + ratio * ratio * var_y) / (n * my * my);
    Ok(ObservableEstimate { value: ratio, stderr: var.max(0.0).sqrt(), denominator: my })
}

/// The same ratio evaluated on an exact distribution over counting + system bits.
pub fn exact_conditional_expectation(dist: &[f64], query: &GroundStateQuery) -> Result<f64> {
    if !dist.len().is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: dist.len().next_power_of_two(), got: dist.len() });
    }
    let values = query.diagonal(dist.len().trailing_zeros() as usize)?;
    let base = (query.energy.value() as usize) << values.len().trailing_zeros();
    let block = &dist[base..base + values.len()];
    let den: f64 = block.iter().sum();
    if !(den > 0.0) {
        return Err(Error::NonPositiveDenominator(den));
    }
    Ok(block.iter().zip(&values).map(|(p, o)| p * o).sum::<f64>() / den)
}
