use alloc::collections::BTreeMap;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::histogram::SignedHistogram;
use crate::{Bitstring, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateKind {
    /// `A (N_{z,+} − N_{z,−}) / N_cir`.
    Direct,
    /// `N_{z,em} / N_samp`.
    Sampling,
    /// Negatives zeroed, then renormalized.
    Clipped,
}

impl EstimateKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Sampling => "sampling",
            Self::Clipped => "clipped",
        }
    }
}

/// A standard error; `no_data` marks strings never observed, whose zero
/// error means "unknown" rather than "certain".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StdErr {
    pub value: f64,
    pub no_data: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateEntry {
    pub z: Bitstring,
    pub value: f64,
    pub stderr: f64,
    pub no_data: bool,
}

/// Per-string estimate of the error-mitigated distribution over observed strings.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionEstimate {
    kind: EstimateKind,
    n_bits: usize,
    entries: Vec<EstimateEntry>,
    normalization: f64,
    n_cir: u64,
}

impl DistributionEstimate {
    /// Builds an estimate from explicit entries (sorted on the way in).
    pub fn from_entries(
        kind: EstimateKind,
        n_bits: usize,
        mut entries: Vec<EstimateEntry>,
        normalization: f64,
        n_cir: u64,
    ) -> Result<Self> {
        if let Some(e) = entries.iter().find(|e| e.z.len() != n_bits) {
            return Err(Error::InvalidBitstring(e.z.to_string_digits()));
        }
        entries.sort_by_key(|e| e.z);
        entries.dedup_by_key(|e| e.z);
        Ok(Self { kind, n_bits, entries, normalization, n_cir })
    }

    /// Zero-error estimate equal to an exact distribution (dense, indexed by value).
    pub fn exact(n_bits: usize, probs: &[f64]) -> Result<Self> {
        if probs.len() != 1usize << n_bits {
            return Err(Error::SupportMismatch { estimate: n_bits, reference: probs.len() });
        }
        let entries = Bitstring::all(n_bits)
            .zip(probs)
            .filter(|(_, &p)| p != 0.0)
            .map(|(z, &p)| EstimateEntry { z, value: p, stderr: 0.0, no_data: false })
            .collect();
        Ok(Self { kind: EstimateKind::Direct, n_bits, entries, normalization: 1.0, n_cir: 0 })
    }

    pub fn kind(&self) -> EstimateKind {
        self.kind
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn n_cir(&self) -> u64 {
        self.n_cir
    }

    /// `ε = A / √N_cir` (infinite when no runs were recorded).
    pub fn epsilon(&self) -> f64 {
        self.normalization / (self.n_cir as f64).sqrt()
    }

    /// Observed strings in ascending order.
    pub fn entries(&self) -> &[EstimateEntry] {
        &self.entries
    }

    /// The entry for `z`; unobserved strings have value 0 and `no_data` set.
    pub fn get(&self, z: Bitstring) -> EstimateEntry {
        match self.entries.binary_search_by_key(&z, |e| e.z) {
            Ok(i) => self.entries[i],
            Err(_) => EstimateEntry { z, value: 0.0, stderr: 0.0, no_data: true },
        }
    }

    pub fn value(&self, z: Bitstring) -> f64 {
        self.get(z).value
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.value).sum()
    }

    /// Values over all `2^n_bits` strings, indexed by string value.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = alloc::vec![0.0; 1usize << self.n_bits];
        for e in &self.entries {
            v[e.z.value() as usize] = e.value;
        }
        v
    }
}

fn require_runs(hist: &SignedHistogram) -> Result<()> {
    if hist.n_cir() == 0 {
        return Err(Error::NoCircuitRuns);
    }
    Ok(())
}

fn check_normalization(a: f64) -> Result<()> {
    if !(a >= 1.0) || !a.is_finite() {
        return Err(Error::InvalidNormalization(a));
    }
    Ok(())
}

/// `σ̂(z) = ε √(N_z / N_cir)` with `ε = A / √N_cir`, for every observed string.
pub fn stderr_per_string(hist: &SignedHistogram, a: f64) -> Result<BTreeMap<Bitstring, StdErr>> {
    require_runs(hist)?;
    let n = hist.n_cir() as f64;
    let eps = a / n.sqrt();
    Ok(hist
        .iter()
        .map(|(z, c)| (z, StdErr { value: eps * (c.total() as f64 / n).sqrt(), no_data: c.total() == 0 }))
        .collect())
}

/// `p̂_em(z) = A (N_{z,+} − N_{z,−}) / N_cir`.
pub fn direct_estimate(hist: &SignedHistogram, a: f64) -> Result<DistributionEstimate> {
    require_runs(hist)?;
    check_normalization(a)?;
    let n = hist.n_cir() as f64;
    let errs = stderr_per_string(hist, a)?;
    let entries = hist
        .iter()
        .map(|(z, c)| {
            let e = errs[&z];
            EstimateEntry { z, value: a * c.signed() as f64 / n, stderr: e.value, no_data: e.no_data }
        })
        .collect();
    Ok(DistributionEstimate {
        kind: EstimateKind::Direct,
        n_bits: hist.n_bits(),
        entries,
        normalization: a,
        n_cir: hist.n_cir(),
    })
}

/// `p̂′_em(z) = N_{z,em} / N_samp`, with `σ̂ ≈ √N_z / N_samp`. Sums to one.
/// The normalization recorded in the estimate is the plan's `a`.
pub fn sampling_estimate(hist: &SignedHistogram, a: f64) -> Result<DistributionEstimate> {
    require_runs(hist)?;
    let n_samp = hist.n_samp();
    if n_samp <= 0 {
        return Err(Error::InsufficientSamples(n_samp));
    }
    let ns = n_samp as f64;
    let entries = hist
        .iter()
        .map(|(z, c)| EstimateEntry {
            z,
            value: c.signed() as f64 / ns,
            stderr: (c.total() as f64).sqrt() / ns,
            no_data: c.total() == 0,
        })
        .collect();
    Ok(DistributionEstimate {
        kind: EstimateKind::Sampling,
        n_bits: hist.n_bits(),
        entries,
        normalization: a,
        n_cir: hist.n_cir(),
    })
}

/// Sets negative entries to zero and divides by the remaining positive mass.
/// Standard errors are scaled by the same factor.
pub fn clip_renormalize(est: &DistributionEstimate) -> Result<DistributionEstimate> {
    let mass: f64 = est.entries.iter().map(|e| e.value.max(0.0)).sum();
    if !(mass > 0.0) {
        return Err(Error::NothingToClip);
    }
    let entries = est
        .entries
        .iter()
        .map(|e| EstimateEntry { value: e.value.max(0.0) / mass, stderr: e.stderr / mass, ..*e })
        .collect();
    Ok(DistributionEstimate { kind: EstimateKind::Clipped, entries, ..est.clone() })
}
