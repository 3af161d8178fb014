use alloc::collections::BTreeMap;

use crate::mitigation::{ResponseSample, Sign};
use crate::{Bitstring, Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub plus: u64,
    pub minus: u64,
}

impl Counts {
    /// `N_z = N_{z,+} + N_{z,−}`.
    pub fn total(self) -> u64 {
        self.plus + self.minus
    }

    /// `N_{z,em} = N_{z,+} − N_{z,−}`.
    pub fn signed(self) -> i64 {
        self.plus as i64 - self.minus as i64
    }
}

/// Sparse per-string counts of signed samples. Sign-0 samples only count
/// towards `N_cir` and `N_zero`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedHistogram {
    n_bits: usize,
    counts: BTreeMap<Bitstring, Counts>,
    n_cir: u64,
    n_zero: u64,
}

impl SignedHistogram {
    pub fn new(n_bits: usize) -> Self {
        Self { n_bits, counts: BTreeMap::new(), n_cir: 0, n_zero: 0 }
    }

    /// Builds a histogram from stored counts, e.g. when reading a file.
    pub fn from_counts(
        n_bits: usize,
        counts: impl IntoIterator<Item = (Bitstring, Counts)>,
        n_zero: u64,
    ) -> Result<Self> {
        let mut h = Self::new(n_bits);
        h.n_zero = n_zero;
        h.n_cir = n_zero;
        for (z, c) in counts {
            if z.len() != n_bits {
                return Err(Error::InvalidBitstring(z.to_string_digits()));
            }
            if c.total() == 0 {
                continue;
            }
            let slot = h.counts.entry(z).or_default();
            slot.plus += c.plus;
            slot.minus += c.minus;
            h.n_cir += c.total();
        }
        Ok(h)
    }

    pub fn accumulate(n_bits: usize, samples: impl IntoIterator<Item = ResponseSample>) -> Self {
        let mut h = Self::new(n_bits);
        for s in samples {
            h.record(s);
        }
        h
    }

    /// Adds one sample.
    ///
    /// # Panics
    /// If `sample.z` does not have `n_bits` bits.
    pub fn record(&mut self, sample: ResponseSample) {
        assert_eq!(sample.z.len(), self.n_bits, "sample length does not match histogram");
        self.n_cir += 1;
        match sample.sign {
            Sign::Zero => self.n_zero += 1,
            Sign::Plus => self.counts.entry(sample.z).or_default().plus += 1,
            Sign::Minus => self.counts.entry(sample.z).or_default().minus += 1,
        }
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.n_bits != self.n_bits {
            return Err(Error::DimensionMismatch { expected: self.n_bits, got: other.n_bits });
        }
        for (z, c) in &other.counts {
            let slot = self.counts.entry(*z).or_default();
            slot.plus += c.plus;
            slot.minus += c.minus;
        }
        self.n_cir += other.n_cir;
        self.n_zero += other.n_zero;
        Ok(())
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    /// All draws, including rejected ones.
    pub fn n_cir(&self) -> u64 {
        self.n_cir
    }

    pub fn n_zero(&self) -> u64 {
        self.n_zero
    }

    pub fn counts(&self, z: Bitstring) -> Counts {
        self.counts.get(&z).copied().unwrap_or_default()
    }

    /// Observed strings in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (Bitstring, Counts)> + '_ {
        self.counts.iter().map(|(z, c)| (*z, *c))
    }

    pub fn n_z(&self, z: Bitstring) -> u64 {
        self.counts(z).total()
    }

    pub fn n_em(&self, z: Bitstring) -> i64 {
        self.counts(z).signed()
    }

    /// `N_samp = Σ_z N_{z,em}`.
    pub fn n_samp(&self) -> i64 {
        self.counts.values().map(|c| c.signed()).sum()
    }

    /// Summed counts over all observed strings starting with `prefix`
    /// (at most `n_bits` long).
    pub fn prefix_counts(&self, prefix: Bitstring) -> Counts {
        let shift = self.n_bits - prefix.len();
        let lo = Bitstring::new(prefix.value() << shift, self.n_bits).expect("prefix fits");
        let hi = Bitstring::new(((prefix.value() + 1) << shift) - 1, self.n_bits).expect("prefix fits");
        self.counts
            .range(lo..=hi)
            .fold(Counts::default(), |acc, (_, c)| Counts { plus: acc.plus + c.plus, minus: acc.minus + c.minus })
    }
}
