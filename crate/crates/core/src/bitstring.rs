//! Fixed-length measurement outcomes.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Longest supported measured register.
pub const MAX_BITS: usize = 32;

/// A measured bitstring, most significant digit first.
///
/// Ordering compares the unsigned value, so for strings of equal length
/// `a < b` matches "a is the smaller output string".
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    value: u64,
    len: u8,
}

impl Bitstring {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_BITS {
            return Err(Error::InvalidBitstring(alloc::format!("length {len}")));
        }
        if value >> len != 0 {
            return Err(Error::InvalidBitstring(alloc::format!("value {value} does not fit in {len} bits")));
        }
        Ok(Self { value, len: len as u8 })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Digit `k` counted from the most significant end (0-based).
    pub fn bit(self, k: usize) -> bool {
        debug_assert!(k < self.len());
        (self.value >> (self.len() - 1 - k)) & 1 == 1
    }

    /// The first `k` digits as a string of length `k`.
    pub fn prefix(self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::InvalidBitstring(alloc::format!("prefix length {k}")));
        }
        Self::new(self.value >> (self.len() - k), k)
    }

    /// Splits into the first `k` digits and the remainder.
    pub fn split_at(self, k: usize) -> Result<(Self, Self)> {
        let head = self.prefix(k)?;
        let tail_len = self.len() - k;
        let tail = Self::new(self.value & ((1u64 << tail_len) - 1), tail_len)?;
        Ok((head, tail))
    }

    /// Appends `other` after the last digit of `self`.
    pub fn concat(self, other: Self) -> Result<Self> {
        Self::new((self.value << other.len()) | other.value, self.len() + other.len())
    }

    /// Appends a single digit.
    pub fn push(self, digit: bool) -> Result<Self> {
        Self::new((self.value << 1) | digit as u64, self.len() + 1)
    }

    /// Number of set digits.
    pub fn count_ones(self) -> u32 {
        self.value.count_ones()
    }

    /// Iterates over every string of the given length in ascending order.
    pub fn all(len: usize) -> impl Iterator<Item = Bitstring> {
        assert!(len > 0 && len <= MAX_BITS);
        (0..(1u64 << len)).map(move |value| Bitstring { value, len: len as u8 })
    }

    pub fn to_string_digits(self) -> String {
        let mut s = String::with_capacity(self.len());
        for k in 0..self.len() {
            s.push(if self.bit(k) { '1' } else { '0' });
        }
        s
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_digits())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut value = 0u64;
        let mut len = 0usize;
        for c in s.chars() {
            let digit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::InvalidBitstring(s.into())),
            };
            len += 1;
            if len > MAX_BITS {
                return Err(Error::InvalidBitstring(s.into()));
            }
            value = (value << 1) | digit;
        }
        Self::new(value, len).map_err(|_| Error::InvalidBitstring(s.into()))
    }
}
