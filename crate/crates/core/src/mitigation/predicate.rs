use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::Bitstring;

/// Post-selection constraint on measured bitstrings. Rejected shots get sign 0.
#[derive(Clone)]
pub enum PostSelectionPredicate {
    /// Accept only the listed strings.
    StringSet(BTreeSet<Bitstring>),
    /// Accept when the XOR of the bits at `positions` (0 = leftmost) equals `odd`.
    Parity {
        positions: Vec<usize>,
        odd: bool,
    },
    Custom(Arc<dyn Fn(Bitstring) -> bool + Send + Sync>),
}

impl PostSelectionPredicate {
    pub fn custom(f: impl Fn(Bitstring) -> bool + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    pub fn accepts(&self, z: Bitstring) -> bool {
        match self {
            Self::StringSet(set) => set.contains(&z),
            Self::Parity { positions, odd } => (positions.iter().filter(|&&k| z.bit(k)).count() % 2 == 1) == *odd,
            Self::Custom(f) => f(z),
        }
    }
}

impl fmt::Debug for PostSelectionPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::StringSet(set) => f.debug_tuple("StringSet").field(set).finish(),
            Self::Parity { positions, odd } => {
                f.debug_struct("Parity").field("positions", positions).field("odd", odd).finish()
            }
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}
