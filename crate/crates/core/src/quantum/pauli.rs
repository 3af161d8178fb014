use alloc::string::String;
use core::fmt;

use super::linalg::{Matrix, C64};

/// Single-qubit Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_code(code: u8) -> Self {
        Self::ALL[(code & 3) as usize]
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    /// Symplectic (x, z) bits.
    fn symplectic(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_symplectic(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn matrix(self) -> Matrix {
        let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        match self {
            Pauli::I => Matrix::identity(2),
            Pauli::X => Matrix::from_rows(2, alloc::vec![o, l, l, o]),
            Pauli::Y => Matrix::from_rows(2, alloc::vec![o, -i, i, o]),
            Pauli::Z => Matrix::from_rows(2, alloc::vec![l, o, o, -l]),
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }

    /// Flips a measured bit?
    pub fn flips_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }
}

/// A Pauli string on `arity` gate qubits, stored as base-4 digits with the
/// first target in the most significant digit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    index: u16,
    arity: u8,
}

impl PauliString {
    pub const MAX_ARITY: usize = 4;

    pub fn identity(arity: usize) -> Self {
        Self::from_index(0, arity)
    }

    /// Panics if `index >= 4^arity` or `arity` exceeds [`Self::MAX_ARITY`].
    pub fn from_index(index: usize, arity: usize) -> Self {
        assert!((1..=Self::MAX_ARITY).contains(&arity), "unsupported Pauli arity {arity}");
        assert!(index < 1 << (2 * arity), "Pauli index out of range");
        Self { index: index as u16, arity: arity as u8 }
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let index = paulis.iter().fold(0usize, |acc, p| acc * 4 + p.code() as usize);
        Self::from_index(index, paulis.len())
    }

    /// All `4^arity` strings in index order.
    pub fn all(arity: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * arity)).map(move |i| Self::from_index(i, arity))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.index as usize
    }

    #[inline]
    pub fn arity(self) -> usize {
        self.arity as usize
    }

    /// Pauli acting on local qubit `k` (0 = first target).
    pub fn get(self, k: usize) -> Pauli {
        let shift = 2 * (self.arity() - 1 - k);
        Pauli::from_code(((self.index >> shift) & 3) as u8)
    }

    pub fn is_identity(self) -> bool {
        self.index == 0
    }

    pub fn weight(self) -> usize {
        (0..self.arity()).filter(|&k| self.get(k) != Pauli::I).count()
    }

    pub fn matrix(self) -> Matrix {
        (1..self.arity()).fold(self.get(0).matrix(), |acc, k| acc.kron(&self.get(k).matrix()))
    }

    pub fn commutes_with(self, other: PauliString) -> bool {
        assert_eq!(self.arity, other.arity);
        let anti = (0..self.arity()).filter(|&k| !self.get(k).commutes_with(other.get(k))).count();
        anti % 2 == 0
    }

    /// Product of two strings with the global phase dropped.
    pub fn compose(self, other: PauliString) -> PauliString {
        assert_eq!(self.arity, other.arity);
        let mut index = 0usize;
        for k in 0..self.arity() {
            let (x1, z1) = self.get(k).symplectic();
            let (x2, z2) = other.get(k).symplectic();
            index = index * 4 + Pauli::from_symplectic(x1 ^ x2, z1 ^ z2).code() as usize;
        }
        Self::from_index(index, self.arity())
    }

    pub fn label(self) -> String {
        (0..self.arity())
            .map(|k| match self.get(k) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            })
            .collect()
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({})", self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_matches_matrix_product_up_to_phase() {
        for a in PauliString::all(2) {
            for b in PauliString::all(2) {
                let prod = a.matrix().mul(&b.matrix());
                let c = a.compose(b).matrix();
                // prod = phase * c with |phase| = 1
                let phase = (0..4)
                    .flat_map(|r| (0..4).map(move |col| (r, col)))
                    .find(|&(r, col)| c[(r, col)].norm() > 0.5)
                    .map(|(r, col)| prod[(r, col)] / c[(r, col)])
                    .unwrap();
                assert!((phase.norm() - 1.0).abs() < 1e-12);
                assert!(prod.max_abs_diff(&c.scale(phase)) < 1e-12);
            }
        }
    }

    #[test]
    fn commutation_matches_matrices() {
        for a in PauliString::all(2) {
            for b in PauliString::all(2) {
                let ab = a.matrix().mul(&b.matrix());
                let ba = b.matrix().mul(&a.matrix());
                assert_eq!(a.commutes_with(b), ab.max_abs_diff(&ba) < 1e-12, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(PauliString::from_paulis(&[Pauli::X, Pauli::Z]).label(), "XZ");
        assert_eq!(PauliString::from_index(0, 2).weight(), 0);
    }
}
