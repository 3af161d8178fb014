use alloc::vec;
use alloc::vec::Vec;

use super::channel::KrausChannel;
use super::linalg::{Matrix, C64};
use super::pauli::PauliString;

/// Real `4^k × 4^k` matrix `R_ij = Tr(P_i Λ(P_j)) / 2^k` of a linear map `Λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTransferMatrix {
    arity: usize,
    entries: Vec<f64>,
}

impl PauliTransferMatrix {
    pub fn identity(arity: usize) -> Self {
        let d = 1 << (2 * arity);
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1.0;
        }
        Self { arity, entries }
    }

    /// PTM of any linear map on `arity` qubits given as a closure on operators.
    pub fn from_linear_map(arity: usize, map: impl Fn(&Matrix) -> Matrix) -> Self {
        let d = 1 << (2 * arity);
        let norm = (1usize << arity) as f64;
        let paulis: Vec<Matrix> = PauliString::all(arity).map(|p| p.matrix()).collect();
        let mut entries = vec![0.0; d * d];
        for (j, pj) in paulis.iter().enumerate() {
            let image = map(pj);
            for (i, pi) in paulis.iter().enumerate() {
                entries[i * d + j] = pi.mul(&image).trace().re / norm;
            }
        }
        Self { arity, entries }
    }

    pub fn from_channel(channel: &KrausChannel) -> Self {
        Self::from_linear_map(channel.arity(), |m| channel.apply_to_operator(m))
    }

    /// PTM of a superoperator acting on `vec(ρ)` (row bits first).
    pub fn from_superoperator(arity: usize, s: &Matrix) -> Self {
        Self::from_linear_map(arity, |m| {
            let v = s.apply(m.data());
            Matrix::from_rows(m.dim(), v)
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << (2 * self.arity)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim() + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let d = self.dim();
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.get(k, j);
                }
            }
        }
        Self { arity: self.arity, entries }
    }

    /// Largest entrywise deviation from the identity matrix.
    pub fn distance_from_identity(&self) -> f64 {
        let d = self.dim();
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (self.get(i, j) - if i == j { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.distance_from_identity() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.get(i, j).abs() <= tol))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn apply(&self, coeffs: &[f64]) -> Vec<f64> {
        let d = self.dim();
        assert_eq!(coeffs.len(), d);
        (0..d).map(|i| (0..d).map(|j| self.get(i, j) * coeffs[j]).sum()).collect()
    }

    /// Pauli coefficients `c_j = Tr(P_j ρ)` of an operator.
    pub fn pauli_vector(arity: usize, rho: &Matrix) -> Vec<f64> {
        PauliString::all(arity).map(|p| p.matrix().mul(rho).trace().re).collect()
    }

    /// Inverse of [`Self::pauli_vector`] for Hermitian operators.
    pub fn from_pauli_vector(arity: usize, coeffs: &[f64]) -> Matrix {
        let dim = 1 << arity;
        let mut out = Matrix::zeros(dim);
        for (p, &c) in PauliString::all(arity).zip(coeffs) {
            out.add_assign_scaled(&p.matrix(), C64::new(c / dim as f64, 0.0));
        }
        out
    }
}
