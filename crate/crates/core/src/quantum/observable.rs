use alloc::vec::Vec;

use super::linalg::{Matrix, C64};
use super::state::DensityMatrix;
use crate::{Bitstring, Error, Result, EXACT_TOL};

/// A Hermitian observable on a register of qubits.
#[derive(Clone, Debug, PartialEq)]
pub enum Observable {
    /// `|z><z|`.
    Projector(Bitstring),
    /// Diagonal in the computational basis; entry `i` is the eigenvalue of `|i>`.
    Diagonal(Vec<f64>),
    Matrix(Matrix),
}

impl Observable {
    pub fn diagonal(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 || !values.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: values.len().next_power_of_two().max(2),
                got: values.len(),
            });
        }
        Ok(Self::Diagonal(values))
    }

    pub fn matrix(m: Matrix) -> Result<Self> {
        if m.dim() < 2 || !m.dim().is_power_of_two() {
            return Err(Error::DimensionMismatch { expected: m.dim().next_power_of_two().max(2), got: m.dim() });
        }
        if !m.is_hermitian(EXACT_TOL) {
            return Err(Error::NonHermitianObservable);
        }
        Ok(Self::Matrix(m))
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::Diagonal(alloc::vec![1.0; 1 << n_qubits])
    }

    /// Pauli Z on `qubit` of an `n_qubits` register.
    pub fn z_on(n_qubits: usize, qubit: usize) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange { index: qubit, n_qubits });
        }
        let values =
            (0..1usize << n_qubits).map(|i| if (i >> (n_qubits - 1 - qubit)) & 1 == 1 { -1.0 } else { 1.0 }).collect();
        Ok(Self::Diagonal(values))
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Self::Projector(z) => z.len(),
            Self::Diagonal(v) => v.len().trailing_zeros() as usize,
            Self::Matrix(m) => m.dim().trailing_zeros() as usize,
        }
    }

    /// Eigenvalues in the computational basis if the observable is diagonal there.
    pub fn diagonal_values(&self) -> Option<Vec<f64>> {
        match self {
            Self::Projector(z) => {
                let mut v = alloc::vec![0.0; 1 << z.len()];
                v[z.value() as usize] = 1.0;
                Some(v)
            }
            Self::Diagonal(v) => Some(v.clone()),
            Self::Matrix(m) if m.is_diagonal(EXACT_TOL) => Some((0..m.dim()).map(|i| m[(i, i)].re).collect()),
            Self::Matrix(_) => None,
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        match self {
            Self::Matrix(m) => m.clone(),
            _ => {
                let v = self.diagonal_values().expect("diagonal variants");
                Matrix::diagonal(&v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
            }
        }
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        rho.expectation(&self.to_matrix())
    }
}
