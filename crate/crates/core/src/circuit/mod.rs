//! Circuits, noise annotation, QPE builders and exact simulation.

mod noise;
mod qpe;
mod simulate;

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quantum::{check_targets, Matrix, QuantumState, StateVector, UnitaryGate, C64};
use crate::{Error, Result};

pub use noise::{ChannelSpec, NoiseModel, NoiseRule, NoiseSite, SiteLocation, SiteSelector};
pub use qpe::{demo_spectrum, inverse_qft, qft, qpe_circuit, EigenphaseSpec, QpeCircuit, MAX_COUNTING_QUBITS};
pub(crate) use simulate::run_density;
pub use simulate::{sample_shot, simulate, simulate_ideal, ExactDistributions, ShotSampler};

/// A gate placed on specific qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Operation {
    pub gate: UnitaryGate,
    pub targets: Vec<usize>,
}

/// An ordered gate list with a measured register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Operation>,
    measured: Vec<usize>,
    auxiliary: Option<Vec<usize>>,
}

impl Circuit {
    /// Empty circuit measuring every qubit.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::EmptyMeasuredRegister);
        }
        Ok(Self { n_qubits, ops: Vec::new(), measured: (0..n_qubits).collect(), auxiliary: None })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn auxiliary(&self) -> Option<&[usize]> {
        self.auxiliary.as_deref()
    }

    pub fn push(&mut self, gate: UnitaryGate, targets: &[usize]) -> Result<&mut Self> {
        check_targets(self.n_qubits, targets, gate.arity())?;
        self.ops.push(Operation { gate, targets: targets.to_vec() });
        Ok(self)
    }

    pub fn set_measured(&mut self, measured: Vec<usize>) -> Result<&mut Self> {
        if measured.is_empty() {
            return Err(Error::EmptyMeasuredRegister);
        }
        check_targets(self.n_qubits, &measured, measured.len())?;
        self.measured = measured;
        Ok(self)
    }

    pub fn set_auxiliary(&mut self, auxiliary: Option<Vec<usize>>) -> Result<&mut Self> {
        if let Some(a) = &auxiliary {
            check_targets(self.n_qubits, a, a.len())?;
        }
        self.auxiliary = auxiliary;
        Ok(self)
    }

    /// Appends `other`'s gates with its qubit `q` relabelled to `mapping[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, mapping: &[usize]) -> Result<&mut Self> {
        if mapping.len() != other.n_qubits {
            return Err(Error::ArityMismatch { expected: other.n_qubits, got: mapping.len() });
        }
        check_targets(self.n_qubits, mapping, mapping.len())?;
        for op in &other.ops {
            let targets: Vec<usize> = op.targets.iter().map(|&t| mapping[t]).collect();
            self.push(op.gate.clone(), &targets)?;
        }
        Ok(self)
    }

    /// The inverse circuit (reversed order, inverted gates).
    pub fn inverse(&self) -> Self {
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| Operation { gate: op.gate.inverse(), targets: op.targets.clone() })
            .collect();
        Self { ops, ..self.clone() }
    }

    /// Indices of all two-qubit operations.
    pub fn two_qubit_op_indices(&self) -> Vec<usize> {
        self.ops.iter().enumerate().filter(|(_, op)| op.targets.len() == 2).map(|(i, _)| i).collect()
    }

    pub(crate) fn apply_range(&self, state: &mut StateVector, range: core::ops::Range<usize>) {
        for op in &self.ops[range] {
            state.apply_matrix(op.gate.matrix(), &op.targets);
        }
    }

    /// Full `2^n × 2^n` unitary, column by column.
    pub fn unitary(&self) -> Result<Matrix> {
        let dim = 1usize << self.n_qubits;
        let mut m = Matrix::zeros(dim);
        for col in 0..dim {
            let mut s = StateVector::basis(self.n_qubits, col)?;
            for op in &self.ops {
                s.apply_unitary(&op.gate, &op.targets)?;
            }
            for (row, a) in s.amplitudes().iter().enumerate() {
                m[(row, col)] = *a;
            }
        }
        Ok(m)
    }

    /// Final state vector of the gate sequence from `|0…0>`.
    pub fn final_state(&self) -> Result<StateVector> {
        let mut s = StateVector::zero(self.n_qubits)?;
        self.apply_range(&mut s, 0..self.ops.len());
        Ok(s)
    }
}

/// Unitary of the `n`-qubit discrete Fourier transform `|x> -> Σ_k e^{2πi xk/2^n}|k>/√2^n`.
pub fn dft_matrix(n: usize) -> Matrix {
    let dim = 1usize << n;
    let norm = 1.0 / (dim as f64).sqrt();
    Matrix::from_fn(dim, |k, x| {
        let angle = 2.0 * core::f64::consts::PI * ((x * k) % dim) as f64 / dim as f64;
        C64::from_polar(norm, angle)
    })
}
