use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::linalg::{Matrix, C64};
use super::pauli::PauliString;
use crate::{Error, Result, EXACT_TOL};

/// What a channel was built as. Pauli-diagonal kinds expose their Pauli
/// probabilities through [`KrausChannel::pauli_probabilities`].
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelKind {
    Depolarizing { p: f64 },
    MeasurementBitflip { q: f64 },
    PauliMixture,
    General,
}

/// A completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    arity: usize,
    kraus: Vec<Matrix>,
    kind: ChannelKind,
    pauli_probs: Option<Vec<f64>>,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidProbability(p));
    }
    Ok(())
}

impl KrausChannel {
    pub fn identity(arity: usize) -> Self {
        let mut probs = alloc::vec![0.0; 1 << (2 * arity)];
        probs[0] = 1.0;
        Self::from_pauli_probs(arity, probs, ChannelKind::PauliMixture)
    }

    /// `(1 - p) ρ + p/(4^k - 1) Σ_{P≠I} P ρ P` on `arity` qubits.
    pub fn depolarizing(arity: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        if arity == 0 || arity > 2 {
            return Err(Error::UnsupportedQubitCount(arity));
        }
        let n_terms = 1usize << (2 * arity);
        let mut probs = alloc::vec![p / (n_terms - 1) as f64; n_terms];
        probs[0] = 1.0 - p;
        Ok(Self::from_pauli_probs(arity, probs, ChannelKind::Depolarizing { p }))
    }

    /// Classical readout flip modelled as an X error with probability `q`
    /// just before measurement.
    pub fn measurement_bitflip(q: f64) -> Result<Self> {
        check_probability(q)?;
        Ok(Self::from_pauli_probs(1, alloc::vec![1.0 - q, q, 0.0, 0.0], ChannelKind::MeasurementBitflip { q }))
    }

    /// `Σ_P probs[P] · P ρ P` with `probs` indexed like [`PauliString::index`].
    pub fn pauli_mixture(arity: usize, probs: Vec<f64>) -> Result<Self> {
        if arity == 0 || arity > 2 {
            return Err(Error::UnsupportedQubitCount(arity));
        }
        if probs.len() != 1 << (2 * arity) {
            return Err(Error::DimensionMismatch { expected: 1 << (2 * arity), got: probs.len() });
        }
        for &p in &probs {
            check_probability(p)?;
        }
        if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::NotTracePreserving);
        }
        Ok(Self::from_pauli_probs(arity, probs, ChannelKind::PauliMixture))
    }

    pub fn general(arity: usize, kraus: Vec<Matrix>) -> Result<Self> {
        if arity == 0 || arity > 2 {
            return Err(Error::UnsupportedQubitCount(arity));
        }
        let dim = 1 << arity;
        if kraus.is_empty() {
            return Err(Error::NotTracePreserving);
        }
        if let Some(k) = kraus.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: k.dim() });
        }
        let channel = Self { arity, kraus, kind: ChannelKind::General, pauli_probs: None };
        if !channel.is_trace_preserving(EXACT_TOL) {
            return Err(Error::NotTracePreserving);
        }
        Ok(channel)
    }

    fn from_pauli_probs(arity: usize, probs: Vec<f64>, kind: ChannelKind) -> Self {
        let kraus = PauliString::all(arity)
            .zip(&probs)
            .filter(|(_, &p)| p > 0.0)
            .map(|(ps, &p)| ps.matrix().scale(C64::new(p.sqrt(), 0.0)))
            .collect();
        Self { arity, kraus, kind, pauli_probs: Some(probs) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kraus_operators(&self) -> &[Matrix] {
        &self.kraus
    }

    pub fn kind(&self) -> &ChannelKind {
        &self.kind
    }

    /// Pauli error probabilities for Pauli-diagonal channels.
    pub fn pauli_probabilities(&self) -> Option<&[f64]> {
        self.pauli_probs.as_deref()
    }

    /// Probability of a non-identity fault, when defined.
    pub fn error_probability(&self) -> Option<f64> {
        self.pauli_probs.as_ref().map(|p| 1.0 - p[0])
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let dim = 1 << self.arity;
        let mut sum = Matrix::zeros(dim);
        for k in &self.kraus {
            sum = sum.add(&k.adjoint().mul(k));
        }
        sum.max_abs_diff(&Matrix::identity(dim)) <= tol
    }

    /// `Σ K ⊗ conj(K)`, acting on `vec(ρ)` with row qubits before column qubits.
    pub fn superoperator(&self) -> Matrix {
        let dim = 1 << self.arity;
        let mut s = Matrix::zeros(dim * dim);
        for k in &self.kraus {
            s = s.add(&k.kron(&k.conj()));
        }
        s
    }

    /// `Σ K m K†` for an arbitrary operator `m` on the channel's qubits.
    pub fn apply_to_operator(&self, m: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(m.dim());
        for k in &self.kraus {
            out = out.add(&k.mul(m).mul(&k.adjoint()));
        }
        out
    }
}
