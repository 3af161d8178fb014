use alloc::vec::Vec;

use crate::quantum::{KrausChannel, Matrix, PauliString, PauliTransferMatrix, C64};
use crate::{Error, Result};

/// Fidelities closer to zero than this are treated as a singular channel.
const SINGULAR_FIDELITY: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QpdTerm {
    pub coefficient: f64,
    pub correction: PauliString,
}

/// Quasi-probability mixture `Σ_i α_i Q_i · Q_i` of Pauli corrections.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiProbabilityDecomposition {
    arity: usize,
    terms: Vec<QpdTerm>,
    normalization: f64,
}

fn chi(p: PauliString, q: PauliString) -> f64 {
    if p.commutes_with(q) {
        1.0
    } else {
        -1.0
    }
}

/// Inverts a Pauli-mixture channel as a quasi-mixture of Pauli corrections.
///
/// With Pauli fidelities `λ_Q = Σ_P c_P χ(P, Q)` the inverse has
/// `α_P = 4^-k Σ_Q χ(P, Q) / λ_Q`, where `χ = ±1` for commuting or
/// anticommuting pairs.
pub fn invert_channel(channel: &KrausChannel) -> Result<QuasiProbabilityDecomposition> {
    let probs = channel.pauli_probabilities().ok_or(Error::NonPauliChannel)?;
    let k = channel.arity();
    let paulis: Vec<PauliString> = PauliString::all(k).collect();
    let fidelities: Vec<f64> =
        paulis.iter().map(|&q| paulis.iter().zip(probs).map(|(&p, &c)| c * chi(p, q)).sum()).collect();
    if let Some(&bad) = fidelities.iter().find(|l| l.abs() < SINGULAR_FIDELITY) {
        return Err(Error::NonInvertibleChannel(bad));
    }
    let scale = 1.0 / paulis.len() as f64;
    let terms: Vec<QpdTerm> = paulis
        .iter()
        .map(|&p| {
            let alpha = scale * paulis.iter().zip(&fidelities).map(|(&q, l)| chi(p, q) / l).sum::<f64>();
            QpdTerm { coefficient: alpha, correction: p }
        })
        .filter(|t| t.coefficient.abs() > 1e-15)
        .collect();
    Ok(QuasiProbabilityDecomposition::from_terms(k, terms))
}

impl QuasiProbabilityDecomposition {
    fn from_terms(arity: usize, terms: Vec<QpdTerm>) -> Self {
        let normalization = terms.iter().map(|t| t.coefficient.abs()).sum();
        Self { arity, terms, normalization }
    }

    pub fn identity(arity: usize) -> Self {
        Self::from_terms(arity, alloc::vec![QpdTerm { coefficient: 1.0, correction: PauliString::identity(arity) }])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[QpdTerm] {
        &self.terms
    }

    /// `A_gate = Σ |α_i|`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient).sum()
    }

    /// `(p_+, p_-)`: total `|α_i| / A_gate` of positive and negative terms.
    pub fn sign_probabilities(&self) -> (f64, f64) {
        let minus: f64 = self.terms.iter().filter(|t| t.coefficient < 0.0).map(|t| t.coefficient.abs()).sum();
        let minus = minus / self.normalization;
        (1.0 - minus, minus)
    }

    /// Superoperator `Σ_i w_i Q_i ⊗ conj(Q_i)`, with `w_i = α_i` when
    /// `signed` and `|α_i| / A_gate` otherwise.
    pub fn superoperator(&self, signed: bool) -> Matrix {
        let dim = 1usize << (2 * self.arity);
        let mut s = Matrix::zeros(dim);
        for t in &self.terms {
            let w = if signed { t.coefficient } else { t.coefficient.abs() / self.normalization };
            let q = t.correction.matrix();
            s.add_assign_scaled(&q.kron(&q.conj()), C64::new(w, 0.0));
        }
        s
    }

    pub fn ptm(&self) -> PauliTransferMatrix {
        PauliTransferMatrix::from_superoperator(self.arity, &self.superoperator(true))
    }
}
