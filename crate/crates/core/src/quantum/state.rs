use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::channel::KrausChannel;
use super::gate::UnitaryGate;
use super::linalg::{Matrix, C64};
use crate::{Error, Result, EXACT_TOL, POSITIVITY_TOL};

/// Largest register simulated as a state vector.
pub const MAX_STATE_QUBITS: usize = 16;
/// Largest register simulated as a density matrix.
pub const MAX_DENSITY_QUBITS: usize = 10;

/// Validates that `targets` are distinct, in range and `arity` long.
pub fn check_targets(n_qubits: usize, targets: &[usize], arity: usize) -> Result<()> {
    if targets.len() != arity {
        return Err(Error::ArityMismatch { expected: arity, got: targets.len() });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::QubitOutOfRange { index: t, n_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateQubit(t));
        }
    }
    Ok(())
}

/// Applies `op` (dimension `2^k`) to qubits `targets` of an `n`-qubit
/// amplitude vector. Qubit 0 is the most significant index bit and
/// `targets[0]` the most significant local bit.
pub(crate) fn apply_local(amps: &mut [C64], n: usize, op: &Matrix, targets: &[usize]) {
    let k = targets.len();
    let sub = 1usize << k;
    debug_assert_eq!(op.dim(), sub);
    debug_assert_eq!(amps.len(), 1 << n);
    let masks: Vec<usize> = targets.iter().map(|&t| 1usize << (n - 1 - t)).collect();
    let offsets: Vec<usize> =
        (0..sub).map(|l| (0..k).filter(|&i| (l >> (k - 1 - i)) & 1 == 1).map(|i| masks[i]).sum()).collect();
    let target_mask: usize = masks.iter().sum();
    let m = op.data();
    let mut buf = vec![C64::zero(); sub];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (l, b) in buf.iter_mut().enumerate() {
            *b = amps[base + offsets[l]];
        }
        for r in 0..sub {
            let row = &m[r * sub..(r + 1) * sub];
            let mut acc = C64::zero();
            for (a, b) in row.iter().zip(&buf) {
                acc += a * b;
            }
            amps[base + offsets[r]] = acc;
        }
    }
}

/// Marginal of a full-register distribution over the `measured` qubits,
/// with `measured[0]` as the most significant output bit.
pub(crate) fn marginal_distribution(n: usize, measured: &[usize], prob: impl Fn(usize) -> f64) -> Vec<f64> {
    let m = measured.len();
    let mut out = vec![0.0; 1 << m];
    for i in 0..(1usize << n) {
        let mut z = 0usize;
        for &q in measured {
            z = (z << 1) | ((i >> (n - 1 - q)) & 1);
        }
        out[z] += prob(i);
    }
    out
}

fn clamp_distribution(mut probs: Vec<f64>) -> Vec<f64> {
    for p in probs.iter_mut() {
        if *p < 0.0 && *p >= -1e-12 {
            *p = 0.0;
        }
    }
    probs
}

/// Operations shared by pure and mixed states.
pub trait QuantumState {
    fn n_qubits(&self) -> usize;
    fn apply_unitary(&mut self, gate: &UnitaryGate, targets: &[usize]) -> Result<()>;
    /// Exact outcome distribution of measuring `measured` in the computational basis.
    fn output_distribution(&self, measured: &[usize]) -> Result<Vec<f64>>;
}

fn check_measured(n: usize, measured: &[usize]) -> Result<()> {
    if measured.is_empty() {
        return Err(Error::EmptyMeasuredRegister);
    }
    check_targets(n, measured, measured.len())
}

/// Pure state on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(Error::SizeBudget { n_qubits, limit: MAX_STATE_QUBITS });
        }
        let mut amps = vec![C64::zero(); 1 << n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        if index >= s.amps.len() {
            return Err(Error::InvalidState("basis index out of range"));
        }
        s.amps[0] = C64::zero();
        s.amps[index] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidState("length is not a power of two"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::SizeBudget { n_qubits, limit: MAX_STATE_QUBITS });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidState("squared amplitudes do not sum to one"));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies any `2^k × 2^k` matrix without validation.
    pub(crate) fn apply_matrix(&mut self, m: &Matrix, targets: &[usize]) {
        apply_local(&mut self.amps, self.n_qubits, m, targets);
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

impl QuantumState for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_unitary(&mut self, gate: &UnitaryGate, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets, gate.arity())?;
        self.apply_matrix(gate.matrix(), targets);
        Ok(())
    }

    fn output_distribution(&self, measured: &[usize]) -> Result<Vec<f64>> {
        check_measured(self.n_qubits, measured)?;
        Ok(clamp_distribution(marginal_distribution(self.n_qubits, measured, |i| self.amps[i].norm_sqr())))
    }
}

/// Mixed state stored densely. Internally the row-major matrix is treated as
/// a `2n`-qubit vector whose first `n` qubits index rows.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: Matrix,
}

impl DensityMatrix {
    fn check_size(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 || n_qubits > MAX_DENSITY_QUBITS {
            return Err(Error::SizeBudget { n_qubits, limit: MAX_DENSITY_QUBITS });
        }
        Ok(())
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let mut matrix = Matrix::zeros(1 << n_qubits);
        matrix[(0, 0)] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, matrix })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        Self::check_size(n_qubits)?;
        let dim = 1 << n_qubits;
        Ok(Self { n_qubits, matrix: Matrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)) })
    }

    pub fn from_pure(state: &StateVector) -> Result<Self> {
        Self::check_size(state.n_qubits)?;
        let a = state.amplitudes();
        let matrix = Matrix::from_fn(a.len(), |r, c| a[r] * a[c].conj());
        Ok(Self { n_qubits: state.n_qubits, matrix })
    }

    pub fn from_matrix(matrix: Matrix) -> Result<Self> {
        let dim = matrix.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidState("dimension is not a power of two"));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        Self::check_size(n_qubits)?;
        let rho = Self { n_qubits, matrix };
        if !rho.is_hermitian(EXACT_TOL) {
            return Err(Error::InvalidState("not Hermitian"));
        }
        if (rho.trace() - 1.0).abs() > EXACT_TOL {
            return Err(Error::InvalidState("trace is not one"));
        }
        if !rho.matrix.is_positive_semidefinite(POSITIVITY_TOL) {
            return Err(Error::InvalidState("not positive semidefinite"));
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.is_hermitian(tol)
    }

    /// Hermitian, unit trace and positive semidefinite up to `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && (self.trace() - 1.0).abs() <= tol && self.matrix.is_positive_semidefinite(tol)
    }

    pub(crate) fn apply_matrix(&mut self, u: &Matrix, targets: &[usize]) {
        let n = self.n_qubits;
        let cols: Vec<usize> = targets.iter().map(|&t| t + n).collect();
        apply_local(self.matrix.data_mut(), 2 * n, u, targets);
        apply_local(self.matrix.data_mut(), 2 * n, &u.conj(), &cols);
    }

    /// Applies a superoperator acting on `vec(ρ_local)` with row bits first,
    /// e.g. `Σ K ⊗ conj(K)`. No positivity or trace checks.
    pub(crate) fn apply_superoperator(&mut self, s: &Matrix, targets: &[usize]) {
        let n = self.n_qubits;
        let mut all: Vec<usize> = targets.to_vec();
        all.extend(targets.iter().map(|&t| t + n));
        apply_local(self.matrix.data_mut(), 2 * n, s, &all);
    }

    pub fn apply_channel(&mut self, channel: &KrausChannel, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets, channel.arity())?;
        if !channel.is_trace_preserving(EXACT_TOL) {
            return Err(Error::NotTracePreserving);
        }
        self.apply_superoperator(&channel.superoperator(), targets);
        debug_assert!(self.is_valid(POSITIVITY_TOL), "channel broke density-matrix invariants");
        Ok(())
    }

    /// Diagonal of ρ (not clamped).
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.matrix.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Signed marginal over `measured` without clamping; used for virtual
    /// (quasi-probability) states.
    pub(crate) fn raw_distribution(&self, measured: &[usize]) -> Vec<f64> {
        marginal_distribution(self.n_qubits, measured, |i| self.matrix[(i, i)].re)
    }

    /// `Tr(O ρ)`.
    pub fn expectation(&self, op: &Matrix) -> Result<f64> {
        if op.dim() != self.matrix.dim() {
            return Err(Error::DimensionMismatch { expected: self.matrix.dim(), got: op.dim() });
        }
        let d = op.dim();
        let mut acc = C64::zero();
        for r in 0..d {
            for c in 0..d {
                acc += op[(r, c)] * self.matrix[(c, r)];
            }
        }
        Ok(acc.re)
    }
}

impl QuantumState for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn apply_unitary(&mut self, gate: &UnitaryGate, targets: &[usize]) -> Result<()> {
        check_targets(self.n_qubits, targets, gate.arity())?;
        self.apply_matrix(gate.matrix(), targets);
        Ok(())
    }

    fn output_distribution(&self, measured: &[usize]) -> Result<Vec<f64>> {
        check_measured(self.n_qubits, measured)?;
        Ok(clamp_distribution(self.raw_distribution(measured)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::PauliString;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_unitary(&UnitaryGate::h(), &[1]).unwrap();
        let before = s.clone();
        let id = UnitaryGate::custom("id", Matrix::identity(2)).unwrap();
        s.apply_unitary(&id, &[0]).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn x_flips_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_unitary(&UnitaryGate::x(), &[0]).unwrap();
        assert_close(&s.output_distribution(&[0]).unwrap(), &[0.0, 1.0], 0.0);
    }

    #[test]
    fn hadamard_gives_even_split() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_unitary(&UnitaryGate::h(), &[0]).unwrap();
        assert_close(&s.output_distribution(&[0]).unwrap(), &[0.5, 0.5], 1e-15);
    }

    #[test]
    fn bell_state_distribution() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_unitary(&UnitaryGate::h(), &[0]).unwrap();
        s.apply_unitary(&UnitaryGate::cx(), &[0, 1]).unwrap();
        assert_close(&s.output_distribution(&[0, 1]).unwrap(), &[0.5, 0.0, 0.0, 0.5], 1e-15);
        let mut rho = DensityMatrix::zero(2).unwrap();
        rho.apply_unitary(&UnitaryGate::h(), &[0]).unwrap();
        rho.apply_unitary(&UnitaryGate::cx(), &[0, 1]).unwrap();
        assert_close(&rho.output_distribution(&[0, 1]).unwrap(), &[0.5, 0.0, 0.0, 0.5], 1e-15);
    }

    #[test]
    fn maximally_mixed_is_uniform() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert_close(&rho.output_distribution(&[0, 1]).unwrap(), &[0.25; 4], 1e-15);
    }

    #[test]
    fn target_order_sets_bit_significance() {
        // X on qubit 1 of |00> gives |01> = index 1.
        let mut s = StateVector::zero(2).unwrap();
        s.apply_unitary(&UnitaryGate::x(), &[1]).unwrap();
        assert_close(&s.probabilities(), &[0.0, 1.0, 0.0, 0.0], 0.0);
        // CX with control 1, target 0 maps |01> to |11>.
        s.apply_unitary(&UnitaryGate::cx(), &[1, 0]).unwrap();
        assert_close(&s.probabilities(), &[0.0, 0.0, 0.0, 1.0], 0.0);
        // Reordered measurement swaps significance.
        let mut t = StateVector::zero(2).unwrap();
        t.apply_unitary(&UnitaryGate::x(), &[1]).unwrap();
        assert_close(&t.output_distribution(&[1, 0]).unwrap(), &[0.0, 0.0, 1.0, 0.0], 0.0);
    }

    #[test]
    fn rejects_bad_targets() {
        let mut s = StateVector::zero(2).unwrap();
        assert_eq!(s.apply_unitary(&UnitaryGate::cx(), &[0]), Err(Error::ArityMismatch { expected: 2, got: 1 }));
        assert_eq!(s.apply_unitary(&UnitaryGate::cx(), &[0, 0]), Err(Error::DuplicateQubit(0)));
        assert_eq!(s.apply_unitary(&UnitaryGate::h(), &[2]), Err(Error::QubitOutOfRange { index: 2, n_qubits: 2 }));
    }

    #[test]
    fn depolarizing_zero_is_identity() {
        let mut rho = DensityMatrix::zero(1).unwrap();
        rho.apply_unitary(&UnitaryGate::ry(0.8), &[0]).unwrap();
        let before = rho.clone();
        rho.apply_channel(&KrausChannel::depolarizing(1, 0.0).unwrap(), &[0]).unwrap();
        assert!(rho.matrix().max_abs_diff(before.matrix()) < 1e-15);
    }

    #[test]
    fn full_depolarizing_on_zero_state() {
        // Uniform Pauli convention at p = 1: (XρX + YρY + ZρZ)/3 on |0><0| gives diag(1/3, 2/3).
        let mut rho = DensityMatrix::zero(1).unwrap();
        rho.apply_channel(&KrausChannel::depolarizing(1, 1.0).unwrap(), &[0]).unwrap();
        let closed_form = [1.0 / 3.0, 2.0 / 3.0];
        assert_close(&rho.probabilities(), &closed_form, 1e-15);
        // Kraus-sum oracle built by hand.
        let zero = Matrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]);
        let mut oracle = Matrix::zeros(2);
        for p in PauliString::all(1).skip(1) {
            let m = p.matrix();
            oracle = oracle.add(&m.mul(&zero).mul(&m.adjoint()).scale(C64::new(1.0 / 3.0, 0.0)));
        }
        assert!(rho.matrix().max_abs_diff(&oracle) < 1e-15);
    }

    #[test]
    fn three_quarter_depolarizing_fully_mixes() {
        let mut rho = DensityMatrix::zero(1).unwrap();
        rho.apply_channel(&KrausChannel::depolarizing(1, 0.75).unwrap(), &[0]).unwrap();
        assert!(rho.matrix().max_abs_diff(DensityMatrix::maximally_mixed(1).unwrap().matrix()) < 1e-15);
    }

    #[test]
    fn depolarizing_two_routes_agree() {
        // Closed form for the uniform convention on |0><0|: P(1) = 2p/3.
        let p = 0.1;
        let mut rho = DensityMatrix::zero(1).unwrap();
        rho.apply_channel(&KrausChannel::depolarizing(1, p).unwrap(), &[0]).unwrap();
        let probs = rho.output_distribution(&[0]).unwrap();
        assert_close(&probs, &[1.0 - 2.0 * p / 3.0, 2.0 * p / 3.0], 1e-12);
    }

    #[test]
    fn from_matrix_validates() {
        assert!(DensityMatrix::from_matrix(Matrix::from_real(2, &[1.0, 0.0, 0.0, 1.0])).is_err());
        assert!(DensityMatrix::from_matrix(Matrix::from_real(2, &[1.2, 0.0, 0.0, -0.2])).is_err());
        assert!(DensityMatrix::from_matrix(Matrix::from_real(2, &[0.5, 0.1, 0.1, 0.5])).is_ok());
    }

    #[test]
    fn budgets() {
        assert!(StateVector::zero(MAX_STATE_QUBITS + 1).is_err());
        assert!(DensityMatrix::zero(MAX_DENSITY_QUBITS + 1).is_err());
    }
}
