use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::Range;
#[allow(unused_imports)]
use num_traits::Float;

use super::noise::NoiseModel;
use super::Circuit;
use crate::quantum::UnitaryGate;
use crate::{Error, Result};

/// Largest counting register accepted by the builders.
pub const MAX_COUNTING_QUBITS: usize = 8;
/// Largest number of spectrum components (one system qubit each).
pub const MAX_COMPONENTS: usize = 8;

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_COUNTING_QUBITS {
        return Err(Error::UnsupportedQubitCount(n));
    }
    Ok(())
}

/// Quantum Fourier transform on `n` qubits (qubit 0 most significant),
/// equal to the DFT matrix: H and controlled phases, then swaps.
pub fn qft(n: usize) -> Result<Circuit> {
    check_size(n)?;
    let mut c = Circuit::new(n)?;
    for j in 0..n {
        c.push(UnitaryGate::h(), &[j])?;
        for m in j + 1..n {
            c.push(UnitaryGate::cp(2.0 * PI / (1u64 << (m - j + 1)) as f64), &[m, j])?;
        }
    }
    for j in 0..n / 2 {
        c.push(UnitaryGate::swap(), &[j, n - 1 - j])?;
    }
    Ok(c)
}

/// Inverse QFT with the swaps at the end. Equals the conjugate transpose of
/// the DFT matrix and contains `n(n-1)/2` controlled-phase gates.
pub fn inverse_qft(n: usize) -> Result<Circuit> {
    check_size(n)?;
    let mut c = Circuit::new(n)?;
    let r = |q: usize| n - 1 - q;
    for j in (0..n).rev() {
        for m in (j + 1..n).rev() {
            c.push(UnitaryGate::cp(-2.0 * PI / (1u64 << (m - j + 1)) as f64), &[r(m), r(j)])?;
        }
        c.push(UnitaryGate::h(), &[r(j)])?;
    }
    for j in 0..n / 2 {
        c.push(UnitaryGate::swap(), &[j, n - 1 - j])?;
    }
    Ok(c)
}

/// Eigenphases (in turns, `[0, 1)`) fed to phase estimation.
#[derive(Clone, Debug, PartialEq)]
pub enum EigenphaseSpec {
    Single(f64),
    /// `(phase, weight)` pairs; weights sum to one.
    Spectrum(Vec<(f64, f64)>),
}

impl EigenphaseSpec {
    fn components(&self) -> Result<Vec<(f64, f64)>> {
        let comps = match self {
            Self::Single(phi) => alloc::vec![(*phi, 1.0)],
            Self::Spectrum(c) => c.clone(),
        };
        if comps.is_empty() || comps.len() > MAX_COMPONENTS {
            return Err(Error::InvalidWeights("between one and eight components are supported"));
        }
        for &(phi, w) in &comps {
            if !(0.0..1.0).contains(&phi) {
                return Err(Error::InvalidPhase(phi));
            }
            if !(w >= 0.0) {
                return Err(Error::InvalidWeights("weights must be non-negative"));
            }
        }
        let total: f64 = comps.iter().map(|c| c.1).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidWeights("weights must sum to one"));
        }
        Ok(comps)
    }
}

/// Phase-estimation circuit together with its register layout.
///
/// The system register holds one qubit per spectrum component and is
/// prepared in `Σ_s √w_s |e_s>`, where `|e_s>` has only qubit `s` set. The
/// controlled powers are then diagonal phase gates on each system qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct QpeCircuit {
    pub circuit: Circuit,
    pub counting: Vec<usize>,
    pub system: Vec<usize>,
    pub spectrum: Vec<(f64, f64)>,
    /// Operation range of the inverse QFT.
    pub iqft_ops: Range<usize>,
    /// Controlled-phase gates inside the inverse QFT.
    pub iqft_cp_ops: Vec<usize>,
}

pub fn qpe_circuit(n_counting: usize, spec: &EigenphaseSpec) -> Result<QpeCircuit> {
    check_size(n_counting)?;
    let spectrum = spec.components()?;
    let n = n_counting;
    let k = spectrum.len();
    let mut c = Circuit::new(n + k)?;

    c.push(UnitaryGate::x(), &[n])?;
    let mut remaining = 1.0f64;
    for (s, &(_, w)) in spectrum.iter().enumerate().take(k - 1) {
        let ratio = if remaining > 0.0 { (w.sqrt() / remaining).min(1.0) } else { 1.0 };
        let theta = ratio.acos();
        c.push(UnitaryGate::givens(theta), &[n + s, n + s + 1])?;
        remaining *= theta.sin();
    }

    for j in 0..n {
        c.push(UnitaryGate::h(), &[j])?;
    }
    for j in 0..n {
        let power = (1u64 << (n - 1 - j)) as f64;
        for (s, &(phi, _)) in spectrum.iter().enumerate() {
            let angle = (2.0 * PI * phi * power) % (2.0 * PI);
            if angle != 0.0 {
                c.push(UnitaryGate::cp(angle), &[j, n + s])?;
            }
        }
    }

    let start = c.len();
    let iqft = inverse_qft(n)?;
    let mapping: Vec<usize> = (0..n).collect();
    c.append_mapped(&iqft, &mapping)?;
    let iqft_ops = start..c.len();
    let iqft_cp_ops = iqft_ops.clone().filter(|&i| c.ops()[i].gate.name() == "cp").collect();

    let counting: Vec<usize> = (0..n).collect();
    let system: Vec<usize> = (n..n + k).collect();
    c.set_measured(counting.clone())?;
    c.set_auxiliary(Some(system.clone()))?;
    Ok(QpeCircuit { circuit: c, counting, system, spectrum, iqft_ops, iqft_cp_ops })
}

impl QpeCircuit {
    /// Depolarizing noise on each inverse-QFT controlled-phase gate with
    /// per-gate strength `fault_rate / M`.
    pub fn default_noise(&self, fault_rate: f64) -> Result<NoiseModel> {
        let m = self.iqft_cp_ops.len();
        if !(fault_rate >= 0.0) {
            return Err(Error::InvalidProbability(fault_rate));
        }
        let p = if m == 0 { 0.0 } else { fault_rate / m as f64 };
        if p > 1.0 {
            return Err(Error::InvalidProbability(p));
        }
        Ok(NoiseModel::depolarizing_on(self.iqft_cp_ops.clone(), p))
    }

    /// Copy of the circuit that also measures the system register after the
    /// counting register.
    pub fn measuring_system(&self) -> Result<Circuit> {
        let mut c = self.circuit.clone();
        let mut measured = self.counting.clone();
        measured.extend(&self.system);
        c.set_measured(measured)?;
        Ok(c)
    }

    /// Weight of the component with the smallest phase.
    pub fn ground_weight(&self) -> f64 {
        self.spectrum.iter().fold((f64::INFINITY, 0.0), |acc, &(phi, w)| if phi < acc.0 { (phi, w) } else { acc }).1
    }
}

/// Spectrum of the built-in demo: dyadic phases 8/16, 11/16 and 14/16 with
/// the ground component at weight 0.1.
pub fn demo_spectrum() -> Vec<(f64, f64)> {
    alloc::vec![(8.0 / 16.0, 0.10), (11.0 / 16.0, 0.85), (14.0 / 16.0, 0.05)]
}
