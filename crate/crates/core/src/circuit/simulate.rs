use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::noise::{NoiseModel, NoiseSite, SiteLocation};
use super::Circuit;
use crate::quantum::{DensityMatrix, QuantumState};
use crate::{Bitstring, Error, Result};

/// Ideal output distribution over the measured register (state vector).
pub fn simulate_ideal(circuit: &Circuit) -> Result<Vec<f64>> {
    circuit.final_state()?.output_distribution(circuit.measured())
}

/// Exact output distribution. Without noise a state vector is used,
/// otherwise a density matrix.
pub fn simulate(circuit: &Circuit, noise: Option<&NoiseModel>) -> Result<Vec<f64>> {
    match noise {
        None => simulate_ideal(circuit),
        Some(model) => {
            let sites = model.resolve(circuit)?;
            let rho = run_density(circuit, &sites, |_, site, rho| rho.apply_channel(&site.channel, &site.targets))?;
            rho.output_distribution(circuit.measured())
        }
    }
}

/// Runs the circuit on a density matrix, calling `action` at every site.
pub(crate) fn run_density<F>(circuit: &Circuit, sites: &[NoiseSite], mut action: F) -> Result<DensityMatrix>
where
    F: FnMut(usize, &NoiseSite, &mut DensityMatrix) -> Result<()>,
{
    let mut rho = DensityMatrix::zero(circuit.n_qubits())?;
    let mut next = 0;
    for (i, op) in circuit.ops().iter().enumerate() {
        rho.apply_matrix(op.gate.matrix(), &op.targets);
        while next < sites.len() && sites[next].location == SiteLocation::AfterOp(i) {
            action(next, &sites[next], &mut rho)?;
            next += 1;
        }
    }
    for (k, site) in sites.iter().enumerate().skip(next) {
        if site.location != SiteLocation::Measurement {
            return Err(Error::InvalidNoiseRule("noise sites are not in circuit order"));
        }
        action(k, site, &mut rho)?;
    }
    Ok(rho)
}

/// Ideal and noisy distributions of one circuit, plus an optional exact
/// error-mitigated reference filled in by the mitigation oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistributions {
    pub ideal: Vec<f64>,
    pub noisy: Vec<f64>,
    pub mitigated_reference: Option<Vec<f64>>,
}

impl ExactDistributions {
    pub fn compute(circuit: &Circuit, noise: &NoiseModel) -> Result<Self> {
        Ok(Self { ideal: simulate_ideal(circuit)?, noisy: simulate(circuit, Some(noise))?, mitigated_reference: None })
    }
}

/// Draws measured bitstrings from a cached exact distribution.
#[derive(Clone, Debug)]
pub struct ShotSampler {
    n_bits: usize,
    index: WeightedIndex<f64>,
}

impl ShotSampler {
    pub fn new(circuit: &Circuit, noise: Option<&NoiseModel>) -> Result<Self> {
        Self::from_distribution(circuit.measured().len(), &simulate(circuit, noise)?)
    }

    pub fn from_distribution(n_bits: usize, probs: &[f64]) -> Result<Self> {
        if probs.len() != 1usize << n_bits {
            return Err(Error::DimensionMismatch { expected: 1 << n_bits, got: probs.len() });
        }
        let index = WeightedIndex::new(probs).map_err(|_| Error::InvalidState("distribution has no mass"))?;
        Ok(Self { n_bits, index })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Bitstring {
        let value = self.index.sample(rng) as u64;
        Bitstring::new(value, self.n_bits).expect("index fits the register")
    }
}

/// One shot from the exact (noisy) distribution. Builds the distribution on
/// every call; use [`ShotSampler`] for repeated draws.
pub fn sample_shot<R: Rng + ?Sized>(circuit: &Circuit, noise: Option<&NoiseModel>, rng: &mut R) -> Result<Bitstring> {
    Ok(ShotSampler::new(circuit, noise)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{ChannelSpec, SiteSelector};
    use crate::quantum::{StateVector, UnitaryGate};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_circuit(seed: u64) -> Circuit {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = Circuit::new(3).unwrap();
        for _ in 0..12 {
            let q = rng.random_range(0..3);
            match rng.random_range(0..4) {
                0 => c.push(UnitaryGate::h(), &[q]),
                1 => c.push(UnitaryGate::ry(rng.random_range(0.0..6.3)), &[q]),
                2 => c.push(UnitaryGate::cx(), &[q, (q + 1) % 3]),
                _ => c.push(UnitaryGate::cp(rng.random_range(0.0..6.3)), &[q, (q + 2) % 3]),
            }
            .unwrap();
        }
        c
    }

    #[test]
    fn statevector_and_density_agree_without_channels() {
        for seed in 0..5 {
            let c = random_circuit(seed);
            let sv = simulate_ideal(&c).unwrap();
            let dm = simulate(&c, Some(&NoiseModel::new())).unwrap();
            for (a, b) in sv.iter().zip(&dm) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn matches_amplitude_enumeration() {
        let c = random_circuit(11);
        let amps = c.unitary().unwrap();
        let dist = simulate_ideal(&c).unwrap();
        for (z, p) in dist.iter().enumerate() {
            assert!((p - amps[(z, 0)].norm_sqr()).abs() < 1e-12);
        }
        let mut sv = StateVector::zero(3).unwrap();
        for op in c.ops() {
            sv.apply_unitary(&op.gate, &op.targets).unwrap();
        }
        assert!((sv.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_noise_equals_ideal_and_noise_sums_to_one() {
        let c = random_circuit(3);
        let ideal = simulate_ideal(&c).unwrap();
        let zero = NoiseModel::new().with_rule(SiteSelector::AllTwoQubit, ChannelSpec::Depolarizing(0.0));
        for (a, b) in ideal.iter().zip(simulate(&c, Some(&zero)).unwrap()) {
            assert!((a - b).abs() < 1e-10);
        }
        let noisy = NoiseModel::new()
            .with_rule(SiteSelector::AllTwoQubit, ChannelSpec::Depolarizing(0.2))
            .with_rule(SiteSelector::Measurement, ChannelSpec::ReadoutFlip(0.05));
        let p = simulate(&c, Some(&noisy)).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn readout_flip_matches_classical_flip() {
        let mut c = Circuit::new(2).unwrap();
        c.push(UnitaryGate::x(), &[0]).unwrap();
        let p = simulate(&c, Some(&NoiseModel::readout(0.1))).unwrap();
        // |10> with each bit flipped independently.
        let expect = [0.9 * 0.1, 0.1 * 0.1, 0.9 * 0.9, 0.1 * 0.9];
        for (a, b) in p.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_is_seed_deterministic() {
        let c = random_circuit(5);
        let s = ShotSampler::new(&c, None).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| s.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
    }

    #[test]
    fn delta_peak_always_returns_peak() {
        let mut c = Circuit::new(3).unwrap();
        c.push(UnitaryGate::x(), &[1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample_shot(&c, None, &mut rng).unwrap().value(), 0b010);
        }
    }
}
