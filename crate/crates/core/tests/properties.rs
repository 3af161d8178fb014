use proptest::prelude::*;
use qem_core::circuit::{simulate, Circuit, NoiseModel};
use qem_core::decision::{min_string_global, valid_threshold_interval_global, ThresholdPolicy};
use qem_core::estimator::{distance, DistributionEstimate, EstimateEntry, EstimateKind, SignedHistogram};
use qem_core::mitigation::{invert_channel, ResponseSample, Sign};
use qem_core::quantum::{
    DensityMatrix, KrausChannel, Matrix, PauliTransferMatrix, QuantumState, StateVector, UnitaryGate, C64,
};
use qem_core::{Bitstring, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_pure(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<C64> =
        (0..1 << n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// Convex mixture of a few random pure states.
fn random_mixed(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let dim = 1 << n;
    let mut m = Matrix::zeros(dim);
    let weights: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let rho = DensityMatrix::from_pure(&random_pure(n, rng)).unwrap();
        m.add_assign_scaled(rho.matrix(), C64::new(w / total, 0.0));
    }
    DensityMatrix::from_matrix(m).unwrap()
}

fn random_pauli_mixture(arity: usize, rng: &mut ChaCha8Rng, max_error: f64) -> KrausChannel {
    let n = 1 << (2 * arity);
    let mut probs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    probs[0] = 0.0;
    let err: f64 = probs.iter().sum();
    let p = rng.random_range(0.0..max_error);
    for x in probs.iter_mut() {
        *x *= p / err;
    }
    probs[0] = 1.0 - p;
    KrausChannel::pauli_mixture(arity, probs).unwrap()
}

fn compose(second: &KrausChannel, first: &KrausChannel) -> KrausChannel {
    let mut kraus = Vec::new();
    for b in second.kraus_operators() {
        for a in first.kraus_operators() {
            kraus.push(b.mul(a));
        }
    }
    KrausChannel::general(first.arity(), kraus).unwrap()
}

fn sample_strategy(n_bits: usize) -> impl Strategy<Value = Vec<ResponseSample>> {
    prop::collection::vec((0u64..1 << n_bits, -1i8..=1), 0..60).prop_map(move |v| {
        v.into_iter()
            .map(|(z, s)| ResponseSample {
                z: Bitstring::new(z, n_bits).unwrap(),
                sign: match s {
                    1 => Sign::Plus,
                    -1 => Sign::Minus,
                    _ => Sign::Zero,
                },
            })
            .collect()
    })
}

fn estimate_strategy() -> impl Strategy<Value = DistributionEstimate> {
    prop::collection::vec(prop::option::of(-0.2f64..0.6), 8).prop_map(|values| {
        let entries = values
            .into_iter()
            .enumerate()
            .filter_map(|(i, v)| {
                v.map(|value| EstimateEntry {
                    z: Bitstring::new(i as u64, 3).unwrap(),
                    value,
                    stderr: 0.01,
                    no_data: false,
                })
            })
            .collect();
        DistributionEstimate::from_entries(EstimateKind::Direct, 3, entries, 1.0, 100).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn merge_equals_accumulating_the_concatenation(samples in sample_strategy(3), cut in 0usize..60) {
        let cut = cut.min(samples.len());
        let whole = SignedHistogram::accumulate(3, samples.iter().copied());
        let mut left = SignedHistogram::accumulate(3, samples[..cut].iter().copied());
        let right = SignedHistogram::accumulate(3, samples[cut..].iter().copied());
        let mut swapped = right.clone();
        swapped.merge(&left).unwrap();
        left.merge(&right).unwrap();
        prop_assert_eq!(&left, &whole);
        prop_assert_eq!(&swapped, &whole);
        let accounted: u64 = whole.iter().map(|(_, c)| c.total()).sum::<u64>() + whole.n_zero();
        prop_assert_eq!(accounted, whole.n_cir());
    }

    #[test]
    fn norm_inequality_holds(a in prop::collection::vec(-1.0f64..1.0, 16), b in prop::collection::vec(0.0f64..1.0, 16)) {
        let (tse, tvd) = distance(&a, &b).unwrap();
        prop_assert!(0.5 * tse.sqrt() <= tvd + 1e-12);
        prop_assert!(tvd <= 2f64.powf(4.0 / 2.0 - 1.0) * tse.sqrt() + 1e-12);
    }

    #[test]
    fn global_interval_matches_decisions(est in estimate_strategy(), target in 0u64..8, p_th in 0.0f64..0.7) {
        let z_min = Bitstring::new(target, 3).unwrap();
        let interval = valid_threshold_interval_global(&est, z_min);
        let decided = min_string_global(&est, &ThresholdPolicy::fixed(p_th).unwrap());
        prop_assert_eq!(interval.contains(p_th), decided.map(|r| r.z_min) == Ok(z_min));
    }

    #[test]
    fn global_decision_is_monotone_in_threshold(est in estimate_strategy(), lo in 0.0f64..0.6, step in 0.0f64..0.3) {
        let at = |p: f64| min_string_global(&est, &ThresholdPolicy::fixed(p).unwrap());
        match (at(lo), at(lo + step)) {
            (Ok(a), Ok(b)) => prop_assert!(b.z_min >= a.z_min),
            (Err(_), Ok(_)) => prop_assert!(false, "raising the threshold produced a rejection"),
            (_, Err(e)) => prop_assert_eq!(e, Error::NoStringRejected),
        }
    }

    #[test]
    fn ptm_composition(seed in any::<u64>(), arity in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c1 = random_pauli_mixture(arity, &mut rng, 0.5);
        let c2 = random_pauli_mixture(arity, &mut rng, 0.5);
        let lhs = PauliTransferMatrix::from_channel(&compose(&c2, &c1));
        let rhs = PauliTransferMatrix::from_channel(&c2).mul(&PauliTransferMatrix::from_channel(&c1));
        for i in 0..lhs.dim() {
            for j in 0..lhs.dim() {
                prop_assert!((lhs.get(i, j) - rhs.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inversion_of_random_pauli_mixtures(seed in any::<u64>(), arity in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_pauli_mixture(arity, &mut rng, 0.3);
        let qpd = invert_channel(&ch).unwrap();
        prop_assert!((qpd.coefficient_sum() - 1.0).abs() < 1e-9);
        prop_assert!(qpd.normalization() >= 1.0 - 1e-12);
        prop_assert!(qpd.ptm().mul(&PauliTransferMatrix::from_channel(&ch)).is_identity(1e-10));
    }
}

#[test]
fn ptm_reproduces_channel_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let channels = [
        KrausChannel::depolarizing(1, 0.13).unwrap(),
        KrausChannel::depolarizing(2, 0.07).unwrap(),
        KrausChannel::measurement_bitflip(0.2).unwrap(),
        KrausChannel::general(
            1,
            vec![
                Matrix::from_real(2, &[1.0, 0.0, 0.0, 0.6f64.sqrt()]),
                Matrix::from_real(2, &[0.0, 0.4f64.sqrt(), 0.0, 0.0]),
            ],
        )
        .unwrap(),
    ];
    for ch in &channels {
        let k = ch.arity();
        let ptm = PauliTransferMatrix::from_channel(ch);
        // Trace preservation: first row is (1, 0, ..., 0).
        assert!((ptm.get(0, 0) - 1.0).abs() < 1e-12);
        assert!((1..ptm.dim()).all(|j| ptm.get(0, j).abs() < 1e-12));
        for _ in 0..100 {
            let rho = random_mixed(k, &mut rng);
            let mut direct = rho.clone();
            let targets: Vec<usize> = (0..k).collect();
            direct.apply_channel(ch, &targets).unwrap();
            assert!(direct.is_valid(1e-9));
            let coeffs = ptm.apply(&PauliTransferMatrix::pauli_vector(k, rho.matrix()));
            let rebuilt = PauliTransferMatrix::from_pauli_vector(k, &coeffs);
            assert!(rebuilt.max_abs_diff(direct.matrix()) < 1e-10);
        }
    }
}

#[test]
fn channels_preserve_state_invariants_in_circuits() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let mut rho = random_mixed(3, &mut rng);
        rho.apply_unitary(&UnitaryGate::cp(rng.random_range(0.0..6.0)), &[2, 0]).unwrap();
        rho.apply_channel(&KrausChannel::depolarizing(2, rng.random_range(0.0..1.0)).unwrap(), &[0, 1]).unwrap();
        rho.apply_channel(&random_pauli_mixture(1, &mut rng, 1.0), &[2]).unwrap();
        assert!(rho.is_valid(1e-9));
        let p = rho.output_distribution(&[2, 1, 0]).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(p.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn noise_never_reorders_gates() {
    let mut c = Circuit::new(2).unwrap();
    c.push(UnitaryGate::h(), &[0]).unwrap();
    c.push(UnitaryGate::cx(), &[0, 1]).unwrap();
    let before = c.clone();
    let noise = NoiseModel::depolarizing_on(vec![0, 1], 0.1);
    simulate(&c, Some(&noise)).unwrap();
    assert_eq!(c, before);
    assert_eq!(noise.resolve(&c).unwrap().len(), 2);
}
