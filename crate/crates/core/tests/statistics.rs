//! Monte-Carlo checks of the samplers and estimators against exact oracles.

use qem_core::circuit::{
    demo_spectrum, qpe_circuit, simulate, ChannelSpec, Circuit, EigenphaseSpec, NoiseModel, ShotSampler, SiteSelector,
};
use qem_core::decision::ThresholdPolicy;
use qem_core::estimator::{clip_renormalize, direct_estimate, distance, sampling_estimate, SignedHistogram};
use qem_core::mitigation::{
    exact_response_rates, plan_pec, run_campaign, MitigationMode, MitigationPlan, PostSelectionPredicate,
    ResponseSampler, Sign,
};
use qem_core::quantum::UnitaryGate;
use qem_core::Bitstring;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn toy() -> (Circuit, NoiseModel) {
    let mut c = Circuit::new(2).unwrap();
    c.push(UnitaryGate::h(), &[0]).unwrap();
    c.push(UnitaryGate::cx(), &[0, 1]).unwrap();
    c.push(UnitaryGate::ry(0.9), &[1]).unwrap();
    c.push(UnitaryGate::cp(1.3), &[1, 0]).unwrap();
    c.push(UnitaryGate::h(), &[1]).unwrap();
    let noise = NoiseModel::new()
        .with_rule(SiteSelector::AllTwoQubit, ChannelSpec::Depolarizing(0.15))
        .with_rule(SiteSelector::Measurement, ChannelSpec::ReadoutFlip(0.04));
    (c, noise)
}

/// Every (z, sign) frequency over `shots` draws is within 5σ of the exact rate.
fn check_against_oracle(plan: &MitigationPlan, shots: u64, seed: u64) {
    let rates = exact_response_rates(plan).unwrap();
    let hist = run_campaign(plan, shots, seed).unwrap();
    let n = shots as f64;
    let within = |count: u64, rate: f64| {
        let sigma = (rate * (1.0 - rate) / n).sqrt().max(1.0 / n);
        (count as f64 / n - rate).abs() <= 5.0 * sigma
    };
    for z in Bitstring::all(plan.n_bits()) {
        let c = hist.counts(z);
        assert!(within(c.plus, rates.r_plus(z)), "{z} plus {} vs {}", c.plus, rates.r_plus(z));
        assert!(within(c.minus, rates.r_minus(z)), "{z} minus {} vs {}", c.minus, rates.r_minus(z));
    }
    assert!(within(hist.n_zero(), rates.rejection_probability()));
}

#[test]
fn response_frequencies_match_exact_rates() {
    let (c, noise) = toy();
    let plan = plan_pec(&c, &noise, MitigationMode::Pec).unwrap();
    check_against_oracle(&plan, 1_000_000, 1);
    let parity = PostSelectionPredicate::Parity { positions: vec![0, 1], odd: false };
    let plan = plan_pec(&c, &noise, MitigationMode::PecWithPostselect(parity.clone())).unwrap();
    check_against_oracle(&plan, 1_000_000, 2);
    let plan = plan_pec(&c, &noise, MitigationMode::PostselectOnly(parity)).unwrap();
    check_against_oracle(&plan, 200_000, 3);
}

#[test]
fn minus_sign_probability_matches_closed_form() {
    let (c, noise) = toy();
    let plan = plan_pec(&c, &noise, MitigationMode::Pec).unwrap();
    let mut sampler = ResponseSampler::new(&plan).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let n = 100_000;
    let minus = (0..n).filter(|_| sampler.sample(&mut rng).sign == Sign::Minus).count() as f64;
    let p = plan.minus_sign_probability();
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    assert!((minus / n as f64 - p).abs() <= 3.0 * sigma, "{} vs {p}", minus / n as f64);
}

#[test]
fn shot_frequencies_match_exact_distribution() {
    let (c, noise) = toy();
    let exact = simulate(&c, Some(&noise)).unwrap();
    let sampler = ShotSampler::new(&c, Some(&noise)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 100_000usize;
    let mut counts = vec![0usize; exact.len()];
    for _ in 0..n {
        counts[sampler.sample(&mut rng).value() as usize] += 1;
    }
    for (k, p) in counts.iter().zip(&exact) {
        assert!((*k as f64 / n as f64 - p).abs() <= 5.0 / (n as f64).sqrt());
    }
}

#[test]
fn campaigns_are_seed_deterministic() {
    let (c, noise) = toy();
    let plan = plan_pec(&c, &noise, MitigationMode::Pec).unwrap();
    assert_eq!(run_campaign(&plan, 40_000, 9).unwrap(), run_campaign(&plan, 40_000, 9).unwrap());
    assert_ne!(run_campaign(&plan, 40_000, 9).unwrap(), run_campaign(&plan, 40_000, 10).unwrap());
}

fn demo_plan() -> (MitigationPlan, Vec<f64>) {
    let q = qpe_circuit(4, &EigenphaseSpec::Spectrum(demo_spectrum())).unwrap();
    let noise = q.default_noise(0.6).unwrap();
    let plan = plan_pec(&q.circuit, &noise, MitigationMode::Pec).unwrap();
    let p_em = exact_response_rates(&plan).unwrap().mitigated();
    (plan, p_em)
}

#[test]
fn clipping_removes_noise_on_zero_support() {
    let (plan, p_em) = demo_plan();
    let (mut raw, mut clipped) = (0.0, 0.0);
    for seed in 0..100 {
        let hist = run_campaign(&plan, 10_000, seed).unwrap();
        let est = sampling_estimate(&hist, plan.normalization()).unwrap();
        let clip = clip_renormalize(&est).unwrap();
        assert!(clip.entries().iter().all(|e| e.value >= 0.0));
        assert!((clip.total() - 1.0).abs() < 1e-12);
        // On strings the mitigated distribution never produces, clipping can only help.
        let zero_part =
            |v: &[f64]| -> f64 { v.iter().zip(&p_em).filter(|(_, p)| p.abs() < 1e-12).map(|(x, _)| x * x).sum() };
        assert!(zero_part(&clip.to_dense()) <= zero_part(&est.to_dense()) + 1e-15);
        raw += distance(&est.to_dense(), &p_em).unwrap().0;
        clipped += distance(&clip.to_dense(), &p_em).unwrap().0;
    }
    // Renormalization shrinks the peaks, so the total error is only roughly preserved.
    assert!(clipped <= 1.25 * raw, "clipped {clipped} raw {raw}");
}

#[test]
fn bayesian_threshold_errs_towards_false_rejections() {
    let (plan, p_em) = demo_plan();
    let policy = ThresholdPolicy::bayesian(0.1).unwrap();
    let ground: Bitstring = "1000".parse().unwrap();
    let (mut type1, mut type2) = (0u32, 0u32);
    for seed in 0..200 {
        let hist: SignedHistogram = run_campaign(&plan, 1_000, 1000 + seed).unwrap();
        let est = direct_estimate(&hist, plan.normalization()).unwrap();
        let rejects = |z: Bitstring| {
            let e = est.get(z);
            e.value > 0.0 && e.value > qem_core::decision::threshold_for(&policy, e.stderr)
        };
        let below = Bitstring::all(4).take_while(|&z| z < ground);
        if below.filter(|z| p_em[z.value() as usize].abs() < 1e-12).any(rejects) {
            type1 += 1;
        }
        if !rejects(ground) {
            type2 += 1;
        }
    }
    assert!(type1 > type2, "type I runs {type1}, type II runs {type2}");
}

#[test]
fn exact_rates_give_true_smallest_string_for_any_valid_threshold() {
    use qem_core::decision::{min_string_digitwise, min_string_global};
    use qem_core::estimator::{Counts, DistributionEstimate};
    let (plan, p_em) = demo_plan();
    let rates = exact_response_rates(&plan).unwrap();
    let scale = 1e12;
    let counts = Bitstring::all(4).map(|z| {
        let c =
            Counts { plus: (rates.r_plus(z) * scale).round() as u64, minus: (rates.r_minus(z) * scale).round() as u64 };
        (z, c)
    });
    let hist = SignedHistogram::from_counts(4, counts, 0).unwrap();
    let exact = DistributionEstimate::exact(4, &p_em).unwrap();
    let ground: Bitstring = "1000".parse().unwrap();
    for k in 1..100 {
        let policy = ThresholdPolicy::fixed(0.1 * k as f64 / 100.0).unwrap();
        assert_eq!(min_string_global(&exact, &policy).unwrap().z_min, ground);
        assert_eq!(min_string_digitwise(&hist, plan.normalization(), &policy).unwrap().z_min, ground);
    }
}
