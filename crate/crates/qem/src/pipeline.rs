//! Experiment pipelines shared by the commands: sample, estimate, compare
//! with exact simulation, decide, and write artifacts.

use std::fs;
use std::path::Path;

use anyhow::Context;
use qem_core::circuit::{
    qpe_circuit, simulate, simulate_ideal, ChannelSpec, Circuit, EigenphaseSpec, NoiseModel, QpeCircuit, SiteSelector,
};
use qem_core::decision::{
    min_string_digitwise, min_string_global, valid_threshold_interval_digitwise, valid_threshold_interval_global,
    Method, ThresholdPolicy,
};
use qem_core::estimator::{
    clip_renormalize, direct_estimate, metrics, sampling_estimate, DistributionEstimate, SignedHistogram,
};
use qem_core::mitigation::{exact_response_rates, plan_pec, MitigationMode, MitigationPlan};
use qem_core::{Bitstring, Error};

use crate::campaign::run_parallel;
use crate::formats::{self, DecisionReport, DistributionsFile, MetricsFile, MetricsRecord, MetricsSet};

/// Exact probabilities below this count as zero when locating the true smallest string.
pub const SUPPORT_TOL: f64 = 1e-9;

pub struct Experiment {
    pub circuit: Circuit,
    pub noise: NoiseModel,
    pub mode: MitigationMode,
}

/// Everything one sampling campaign produces.
pub struct Outcome {
    pub plan: MitigationPlan,
    pub hist: SignedHistogram,
    pub ideal: Vec<f64>,
    pub noisy: Vec<f64>,
    /// Exact mean of the direct estimator.
    pub exact_direct: Vec<f64>,
    /// Exact limit of the sampling estimator.
    pub exact_sampling: Vec<f64>,
    pub direct: DistributionEstimate,
    /// `None` when the signed counts leave no effective samples.
    pub sampling: Option<DistributionEstimate>,
    /// The sampling estimate with negatives clipped.
    pub clipped: Option<DistributionEstimate>,
}

fn optional<T>(r: qem_core::Result<T>) -> qem_core::Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::InsufficientSamples(_) | Error::NothingToClip) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn run_experiment(exp: &Experiment, shots: u64, seed: u64, threads: usize) -> anyhow::Result<Outcome> {
    anyhow::ensure!(shots >= 1, "shots must be at least 1");
    let plan = plan_pec(&exp.circuit, &exp.noise, exp.mode.clone()).context("building the mitigation plan")?;
    let rates = exact_response_rates(&plan)?;
    let hist = run_parallel(&plan, shots, seed, threads)?;
    let a = plan.normalization();
    let direct = direct_estimate(&hist, a)?;
    let sampling = optional(sampling_estimate(&hist, a))?;
    let clipped = match &sampling {
        Some(s) => optional(clip_renormalize(s))?,
        None => None,
    };
    Ok(Outcome {
        ideal: simulate_ideal(&exp.circuit)?,
        noisy: simulate(&exp.circuit, Some(&exp.noise))?,
        exact_direct: rates.mitigated(),
        exact_sampling: rates.renormalized(),
        plan,
        hist,
        direct,
        sampling,
        clipped,
    })
}

impl Outcome {
    pub fn normalization(&self) -> f64 {
        self.plan.normalization()
    }

    pub fn n_bits(&self) -> usize {
        self.plan.n_bits()
    }

    /// Smallest string whose exact mitigated probability is non-negligible.
    pub fn true_min_string(&self) -> Option<Bitstring> {
        let i = self.exact_direct.iter().position(|&p| p > SUPPORT_TOL)?;
        Bitstring::new(i as u64, self.n_bits()).ok()
    }

    pub fn metrics(&self) -> anyhow::Result<MetricsFile> {
        let noisy = DistributionEstimate::exact(self.n_bits(), &self.noisy)?;
        let set = |direct_ref: &[f64], sampling_ref: &[f64]| -> anyhow::Result<MetricsSet> {
            let rec = |e: &DistributionEstimate, r: &[f64]| -> anyhow::Result<MetricsRecord> {
                Ok(MetricsRecord::from(&metrics(e, r)?))
            };
            Ok(MetricsSet {
                noisy: rec(&noisy, direct_ref)?,
                direct: rec(&self.direct, direct_ref)?,
                sampling: self.sampling.as_ref().map(|e| rec(e, sampling_ref)).transpose()?,
                clipped: self.clipped.as_ref().map(|e| rec(e, sampling_ref)).transpose()?,
            })
        };
        Ok(MetricsFile {
            a: self.normalization(),
            n_cir: self.hist.n_cir(),
            vs_ideal: set(&self.ideal, &self.ideal)?,
            vs_exact: set(&self.exact_direct, &self.exact_sampling)?,
        })
    }

    pub fn distributions(&self) -> DistributionsFile {
        let n = self.n_bits();
        let stderr = Bitstring::all(n).map(|z| self.direct.get(z).stderr).collect();
        DistributionsFile {
            n_bits: n,
            strings: Bitstring::all(n).map(|z| z.to_string()).collect(),
            ideal: self.ideal.clone(),
            noisy: self.noisy.clone(),
            exact_em: self.exact_direct.clone(),
            direct: self.direct.to_dense(),
            sampling: self.sampling.as_ref().map(DistributionEstimate::to_dense),
            clipped: self.clipped.as_ref().map(DistributionEstimate::to_dense),
            stderr,
        }
    }

    pub fn write_artifacts(&self, dir: &Path) -> anyhow::Result<()> {
        let d = self.distributions();
        write(dir, PLAN_FILE, &formats::write_plan(&self.plan.summary())?)?;
        write(dir, HISTOGRAM_FILE, &formats::write_histogram(&self.hist, self.normalization())?)?;
        write(dir, DISTRIBUTIONS_CSV, &formats::write_distribution_csv(&d.rows())?)?;
        write(dir, DISTRIBUTIONS_JSON, &formats::write_distributions(&d)?)?;
        write(dir, METRICS_FILE, &formats::write_metrics(&self.metrics()?)?)?;
        Ok(())
    }
}

pub const PLAN_FILE: &str = "plan.json";
pub const HISTOGRAM_FILE: &str = "histogram.json";
pub const DISTRIBUTIONS_CSV: &str = "distributions.csv";
pub const DISTRIBUTIONS_JSON: &str = "distributions.json";
pub const METRICS_FILE: &str = "metrics.json";
pub const GLOBAL_REPORT: &str = "decision_global.json";
pub const DIGITWISE_REPORT: &str = "decision_digitwise.json";

pub fn write(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Global and digitwise reports for a histogram. Intervals refer to `truth`
/// when given, otherwise to each method's own answer.
pub fn decide(
    hist: &SignedHistogram,
    a: f64,
    policy: &ThresholdPolicy,
    truth: Option<Bitstring>,
) -> anyhow::Result<(DecisionReport, DecisionReport)> {
    let est = direct_estimate(hist, a)?;
    let global = match min_string_global(&est, policy) {
        Ok(r) => {
            let z = truth.unwrap_or(r.z_min);
            DecisionReport::new(&r, Some((z, valid_threshold_interval_global(&est, z))))
        }
        Err(e @ Error::NoStringRejected) => {
            let mut report = DecisionReport::failed(Method::Global.name(), *policy, e.to_string());
            report.set_interval(truth.map(|z| (z, valid_threshold_interval_global(&est, z))));
            report
        }
        Err(e) => return Err(e.into()),
    };
    let r = min_string_digitwise(hist, a, policy)?;
    let z = truth.unwrap_or(r.z_min);
    let digitwise = DecisionReport::new(&r, Some((z, valid_threshold_interval_digitwise(hist, a, z)?)));
    Ok((global, digitwise))
}

pub fn write_reports(dir: &Path, reports: &(DecisionReport, DecisionReport)) -> anyhow::Result<()> {
    write(dir, GLOBAL_REPORT, &formats::write_decision(&reports.0)?)?;
    write(dir, DIGITWISE_REPORT, &formats::write_decision(&reports.1)?)
}

#[derive(Clone, Debug)]
pub struct DemoConfig {
    pub counting_qubits: usize,
    /// Circuit fault rate `Mp`, spread evenly over the noisy gates.
    pub fault_rate: f64,
    /// Optional per-qubit readout flip probability.
    pub readout_flip: f64,
    pub spectrum: Vec<(f64, f64)>,
    pub shots: u64,
    pub seed: u64,
    /// Defaults to `bayesian` with `p_b` equal to the ground weight.
    pub policy: Option<ThresholdPolicy>,
    pub threads: usize,
}

pub struct DemoOutcome {
    pub qpe: QpeCircuit,
    pub policy: ThresholdPolicy,
    pub outcome: Outcome,
    pub reports: (DecisionReport, DecisionReport),
}

pub fn demo_experiment(cfg: &DemoConfig) -> anyhow::Result<(QpeCircuit, Experiment)> {
    let qpe = qpe_circuit(cfg.counting_qubits, &EigenphaseSpec::Spectrum(cfg.spectrum.clone()))?;
    let mut noise = qpe.default_noise(cfg.fault_rate)?;
    if cfg.readout_flip > 0.0 {
        noise = noise.with_rule(SiteSelector::Measurement, ChannelSpec::ReadoutFlip(cfg.readout_flip));
    }
    let exp = Experiment { circuit: qpe.circuit.clone(), noise, mode: MitigationMode::Pec };
    Ok((qpe, exp))
}

pub fn run_demo(cfg: &DemoConfig) -> anyhow::Result<DemoOutcome> {
    let (qpe, exp) = demo_experiment(cfg)?;
    let policy = match cfg.policy {
        Some(p) => p,
        None => ThresholdPolicy::bayesian(qpe.ground_weight())?,
    };
    let outcome = run_experiment(&exp, cfg.shots, cfg.seed, cfg.threads)?;
    let reports = decide(&outcome.hist, outcome.normalization(), &policy, outcome.true_min_string())?;
    Ok(DemoOutcome { qpe, policy, outcome, reports })
}
