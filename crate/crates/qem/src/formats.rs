//! On-disk formats: circuit and noise JSON inputs, and the JSON/CSV
//! artifacts written by the commands.
//!
//! Every artifact has a reader, and reading then writing reproduces the
//! original bytes.

use std::collections::BTreeSet;

use qem_core::circuit::{ChannelSpec, Circuit, NoiseModel, SiteSelector};
use qem_core::decision::{AuditEntry, MinStringResult, ThresholdInterval, ThresholdPolicy, Verdict};
use qem_core::estimator::{direct_estimate, Counts, ErrorMetrics, SignedHistogram};
use qem_core::mitigation::{PlanSummary, PostSelectionPredicate};
use qem_core::quantum::{GateKind, UnitaryGate};
use qem_core::Bitstring;
use serde::{Deserialize, Serialize};

pub const CIRCUIT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] qem_core::Error),
    #[error("unsupported circuit version {0}")]
    Version(u32),
    #[error("gate {0} has no file representation")]
    UnserializableGate(String),
    #[error("noise rule {index}: {message}")]
    NoiseRule { index: usize, message: &'static str },
    #[error("inconsistent histogram: {0}")]
    Histogram(String),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn parse_z(s: &str) -> Result<Bitstring> {
    Ok(s.parse::<Bitstring>()?)
}

// ---------------------------------------------------------------- circuits

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub version: u32,
    pub n_qubits: usize,
    pub ops: Vec<OpRecord>,
    pub measured: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpRecord {
    pub gate: String,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
}

impl CircuitFile {
    pub fn from_circuit(circuit: &Circuit) -> Result<Self> {
        let ops = circuit
            .ops()
            .iter()
            .map(|op| match op.gate.kind() {
                GateKind::Pauli(_) | GateKind::Custom(_) => {
                    Err(FormatError::UnserializableGate(op.gate.name().to_string()))
                }
                _ => Ok(OpRecord {
                    gate: op.gate.name().to_string(),
                    targets: op.targets.clone(),
                    param: op.gate.parameter(),
                }),
            })
            .collect::<Result<_>>()?;
        Ok(Self { version: CIRCUIT_VERSION, n_qubits: circuit.n_qubits(), ops, measured: circuit.measured().to_vec() })
    }

    pub fn to_circuit(&self) -> Result<Circuit> {
        if self.version != CIRCUIT_VERSION {
            return Err(FormatError::Version(self.version));
        }
        let mut c = Circuit::new(self.n_qubits)?;
        for op in &self.ops {
            c.push(UnitaryGate::from_name(&op.gate, op.param)?, &op.targets)?;
        }
        c.set_measured(self.measured.clone())?;
        Ok(c)
    }
}

pub fn read_circuit(json: &str) -> Result<Circuit> {
    serde_json::from_str::<CircuitFile>(json)?.to_circuit()
}

pub fn write_circuit(circuit: &Circuit) -> Result<String> {
    to_json(&CircuitFile::from_circuit(circuit)?)
}

// ------------------------------------------------------------------- noise

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedSelector {
    #[serde(rename = "all_2q")]
    AllTwoQubit,
    #[serde(rename = "measurement")]
    Measurement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SelectorRecord {
    Named(NamedSelector),
    Ops { ops: Vec<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Depolarizing,
    ReadoutFlip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseRuleRecord {
    pub selector: SelectorRecord,
    pub kind: ChannelKind,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseFile {
    pub rules: Vec<NoiseRuleRecord>,
}

impl NoiseFile {
    pub fn to_model(&self) -> Result<NoiseModel> {
        let mut model = NoiseModel::new();
        for (index, r) in self.rules.iter().enumerate() {
            let selector = match &r.selector {
                SelectorRecord::Named(NamedSelector::AllTwoQubit) => SiteSelector::AllTwoQubit,
                SelectorRecord::Named(NamedSelector::Measurement) => SiteSelector::Measurement,
                SelectorRecord::Ops { ops } => SiteSelector::Ops(ops.clone()),
            };
            let channel = match (r.kind, &selector) {
                (ChannelKind::Depolarizing, SiteSelector::Measurement) => {
                    return Err(FormatError::NoiseRule { index, message: "depolarizing noise needs gate sites" })
                }
                (ChannelKind::ReadoutFlip, SiteSelector::Measurement) => ChannelSpec::ReadoutFlip(r.p),
                (ChannelKind::ReadoutFlip, _) => {
                    return Err(FormatError::NoiseRule {
                        index,
                        message: "readout_flip needs the measurement selector",
                    })
                }
                (ChannelKind::Depolarizing, _) => ChannelSpec::Depolarizing(r.p),
            };
            model = model.with_rule(selector, channel);
        }
        Ok(model)
    }

    pub fn from_model(model: &NoiseModel) -> Result<Self> {
        let rules = model
            .rules()
            .iter()
            .enumerate()
            .map(|(index, rule)| {
                let selector = match &rule.selector {
                    SiteSelector::AllTwoQubit => SelectorRecord::Named(NamedSelector::AllTwoQubit),
                    SiteSelector::Measurement => SelectorRecord::Named(NamedSelector::Measurement),
                    SiteSelector::Ops(ops) => SelectorRecord::Ops { ops: ops.clone() },
                };
                let (kind, p) = match rule.channel {
                    ChannelSpec::Depolarizing(p) => (ChannelKind::Depolarizing, p),
                    ChannelSpec::ReadoutFlip(p) => (ChannelKind::ReadoutFlip, p),
                    ChannelSpec::Kraus(_) => {
                        return Err(FormatError::NoiseRule {
                            index,
                            message: "explicit Kraus channels have no file form",
                        })
                    }
                };
                Ok(NoiseRuleRecord { selector, kind, p })
            })
            .collect::<Result<_>>()?;
        Ok(Self { rules })
    }
}

pub fn read_noise(json: &str) -> Result<NoiseModel> {
    serde_json::from_str::<NoiseFile>(json)?.to_model()
}

pub fn write_noise(model: &NoiseModel) -> Result<String> {
    to_json(&NoiseFile::from_model(model)?)
}

/// Post-selection predicates that can be named on the command line or stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredicateRecord {
    Parity { positions: Vec<usize>, odd: bool },
    Strings { accept: Vec<String> },
}

impl PredicateRecord {
    pub fn to_predicate(&self) -> Result<PostSelectionPredicate> {
        Ok(match self {
            Self::Parity { positions, odd } => {
                PostSelectionPredicate::Parity { positions: positions.clone(), odd: *odd }
            }
            Self::Strings { accept } => {
                PostSelectionPredicate::StringSet(accept.iter().map(|s| parse_z(s)).collect::<Result<BTreeSet<_>>>()?)
            }
        })
    }
}

// -------------------------------------------------------------------- plan

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanSiteRecord {
    /// `null` for readout sites.
    pub op_index: Option<usize>,
    #[serde(rename = "A_gate")]
    pub a_gate: f64,
    pub n_terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanFile {
    #[serde(rename = "A")]
    pub a: f64,
    pub sites: Vec<PlanSiteRecord>,
    pub mode: String,
}

impl From<&PlanSummary> for PlanFile {
    fn from(s: &PlanSummary) -> Self {
        Self {
            a: s.a,
            sites: s
                .sites
                .iter()
                .map(|x| PlanSiteRecord { op_index: x.op_index, a_gate: x.a_gate, n_terms: x.n_terms })
                .collect(),
            mode: s.mode.to_string(),
        }
    }
}

pub fn write_plan(summary: &PlanSummary) -> Result<String> {
    to_json(&PlanFile::from(summary))
}

// --------------------------------------------------------------- histogram

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramEntry {
    pub z: String,
    pub n_plus: u64,
    pub n_minus: u64,
    /// Direct estimate `A (n_plus − n_minus) / n_cir`.
    pub p_em: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramFile {
    #[serde(rename = "A")]
    pub a: f64,
    pub n_bits: usize,
    pub n_cir: u64,
    /// Runs rejected by post-selection.
    #[serde(default)]
    pub n_zero: u64,
    pub entries: Vec<HistogramEntry>,
}

impl HistogramFile {
    pub fn from_histogram(hist: &SignedHistogram, a: f64) -> Result<Self> {
        let est = direct_estimate(hist, a)?;
        let entries = hist
            .iter()
            .map(|(z, c)| {
                let e = est.get(z);
                HistogramEntry { z: z.to_string(), n_plus: c.plus, n_minus: c.minus, p_em: e.value, stderr: e.stderr }
            })
            .collect();
        Ok(Self { a, n_bits: hist.n_bits(), n_cir: hist.n_cir(), n_zero: hist.n_zero(), entries })
    }

    /// Rebuilds the histogram; `n_cir` must equal the entry counts plus `n_zero`.
    pub fn to_histogram(&self) -> Result<SignedHistogram> {
        let counts = self
            .entries
            .iter()
            .map(|e| Ok((parse_z(&e.z)?, Counts { plus: e.n_plus, minus: e.n_minus })))
            .collect::<Result<Vec<_>>>()?;
        let hist = SignedHistogram::from_counts(self.n_bits, counts, self.n_zero)?;
        if hist.n_cir() != self.n_cir {
            return Err(FormatError::Histogram(format!(
                "n_cir is {} but the entries and n_zero add up to {}",
                self.n_cir,
                hist.n_cir()
            )));
        }
        Ok(hist)
    }
}

pub fn read_histogram(json: &str) -> Result<(SignedHistogram, f64)> {
    let file: HistogramFile = serde_json::from_str(json)?;
    Ok((file.to_histogram()?, file.a))
}

pub fn write_histogram(hist: &SignedHistogram, a: f64) -> Result<String> {
    to_json(&HistogramFile::from_histogram(hist, a)?)
}

// ------------------------------------------------------------ distributions

/// One row of the plotting CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub z: String,
    pub p_ideal: f64,
    pub p_noisy: f64,
    pub p_em: f64,
    pub stderr: f64,
}

/// Dense distributions over all strings, indexed by string value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionsFile {
    pub n_bits: usize,
    pub strings: Vec<String>,
    pub ideal: Vec<f64>,
    pub noisy: Vec<f64>,
    /// Exact expectation of the direct estimator.
    pub exact_em: Vec<f64>,
    pub direct: Vec<f64>,
    pub sampling: Option<Vec<f64>>,
    pub clipped: Option<Vec<f64>>,
    /// Standard error of the direct estimate.
    pub stderr: Vec<f64>,
}

impl DistributionsFile {
    pub fn rows(&self) -> Vec<DistributionRow> {
        (0..self.strings.len())
            .map(|i| DistributionRow {
                z: self.strings[i].clone(),
                p_ideal: self.ideal[i],
                p_noisy: self.noisy[i],
                p_em: self.direct[i],
                stderr: self.stderr[i],
            })
            .collect()
    }
}

pub fn write_distribution_csv(rows: &[DistributionRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| FormatError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn read_distribution_csv(text: &str) -> Result<Vec<DistributionRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

pub fn write_distributions(d: &DistributionsFile) -> Result<String> {
    to_json(d)
}

// ----------------------------------------------------------------- metrics

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub tse: f64,
    pub tvd: f64,
    pub total_variance_bounds: Option<[f64; 2]>,
    pub bias_sq_bound: f64,
}

impl From<&ErrorMetrics> for MetricsRecord {
    fn from(m: &ErrorMetrics) -> Self {
        let (lo, hi) = m.total_variance_bounds;
        Self {
            tse: m.tse,
            tvd: m.tvd,
            total_variance_bounds: (hi > 0.0).then_some([lo, hi]),
            bias_sq_bound: m.bias_sq_bound,
        }
    }
}

/// Metrics of every distribution against the ideal one and against the
/// exact target of each estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    #[serde(rename = "A")]
    pub a: f64,
    pub n_cir: u64,
    pub vs_ideal: MetricsSet,
    pub vs_exact: MetricsSet,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsSet {
    pub noisy: MetricsRecord,
    pub direct: MetricsRecord,
    pub sampling: Option<MetricsRecord>,
    pub clipped: Option<MetricsRecord>,
}

pub fn write_metrics(m: &MetricsFile) -> Result<String> {
    to_json(m)
}

// ---------------------------------------------------------------- decisions

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PolicyRecord {
    Frequentist { alpha: f64 },
    Bayesian { p_b: f64 },
    Fixed { p_th: f64 },
}

impl From<ThresholdPolicy> for PolicyRecord {
    fn from(p: ThresholdPolicy) -> Self {
        match p {
            ThresholdPolicy::Frequentist { alpha } => Self::Frequentist { alpha },
            ThresholdPolicy::Bayesian { p_b } => Self::Bayesian { p_b },
            ThresholdPolicy::Fixed { p_th } => Self::Fixed { p_th },
        }
    }
}

impl PolicyRecord {
    pub fn to_policy(self) -> Result<ThresholdPolicy> {
        let p = match self {
            Self::Frequentist { alpha } => ThresholdPolicy::Frequentist { alpha },
            Self::Bayesian { p_b } => ThresholdPolicy::Bayesian { p_b },
            Self::Fixed { p_th } => ThresholdPolicy::Fixed { p_th },
        };
        Ok(p.validated()?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub tested: String,
    pub value: f64,
    pub stderr: f64,
    pub threshold: f64,
    pub verdict: String,
}

impl From<&AuditEntry> for AuditRecord {
    fn from(e: &AuditEntry) -> Self {
        Self {
            tested: e.tested.to_string(),
            value: e.value,
            stderr: e.stderr,
            threshold: e.threshold,
            verdict: e.verdict.name().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub method: String,
    pub policy: PolicyRecord,
    /// `null` when no string rejected the null hypothesis.
    pub z_min: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub audit: Vec<AuditRecord>,
    /// The string the interval refers to.
    pub interval_for: Option<String>,
    /// `[lo, hi]`: fixed thresholds `lo ≤ p_th < hi` that return `interval_for`.
    /// `hi` is `null` when unbounded.
    pub valid_interval: Option<(f64, Option<f64>)>,
}

impl DecisionReport {
    pub fn new(result: &MinStringResult, interval: Option<(Bitstring, ThresholdInterval)>) -> Self {
        let mut r = Self {
            method: result.method.name().to_string(),
            policy: result.policy.into(),
            z_min: Some(result.z_min.to_string()),
            error: None,
            audit: result.audit.iter().map(AuditRecord::from).collect(),
            interval_for: None,
            valid_interval: None,
        };
        r.set_interval(interval);
        r
    }

    /// Report for a run in which every null was accepted.
    pub fn failed(method: &str, policy: ThresholdPolicy, error: String) -> Self {
        Self {
            method: method.to_string(),
            policy: policy.into(),
            z_min: None,
            error: Some(error),
            audit: Vec::new(),
            interval_for: None,
            valid_interval: None,
        }
    }

    pub fn set_interval(&mut self, interval: Option<(Bitstring, ThresholdInterval)>) {
        if let Some((z, iv)) = interval {
            self.interval_for = Some(z.to_string());
            self.valid_interval = Some((iv.lo, iv.hi.is_finite().then_some(iv.hi)));
        }
    }

    pub fn rejected(&self) -> usize {
        self.audit.iter().filter(|a| a.verdict == Verdict::RejectNull.name()).count()
    }
}

pub fn read_decision(json: &str) -> Result<DecisionReport> {
    Ok(serde_json::from_str(json)?)
}

pub fn write_decision(report: &DecisionReport) -> Result<String> {
    to_json(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qem_core::circuit::{demo_spectrum, qpe_circuit, EigenphaseSpec};
    use qem_core::mitigation::{ResponseSample, Sign};

    #[test]
    fn circuit_round_trip() {
        let q = qpe_circuit(3, &EigenphaseSpec::Spectrum(demo_spectrum())).unwrap();
        let text = write_circuit(&q.circuit).unwrap();
        let back = read_circuit(&text).unwrap();
        assert_eq!(back.ops(), q.circuit.ops());
        assert_eq!(write_circuit(&back).unwrap(), text);
    }

    #[test]
    fn circuit_schema_errors() {
        assert!(matches!(
            read_circuit(r#"{"version": 2, "n_qubits": 1, "ops": [], "measured": [0]}"#),
            Err(FormatError::Version(2))
        ));
        let bad_gate = r#"{"version": 1, "n_qubits": 1, "ops": [{"gate": "ccx", "targets": [0]}], "measured": [0]}"#;
        assert!(matches!(read_circuit(bad_gate), Err(FormatError::Core(_))));
        let extra = r#"{"version": 1, "n_qubits": 1, "ops": [], "measured": [0], "colour": 3}"#;
        assert!(matches!(read_circuit(extra), Err(FormatError::Json(_))));
    }

    #[test]
    fn noise_selectors() {
        let text = r#"{"rules": [
            {"selector": "all_2q", "kind": "depolarizing", "p": 0.1},
            {"selector": {"ops": [3, 4]}, "kind": "depolarizing", "p": 0.2},
            {"selector": "measurement", "kind": "readout_flip", "p": 0.02}
        ]}"#;
        let model = read_noise(text).unwrap();
        assert_eq!(model.rules().len(), 3);
        assert_eq!(model.rules()[1].selector, SiteSelector::Ops(vec![3, 4]));
        assert_eq!(read_noise(&write_noise(&model).unwrap()).unwrap(), model);

        let wrong = r#"{"rules": [{"selector": "all_2q", "kind": "readout_flip", "p": 0.1}]}"#;
        assert!(matches!(read_noise(wrong), Err(FormatError::NoiseRule { index: 0, .. })));
    }

    #[test]
    fn histogram_round_trip_is_lossless() {
        let z = |s: &str| s.parse::<Bitstring>().unwrap();
        let samples = [
            ResponseSample { z: z("011"), sign: Sign::Plus },
            ResponseSample { z: z("011"), sign: Sign::Minus },
            ResponseSample { z: z("100"), sign: Sign::Plus },
            ResponseSample { z: z("111"), sign: Sign::Zero },
        ];
        let hist = SignedHistogram::accumulate(3, samples);
        let a = 1.2238805970149254;
        let text = write_histogram(&hist, a).unwrap();
        let (back, a_back) = read_histogram(&text).unwrap();
        assert_eq!(back, hist);
        assert_eq!(a_back, a);
        assert_eq!(write_histogram(&back, a_back).unwrap(), text);

        let tampered = text.replace("\"n_cir\": 4", "\"n_cir\": 5");
        assert!(matches!(read_histogram(&tampered), Err(FormatError::Histogram(_))));
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            DistributionRow { z: "00".into(), p_ideal: 0.5, p_noisy: 0.1 + 0.2, p_em: -1e-17, stderr: 0.0 },
            DistributionRow { z: "01".into(), p_ideal: 0.5, p_noisy: 0.7, p_em: 1.0 / 3.0, stderr: 2.5e-3 },
        ];
        let text = write_distribution_csv(&rows).unwrap();
        assert!(text.starts_with("z,p_ideal,p_noisy,p_em,stderr\n"));
        assert_eq!(read_distribution_csv(&text).unwrap(), rows);
    }

    #[test]
    fn policy_records() {
        let json = serde_json::to_string(&PolicyRecord::from(ThresholdPolicy::Bayesian { p_b: 0.06 })).unwrap();
        assert_eq!(json, r#"{"kind":"bayesian","p_b":0.06}"#);
        let back: PolicyRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_policy().unwrap(), ThresholdPolicy::Bayesian { p_b: 0.06 });
        assert!(PolicyRecord::Fixed { p_th: -1.0 }.to_policy().is_err());
    }
}
