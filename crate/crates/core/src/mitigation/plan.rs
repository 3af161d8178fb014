use alloc::vec::Vec;

use super::predicate::PostSelectionPredicate;
use super::qpd::{invert_channel, QuasiProbabilityDecomposition};
use crate::circuit::{Circuit, NoiseModel, NoiseSite};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum MitigationMode {
    /// Plain noisy sampling.
    None,
    Pec,
    /// PEC with the sign multiplied by the predicate's 0/1 factor.
    PecWithPostselect(PostSelectionPredicate),
    PostselectOnly(PostSelectionPredicate),
}

impl MitigationMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Pec => "pec",
            Self::PecWithPostselect(_) => "pec_with_postselect",
            Self::PostselectOnly(_) => "postselect_only",
        }
    }

    pub fn uses_pec(&self) -> bool {
        matches!(self, Self::Pec | Self::PecWithPostselect(_))
    }

    pub fn predicate(&self) -> Option<&PostSelectionPredicate> {
        match self {
            Self::PecWithPostselect(p) | Self::PostselectOnly(p) => Some(p),
            _ => None,
        }
    }
}

/// A noisy circuit with a quasi-probability decomposition per inverted site.
#[derive(Clone, Debug)]
pub struct MitigationPlan {
    circuit: Circuit,
    noise: NoiseModel,
    sites: Vec<NoiseSite>,
    decompositions: Vec<Option<QuasiProbabilityDecomposition>>,
    normalization: f64,
    mode: MitigationMode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SiteSummary {
    /// `None` for readout sites.
    pub op_index: Option<usize>,
    pub a_gate: f64,
    pub n_terms: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanSummary {
    pub a: f64,
    pub sites: Vec<SiteSummary>,
    pub mode: &'static str,
}

/// Resolves the noise against the circuit and, in PEC modes, inverts every site.
pub fn plan_pec(circuit: &Circuit, noise: &NoiseModel, mode: MitigationMode) -> Result<MitigationPlan> {
    let sites = noise.resolve(circuit)?;
    if let Some(PostSelectionPredicate::Parity { positions, .. }) = mode.predicate() {
        let n_bits = circuit.measured().len();
        if let Some(&bad) = positions.iter().find(|&&k| k >= n_bits) {
            return Err(Error::QubitOutOfRange { index: bad, n_qubits: n_bits });
        }
    }
    let decompositions: Vec<Option<QuasiProbabilityDecomposition>> = if mode.uses_pec() {
        sites.iter().map(|s| invert_channel(&s.channel).map(Some)).collect::<Result<_>>()?
    } else {
        sites.iter().map(|_| None).collect()
    };
    let normalization = decompositions.iter().flatten().map(|d| d.normalization()).product();
    Ok(MitigationPlan { circuit: circuit.clone(), noise: noise.clone(), sites, decompositions, normalization, mode })
}

impl MitigationPlan {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn sites(&self) -> &[NoiseSite] {
        &self.sites
    }

    pub fn decompositions(&self) -> &[Option<QuasiProbabilityDecomposition>] {
        &self.decompositions
    }

    /// Global normalization `A = Π A_gate`; 1 without PEC.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn mode(&self) -> &MitigationMode {
        &self.mode
    }

    pub fn n_bits(&self) -> usize {
        self.circuit.measured().len()
    }

    /// Probability that a response circuit carries sign −1,
    /// `(1 − Π_g (p_+ − p_−)) / 2`, ignoring post-selection.
    pub fn minus_sign_probability(&self) -> f64 {
        let prod: f64 = self
            .decompositions
            .iter()
            .flatten()
            .map(|d| {
                let (plus, minus) = d.sign_probabilities();
                plus - minus
            })
            .product();
        (1.0 - prod) / 2.0
    }

    pub fn summary(&self) -> PlanSummary {
        let sites = self
            .sites
            .iter()
            .zip(&self.decompositions)
            .map(|(s, d)| SiteSummary {
                op_index: s.op_index(),
                a_gate: d.as_ref().map_or(1.0, |d| d.normalization()),
                n_terms: d.as_ref().map_or(1, |d| d.terms().len()),
            })
            .collect();
        PlanSummary { a: self.normalization, sites, mode: self.mode.name() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{demo_spectrum, qpe_circuit, EigenphaseSpec};
    use crate::quantum::UnitaryGate;

    fn chain(m: usize) -> Circuit {
        let mut c = Circuit::new(2).unwrap();
        for _ in 0..m {
            c.push(UnitaryGate::cx(), &[0, 1]).unwrap();
        }
        c
    }

    #[test]
    fn noiseless_plan_has_unit_normalization() {
        let c = chain(3);
        let plan = plan_pec(&c, &NoiseModel::new(), MitigationMode::Pec).unwrap();
        assert_eq!(plan.normalization(), 1.0);
        let zero = NoiseModel::depolarizing_on(alloc::vec![0, 1, 2], 0.0);
        assert_eq!(plan_pec(&c, &zero, MitigationMode::Pec).unwrap().normalization(), 1.0);
    }

    #[test]
    fn normalization_is_product_of_gate_factors() {
        let c = chain(5);
        let noise = NoiseModel::depolarizing_on((0..5).collect(), 0.07);
        let plan = plan_pec(&c, &noise, MitigationMode::Pec).unwrap();
        let gamma = plan.decompositions()[0].as_ref().unwrap().normalization();
        assert!((plan.normalization() - gamma.powi(5)).abs() < 1e-12);
        let unmitigated = plan_pec(&c, &noise, MitigationMode::None).unwrap();
        assert_eq!(unmitigated.normalization(), 1.0);
        assert_eq!(unmitigated.minus_sign_probability(), 0.0);
    }

    #[test]
    fn demo_normalization_regression() {
        let q = qpe_circuit(4, &EigenphaseSpec::Spectrum(demo_spectrum())).unwrap();
        let plan = plan_pec(&q.circuit, &q.default_noise(0.6).unwrap(), MitigationMode::Pec).unwrap();
        let summary = plan.summary();
        assert_eq!(summary.sites.len(), 6);
        assert!(summary.sites.iter().all(|s| s.n_terms == 16));
        assert!((plan.normalization() - 1.2238805970149254f64.powi(6)).abs() < 1e-9);
        assert!((plan.normalization() - 3.360735225797381).abs() < 1e-9);
        assert_eq!(summary.mode, "pec");
    }

    #[test]
    fn parity_positions_are_checked() {
        let mode =
            MitigationMode::PostselectOnly(PostSelectionPredicate::Parity { positions: alloc::vec![2], odd: false });
        assert!(plan_pec(&chain(1), &NoiseModel::new(), mode).is_err());
    }
}
