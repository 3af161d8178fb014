use alloc::vec::Vec;

use super::Circuit;
use crate::quantum::KrausChannel;
use crate::{Error, Result};

/// Which parts of a circuit a noise rule attaches to.
#[derive(Clone, Debug, PartialEq)]
pub enum SiteSelector {
    /// Every two-qubit gate.
    AllTwoQubit,
    /// The listed operation indices.
    Ops(Vec<usize>),
    /// Each measured qubit, just before readout.
    Measurement,
}

/// The channel a rule inserts.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    /// Depolarizing on all qubits of the selected gate.
    Depolarizing(f64),
    /// Independent bit flip with probability `q` on each measured qubit.
    ReadoutFlip(f64),
    /// An explicit channel; its arity must match every selected gate.
    Kraus(KrausChannel),
}

impl ChannelSpec {
    fn channel(&self, arity: usize) -> Result<KrausChannel> {
        match self {
            Self::Depolarizing(p) => KrausChannel::depolarizing(arity, *p),
            Self::ReadoutFlip(q) => {
                if arity != 1 {
                    return Err(Error::InvalidNoiseRule("readout flips act on single qubits"));
                }
                KrausChannel::measurement_bitflip(*q)
            }
            Self::Kraus(ch) => {
                if ch.arity() != arity {
                    return Err(Error::ArityMismatch { expected: arity, got: ch.arity() });
                }
                Ok(ch.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoiseRule {
    pub selector: SiteSelector,
    pub channel: ChannelSpec,
}

/// Where a resolved channel acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SiteLocation {
    /// Right after operation `i`.
    AfterOp(usize),
    /// After the last gate, before readout.
    Measurement,
}

/// A channel placed in a specific circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseSite {
    pub location: SiteLocation,
    pub targets: Vec<usize>,
    pub channel: KrausChannel,
}

impl NoiseSite {
    pub fn op_index(&self) -> Option<usize> {
        match self.location {
            SiteLocation::AfterOp(i) => Some(i),
            SiteLocation::Measurement => None,
        }
    }
}

/// A list of noise rules, resolved against a circuit on demand.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NoiseModel {
    rules: Vec<NoiseRule>,
}

impl NoiseModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_rule(mut self, selector: SiteSelector, channel: ChannelSpec) -> Self {
        self.rules.push(NoiseRule { selector, channel });
        self
    }

    pub fn rules(&self) -> &[NoiseRule] {
        &self.rules
    }

    /// Depolarizing with strength `p` after each listed operation.
    pub fn depolarizing_on(ops: Vec<usize>, p: f64) -> Self {
        Self::new().with_rule(SiteSelector::Ops(ops), ChannelSpec::Depolarizing(p))
    }

    pub fn readout(q: f64) -> Self {
        Self::new().with_rule(SiteSelector::Measurement, ChannelSpec::ReadoutFlip(q))
    }

    /// Sites in circuit order; several rules on one gate keep rule order.
    pub fn resolve(&self, circuit: &Circuit) -> Result<Vec<NoiseSite>> {
        let mut sites = Vec::new();
        for rule in &self.rules {
            match &rule.selector {
                SiteSelector::AllTwoQubit => {
                    for i in circuit.two_qubit_op_indices() {
                        sites.push(gate_site(circuit, i, &rule.channel)?);
                    }
                }
                SiteSelector::Ops(indices) => {
                    for &i in indices {
                        sites.push(gate_site(circuit, i, &rule.channel)?);
                    }
                }
                SiteSelector::Measurement => {
                    for &q in circuit.measured() {
                        let channel = rule.channel.channel(1)?;
                        sites.push(NoiseSite { location: SiteLocation::Measurement, targets: alloc::vec![q], channel });
                    }
                }
            }
        }
        sites.sort_by_key(|s| s.location);
        Ok(sites)
    }

    /// Number of gate sites `M` (readout sites excluded).
    pub fn noisy_gate_count(&self, circuit: &Circuit) -> Result<usize> {
        Ok(self.resolve(circuit)?.iter().filter(|s| s.op_index().is_some()).count())
    }

    /// Expected number of gate faults per run, `Σ p = M·p` for a uniform rate.
    /// Sites without a defined fault probability count as zero.
    pub fn circuit_fault_rate(&self, circuit: &Circuit) -> Result<f64> {
        Ok(self
            .resolve(circuit)?
            .iter()
            .filter(|s| s.op_index().is_some())
            .filter_map(|s| s.channel.error_probability())
            .sum())
    }
}

fn gate_site(circuit: &Circuit, index: usize, spec: &ChannelSpec) -> Result<NoiseSite> {
    let op = circuit.ops().get(index).ok_or(Error::NoSuchOperation(index))?;
    let channel = spec.channel(op.targets.len())?;
    Ok(NoiseSite { location: SiteLocation::AfterOp(index), targets: op.targets.clone(), channel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::UnitaryGate;

    fn toy() -> Circuit {
        let mut c = Circuit::new(3).unwrap();
        c.push(UnitaryGate::h(), &[0]).unwrap();
        c.push(UnitaryGate::cx(), &[0, 1]).unwrap();
        c.push(UnitaryGate::cz(), &[1, 2]).unwrap();
        c
    }

    #[test]
    fn all_two_qubit_resolves_to_gate_sites() {
        let c = toy();
        let noise = NoiseModel::new().with_rule(SiteSelector::AllTwoQubit, ChannelSpec::Depolarizing(0.05));
        let sites = noise.resolve(&c).unwrap();
        assert_eq!(sites.len(), 2);
        assert_eq!(sites[0].location, SiteLocation::AfterOp(1));
        assert_eq!(sites[1].targets, [1, 2]);
        assert_eq!(noise.noisy_gate_count(&c).unwrap(), 2);
        assert!((noise.circuit_fault_rate(&c).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn measurement_sites_follow_gates() {
        let c = toy();
        let noise =
            NoiseModel::readout(0.02).with_rule(SiteSelector::Ops(alloc::vec![0]), ChannelSpec::Depolarizing(0.1));
        let sites = noise.resolve(&c).unwrap();
        assert_eq!(sites.len(), 4);
        assert_eq!(sites[0].location, SiteLocation::AfterOp(0));
        assert!(sites[1..].iter().all(|s| s.location == SiteLocation::Measurement));
        assert_eq!(noise.noisy_gate_count(&c).unwrap(), 1);
    }

    #[test]
    fn bad_rules_are_rejected() {
        let c = toy();
        let missing = NoiseModel::depolarizing_on(alloc::vec![7], 0.1);
        assert_eq!(missing.resolve(&c).unwrap_err(), Error::NoSuchOperation(7));
        let arity = NoiseModel::new().with_rule(
            SiteSelector::Ops(alloc::vec![1]),
            ChannelSpec::Kraus(KrausChannel::depolarizing(1, 0.1).unwrap()),
        );
        assert!(arity.resolve(&c).is_err());
        let readout_on_gate = NoiseModel::new().with_rule(SiteSelector::AllTwoQubit, ChannelSpec::ReadoutFlip(0.1));
        assert!(readout_on_gate.resolve(&c).is_err());
        assert!(NoiseModel::depolarizing_on(alloc::vec![1], 1.5).resolve(&c).is_err());
    }
}
