use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::plan::MitigationPlan;
use crate::circuit::{ShotSampler, SiteLocation};
use crate::quantum::{marginal_distribution, PauliString, StateVector};
use crate::{Bitstring, Error, Result};

/// Upper bound on cached per-configuration output distributions per sampler.
const CACHE_LIMIT: usize = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Self::Minus => -1,
            Self::Zero => 0,
            Self::Plus => 1,
        }
    }
}

/// One response-circuit outcome `(z, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResponseSample {
    pub z: Bitstring,
    pub sign: Sign,
}

/// Joint distribution of (fault Pauli ∘ correction Pauli, correction sign) at one site.
#[derive(Clone, Debug)]
struct SiteTable {
    arity: usize,
    outcomes: Vec<(u8, bool)>,
    index: WeightedIndex<f64>,
}

#[derive(Clone, Debug)]
struct Trajectories {
    tables: Vec<SiteTable>,
    /// Operation after which each site acts; `None` means before readout.
    after_op: Vec<Option<usize>>,
    prefix: StateVector,
    start_op: usize,
    cache: BTreeMap<Vec<u8>, WeightedIndex<f64>>,
    key: Vec<u8>,
}

#[derive(Clone, Debug)]
enum Engine {
    Exact(ShotSampler),
    Trajectories(Trajectories),
}

/// Draws signed response samples for a plan.
///
/// With PEC, Pauli faults and Pauli corrections are sampled per site and the
/// resulting pure-state trajectory is simulated. Output distributions are
/// cached per Pauli configuration; the random stream consumed per shot does
/// not depend on the cache. Without PEC the exact noisy distribution is
/// sampled directly, which also covers non-Pauli noise.
#[derive(Clone, Debug)]
pub struct ResponseSampler<'a> {
    plan: &'a MitigationPlan,
    engine: Engine,
}

impl<'a> ResponseSampler<'a> {
    pub fn new(plan: &'a MitigationPlan) -> Result<Self> {
        let engine = if plan.mode().uses_pec() && !plan.sites().is_empty() {
            Engine::Trajectories(Trajectories::new(plan)?)
        } else {
            Engine::Exact(ShotSampler::new(plan.circuit(), Some(plan.noise()))?)
        };
        Ok(Self { plan, engine })
    }

    pub fn plan(&self) -> &MitigationPlan {
        self.plan
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> ResponseSample {
        let (z, negative) = match &mut self.engine {
            Engine::Exact(s) => (s.sample(rng), false),
            Engine::Trajectories(t) => t.sample(self.plan, rng),
        };
        let sign = match self.plan.mode().predicate() {
            Some(pred) if !pred.accepts(z) => Sign::Zero,
            _ if negative => Sign::Minus,
            _ => Sign::Plus,
        };
        ResponseSample { z, sign }
    }
}

/// Draws a single response sample. Rebuilds the sampler on every call; use
/// [`ResponseSampler`] for repeated draws.
pub fn draw_response_sample<R: Rng + ?Sized>(plan: &MitigationPlan, rng: &mut R) -> Result<ResponseSample> {
    Ok(ResponseSampler::new(plan)?.sample(rng))
}

impl Trajectories {
    fn new(plan: &MitigationPlan) -> Result<Self> {
        let mut tables = Vec::with_capacity(plan.sites().len());
        for (site, qpd) in plan.sites().iter().zip(plan.decompositions()) {
            let probs = site.channel.pauli_probabilities().ok_or(Error::NonPauliChannel)?;
            let arity = site.channel.arity();
            let mut joint: BTreeMap<(u8, bool), f64> = BTreeMap::new();
            for (fault, &c) in probs.iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                let fault = PauliString::from_index(fault, arity);
                match qpd {
                    Some(d) => {
                        for t in d.terms() {
                            let combined = fault.compose(t.correction).index() as u8;
                            let w = c * t.coefficient.abs() / d.normalization();
                            *joint.entry((combined, t.coefficient < 0.0)).or_insert(0.0) += w;
                        }
                    }
                    None => *joint.entry((fault.index() as u8, false)).or_insert(0.0) += c,
                }
            }
            let (outcomes, weights): (Vec<_>, Vec<_>) = joint.into_iter().unzip();
            let index = WeightedIndex::new(&weights).map_err(|_| Error::InvalidState("site has no mass"))?;
            tables.push(SiteTable { arity, outcomes, index });
        }
        let after_op: Vec<Option<usize>> = plan
            .sites()
            .iter()
            .map(|s| match s.location {
                SiteLocation::AfterOp(i) => Some(i),
                SiteLocation::Measurement => None,
            })
            .collect();
        let circuit = plan.circuit();
        let start_op = match after_op.first() {
            Some(Some(i)) => i + 1,
            _ => circuit.len(),
        };
        let mut prefix = StateVector::zero(circuit.n_qubits())?;
        circuit.apply_range(&mut prefix, 0..start_op);
        let key = alloc::vec![0; tables.len()];
        Ok(Self { tables, after_op, prefix, start_op, cache: BTreeMap::new(), key })
    }

    fn sample<R: Rng + ?Sized>(&mut self, plan: &MitigationPlan, rng: &mut R) -> (Bitstring, bool) {
        let mut negative = false;
        for (slot, table) in self.key.iter_mut().zip(&self.tables) {
            let (pauli, neg) = table.outcomes[table.index.sample(rng)];
            *slot = pauli;
            negative ^= neg;
        }
        let n_bits = plan.n_bits();
        let value = match self.cache.get(self.key.as_slice()) {
            Some(dist) => dist.sample(rng),
            None => {
                let dist = self.output_distribution(plan);
                let v = dist.sample(rng);
                if self.cache.len() < CACHE_LIMIT {
                    self.cache.insert(self.key.clone(), dist);
                }
                v
            }
        };
        (Bitstring::new(value as u64, n_bits).expect("fits register"), negative)
    }

    fn output_distribution(&self, plan: &MitigationPlan) -> WeightedIndex<f64> {
        let circuit = plan.circuit();
        let sites = plan.sites();
        let mut state = self.prefix.clone();
        let apply_site = |state: &mut StateVector, k: usize| {
            let pauli = self.key[k];
            if pauli != 0 {
                let m = PauliString::from_index(pauli as usize, self.tables[k].arity).matrix();
                state.apply_matrix(&m, &sites[k].targets);
            }
        };
        let mut next = 0;
        while next < sites.len() && self.after_op[next].is_some_and(|i| i + 1 == self.start_op) {
            apply_site(&mut state, next);
            next += 1;
        }
        for i in self.start_op..circuit.len() {
            circuit.apply_range(&mut state, i..i + 1);
            while next < sites.len() && self.after_op[next] == Some(i) {
                apply_site(&mut state, next);
                next += 1;
            }
        }
        for k in next..sites.len() {
            apply_site(&mut state, k);
        }
        let amps = state.amplitudes();
        let probs = marginal_distribution(circuit.n_qubits(), circuit.measured(), |i| amps[i].norm_sqr());
        WeightedIndex::new(&probs).expect("trajectory states are normalized")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, NoiseModel};
    use crate::mitigation::{plan_pec, MitigationMode, PostSelectionPredicate};
    use crate::quantum::UnitaryGate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell() -> Circuit {
        let mut c = Circuit::new(2).unwrap();
        c.push(UnitaryGate::h(), &[0]).unwrap();
        c.push(UnitaryGate::cx(), &[0, 1]).unwrap();
        c
    }

    #[test]
    fn noiseless_plan_always_positive() {
        let plan = plan_pec(&bell(), &NoiseModel::new(), MitigationMode::Pec).unwrap();
        let mut s = ResponseSampler::new(&plan).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let r = s.sample(&mut rng);
            assert_eq!(r.sign, Sign::Plus);
            assert!(r.z.value() == 0 || r.z.value() == 3);
        }
    }

    #[test]
    fn rejecting_predicate_zeroes_every_sign() {
        let noise = NoiseModel::depolarizing_on(alloc::vec![1], 0.1);
        let pred = PostSelectionPredicate::custom(|_| false);
        let plan = plan_pec(&bell(), &noise, MitigationMode::PecWithPostselect(pred)).unwrap();
        let mut s = ResponseSampler::new(&plan).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!((0..500).all(|_| s.sample(&mut rng).sign == Sign::Zero));
    }

    #[test]
    fn sign_zero_needs_predicate() {
        let noise = NoiseModel::depolarizing_on(alloc::vec![1], 0.2);
        let plan = plan_pec(&bell(), &noise, MitigationMode::Pec).unwrap();
        let mut s = ResponseSampler::new(&plan).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let signs: Vec<Sign> = (0..2000).map(|_| s.sample(&mut rng).sign).collect();
        assert!(!signs.contains(&Sign::Zero));
        assert!(signs.contains(&Sign::Minus));
    }

    #[test]
    fn cache_does_not_change_the_stream() {
        let noise = NoiseModel::depolarizing_on(alloc::vec![1], 0.2);
        let plan = plan_pec(&bell(), &noise, MitigationMode::Pec).unwrap();
        let mut warm = ResponseSampler::new(&plan).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            warm.sample(&mut rng);
        }
        let mut cold = ResponseSampler::new(&plan).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(2);
        let mut b = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            assert_eq!(warm.sample(&mut a), cold.sample(&mut b));
        }
    }
}
