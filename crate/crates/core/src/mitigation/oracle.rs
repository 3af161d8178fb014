use alloc::vec::Vec;

use super::plan::MitigationPlan;
use crate::circuit::run_density;
use crate::{Bitstring, Result};

/// Exact per-string response rates `r_{z,+}`, `r_{z,−}` and `r_{z,0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseRates {
    n_bits: usize,
    normalization: f64,
    plus: Vec<f64>,
    minus: Vec<f64>,
    zero: Vec<f64>,
}

fn clamp_rate(x: f64) -> f64 {
    if x < 0.0 && x > -1e-12 {
        0.0
    } else {
        x
    }
}

/// Computes response rates with two density-matrix runs: the signed map
/// `Σ α_i Q_i·C(·)·Q_i` at every site gives `p_em`, the absolute map with
/// weights `|α_i| / A_gate` gives `r_z`, and `r_{z,±} = (r_z ± p_em / A) / 2`.
pub fn exact_response_rates(plan: &MitigationPlan) -> Result<ResponseRates> {
    let circuit = plan.circuit();
    let run = |signed: bool| {
        run_density(circuit, plan.sites(), |k, site, rho| {
            let channel = site.channel.superoperator();
            let s = match &plan.decompositions()[k] {
                Some(d) => d.superoperator(signed).mul(&channel),
                None => channel,
            };
            rho.apply_superoperator(&s, &site.targets);
            Ok(())
        })
        .map(|rho| rho.raw_distribution(circuit.measured()))
    };
    let p_em = run(true)?;
    let r = if plan.mode().uses_pec() { run(false)? } else { p_em.clone() };
    let a = plan.normalization();
    let n_bits = plan.n_bits();
    let mut plus: Vec<f64> = r.iter().zip(&p_em).map(|(r, p)| clamp_rate((r + p / a) / 2.0)).collect();
    let mut minus: Vec<f64> = r.iter().zip(&p_em).map(|(r, p)| clamp_rate((r - p / a) / 2.0)).collect();
    let mut zero = alloc::vec![0.0; r.len()];
    if let Some(pred) = plan.mode().predicate() {
        for z in Bitstring::all(n_bits) {
            let i = z.value() as usize;
            if !pred.accepts(z) {
                zero[i] = plus[i] + minus[i];
                plus[i] = 0.0;
                minus[i] = 0.0;
            }
        }
    }
    Ok(ResponseRates { n_bits, normalization: a, plus, minus, zero })
}

impl ResponseRates {
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn r_plus(&self, z: Bitstring) -> f64 {
        self.plus[z.value() as usize]
    }

    pub fn r_minus(&self, z: Bitstring) -> f64 {
        self.minus[z.value() as usize]
    }

    pub fn r_zero(&self, z: Bitstring) -> f64 {
        self.zero[z.value() as usize]
    }

    /// `r_z = r_{z,+} + r_{z,−}`.
    pub fn r_z(&self, z: Bitstring) -> f64 {
        self.r_plus(z) + self.r_minus(z)
    }

    pub fn plus(&self) -> &[f64] {
        &self.plus
    }

    pub fn minus(&self) -> &[f64] {
        &self.minus
    }

    pub fn zero(&self) -> &[f64] {
        &self.zero
    }

    /// `A (r_{z,+} − r_{z,−})` for every `z`: the expectation of the direct estimator.
    pub fn mitigated(&self) -> Vec<f64> {
        self.plus.iter().zip(&self.minus).map(|(p, m)| self.normalization * (p - m)).collect()
    }

    /// The mitigated distribution renormalized over accepted strings, i.e. the
    /// expectation limit of the sampling estimator.
    pub fn renormalized(&self) -> Vec<f64> {
        let m = self.mitigated();
        let total: f64 = m.iter().sum();
        m.iter().map(|x| x / total).collect()
    }

    /// Probability that a draw is rejected by post-selection.
    pub fn rejection_probability(&self) -> f64 {
        self.zero.iter().sum()
    }

    /// Exact `Σ_z Var[p̂_em(z)]` of the direct estimator after `n_cir` runs:
    /// `Σ_z (A² r_z − (A (r_{z,+} − r_{z,−}))²) / n_cir`.
    pub fn exact_total_variance(&self, n_cir: u64) -> f64 {
        let a2 = self.normalization * self.normalization;
        let m = self.mitigated();
        (0..self.plus.len()).map(|i| a2 * (self.plus[i] + self.minus[i]) - m[i] * m[i]).sum::<f64>() / n_cir as f64
    }

    /// Exact variance of `p̂_em(z)` after `n_cir` runs.
    pub fn exact_variance(&self, z: Bitstring, n_cir: u64) -> f64 {
        let a = self.normalization;
        let m = a * (self.r_plus(z) - self.r_minus(z));
        (a * a * self.r_z(z) - m * m) / n_cir as f64
    }
}
