use core::fmt;
use core::str::FromStr;

use super::quantile::normal_quantile;
use crate::{Error, Result};

/// How the rejection threshold `p_th` is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThresholdPolicy {
    /// `p_th = z_{1−α} σ̂` (one-sided normal quantile, 1.645 at α = 0.05).
    Frequentist {
        alpha: f64,
    },
    /// `p_th = p_b / 2`, where `p_b` lower-bounds the weight of the smallest string.
    Bayesian {
        p_b: f64,
    },
    Fixed {
        p_th: f64,
    },
}

impl ThresholdPolicy {
    pub fn frequentist(alpha: f64) -> Result<Self> {
        Self::Frequentist { alpha }.validated()
    }

    pub fn bayesian(p_b: f64) -> Result<Self> {
        Self::Bayesian { p_b }.validated()
    }

    pub fn fixed(p_th: f64) -> Result<Self> {
        Self::Fixed { p_th }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            Self::Frequentist { alpha } => alpha > 0.0 && alpha <= 0.5,
            Self::Bayesian { p_b } => p_b > 0.0 && p_b <= 1.0,
            Self::Fixed { p_th } => p_th >= 0.0 && p_th.is_finite(),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidPolicy(match self {
                Self::Frequentist { .. } => "alpha must lie in (0, 0.5]",
                Self::Bayesian { .. } => "p_b must lie in (0, 1]",
                Self::Fixed { .. } => "p_th must be a non-negative number",
            }))
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Frequentist { .. } => "frequentist",
            Self::Bayesian { .. } => "bayesian",
            Self::Fixed { .. } => "fixed",
        }
    }

    /// The policy's single parameter (α, `p_b` or `p_th`).
    pub fn parameter(&self) -> f64 {
        match *self {
            Self::Frequentist { alpha } => alpha,
            Self::Bayesian { p_b } => p_b,
            Self::Fixed { p_th } => p_th,
        }
    }
}

/// The threshold for a test whose estimate has standard error `sigma_hat`.
pub fn threshold_for(policy: &ThresholdPolicy, sigma_hat: f64) -> f64 {
    match *policy {
        ThresholdPolicy::Frequentist { alpha } => normal_quantile(1.0 - alpha) * sigma_hat,
        ThresholdPolicy::Bayesian { p_b } => p_b / 2.0,
        ThresholdPolicy::Fixed { p_th } => p_th,
    }
}

/// Parses `kind:value`, e.g. `bayesian:0.06`, `frequentist:0.05`, `fixed:0.1`.
impl FromStr for ThresholdPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s.split_once(':').ok_or(Error::InvalidPolicy("expected kind:value"))?;
        let value: f64 = value.trim().parse().map_err(|_| Error::InvalidPolicy("value is not a number"))?;
        match kind.trim() {
            "frequentist" => Self::frequentist(value),
            "bayesian" => Self::bayesian(value),
            "fixed" => Self::fixed(value),
            _ => Err(Error::InvalidPolicy("kind must be frequentist, bayesian or fixed")),
        }
    }
}

impl fmt::Display for ThresholdPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind(), self.parameter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let f = ThresholdPolicy::frequentist(0.05).unwrap();
        assert!((threshold_for(&f, 0.01) - 0.016448536269514722).abs() < 1e-15);
        // Within rounding of the textbook 1.65 σ̂.
        assert!((threshold_for(&f, 0.01) - 0.0165).abs() < 1e-4);
        assert_eq!(threshold_for(&ThresholdPolicy::bayesian(0.06).unwrap(), 0.3), 0.03);
        assert_eq!(threshold_for(&ThresholdPolicy::fixed(0.1).unwrap(), 0.0), 0.1);
        assert_eq!(threshold_for(&ThresholdPolicy::fixed(0.1).unwrap(), 7.0), 0.1);
    }

    #[test]
    fn validation_and_parsing() {
        assert!(ThresholdPolicy::frequentist(0.0).is_err());
        assert!(ThresholdPolicy::frequentist(0.6).is_err());
        assert!(ThresholdPolicy::bayesian(0.0).is_err());
        assert!(ThresholdPolicy::fixed(-0.1).is_err());
        let p: ThresholdPolicy = "bayesian:0.06".parse().unwrap();
        assert_eq!(p, ThresholdPolicy::Bayesian { p_b: 0.06 });
        assert_eq!(alloc::string::ToString::to_string(&p), "bayesian:0.06");
        assert!("bayes:0.1".parse::<ThresholdPolicy>().is_err());
        assert!("fixed".parse::<ThresholdPolicy>().is_err());
    }
}
