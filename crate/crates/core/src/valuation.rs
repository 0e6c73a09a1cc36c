//! Prior over the manager's private information and the conditional moments
//! every solver is built from.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The manager's private information about firm value, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(f64);

impl Valuation {
    pub fn new(y: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&y) {
            Ok(Valuation(y))
        } else {
            Err(Error::Domain(format!("valuation {y} outside [0, 1]")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Prior distribution of valuations.
///
/// Only the uniform prior is implemented; every closed form in the
/// simplified model assumes it. New variants must keep total mass one on
/// their support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValuationDistribution {
    #[default]
    Uniform01,
}

impl ValuationDistribution {
    pub fn support(&self) -> (f64, f64) {
        match self {
            ValuationDistribution::Uniform01 => (0.0, 1.0),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            ValuationDistribution::Uniform01 => 0.5,
        }
    }

    pub fn cdf(&self, y: f64) -> f64 {
        match self {
            ValuationDistribution::Uniform01 => y.clamp(0.0, 1.0),
        }
    }

    /// `E(y | lo <= y <= hi)`. A degenerate interval returns `lo`.
    pub fn truncated_mean(&self, lo: f64, hi: f64) -> Result<f64> {
        self.check_interval(lo, hi)?;
        match self {
            ValuationDistribution::Uniform01 => Ok(0.5 * (lo + hi)),
        }
    }

    /// `P(lo <= y <= hi)`.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> Result<f64> {
        self.check_interval(lo, hi)?;
        Ok(self.cdf(hi) - self.cdf(lo))
    }

    /// Mass-weighted sum `P(lo <= y <= hi) * E(y | lo <= y <= hi)`, the
    /// building block of pooled beliefs.
    pub fn partial_expectation(&self, lo: f64, hi: f64) -> Result<f64> {
        Ok(self.interval_mass(lo, hi)? * self.truncated_mean(lo, hi)?)
    }

    fn check_interval(&self, lo: f64, hi: f64) -> Result<()> {
        let (a, b) = self.support();
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || lo < a || hi > b {
            return Err(Error::Domain(format!(
                "interval [{lo}, {hi}] is not a valid sub-interval of [{a}, {b}]"
            )));
        }
        Ok(())
    }
}
