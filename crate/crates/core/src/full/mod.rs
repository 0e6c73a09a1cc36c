//! Three-message model with a mix of sophisticated and unsophisticated
//! investors.
//!
//! Each message has an affine expected-price schedule whose intercept
//! depends on the market's pooled beliefs. Managers pick the upper envelope
//! of the three lines, the beliefs must be consistent with the resulting
//! partition, and the game can have several such fixed points.

mod beliefs;
mod envelope;
mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::{Message, MessageRegion, PriceLine};
use crate::valuation::ValuationDistribution;

pub use beliefs::{classify, classify_equilibrium, pools, update_beliefs, MessageMasses, Pools};
pub use envelope::{envelope_thresholds, upper_envelope_regions, Thresholds};
pub use solver::{
    belief_lattice, enumerate_equilibria, enumerate_from, solve_full_equilibrium, solve_full_newton, solve_full_with,
    Enumeration, SolverOptions, DEFAULT_DAMPING, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullParams {
    /// Fraction of sophisticated investors.
    pub chi: f64,
    /// Probability a simple disclosure is informative.
    pub rho_s: f64,
    /// Probability a sophisticated investor reads through an obfuscated
    /// disclosure.
    pub rho_u: f64,
    /// Mass of managers who must disclose simply.
    pub forced_simple: f64,
    /// Mass of managers who must send a complex uninformative disclosure.
    pub forced_obfuscate: f64,
    #[serde(default)]
    pub dist: ValuationDistribution,
}

impl FullParams {
    pub fn new(chi: f64, rho_s: f64, rho_u: f64, forced_simple: f64, forced_obfuscate: f64) -> Result<Self> {
        let params = FullParams {
            chi,
            rho_s,
            rho_u,
            forced_simple,
            forced_obfuscate,
            dist: ValuationDistribution::Uniform01,
        };
        params.validate()?;
        Ok(params)
    }

    /// Range checks first (`InvalidParameter`), then the slope ordering
    /// `chi * rho_u < rho_s < chi` (`InvalidOrdering`).
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("chi", self.chi), ("rho_s", self.rho_s), ("rho_u", self.rho_u)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        for (name, v) in [
            ("forced_simple", self.forced_simple),
            ("forced_obfuscate", self.forced_obfuscate),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be nonnegative")));
            }
        }
        if !(self.forced_simple + self.forced_obfuscate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "forced masses sum to {}, must be below 1",
                self.forced_simple + self.forced_obfuscate
            )));
        }
        let [o, s, i] = self.slopes();
        if !(o < s && s < i) {
            return Err(Error::InvalidOrdering {
                obfuscated: o,
                simple: s,
                informative: i,
            });
        }
        Ok(())
    }

    /// Mass of managers free to choose their message.
    pub fn free_mass(&self) -> f64 {
        1.0 - self.forced_simple - self.forced_obfuscate
    }

    /// Price sensitivities in message order (obfuscate, simple, informative).
    pub fn slopes(&self) -> [f64; 3] {
        [self.chi * self.rho_u, self.rho_s, self.chi]
    }

    pub fn prior_mean(&self) -> f64 {
        self.dist.mean()
    }
}

/// Which messages managers may choose from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Menu {
    #[default]
    Full,
    /// No simple message exists: forced-simple managers are folded into
    /// the free population and only the two complex messages compete.
    ComplexOnly,
}

/// Conditional expectations used to price each no-information event.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Beliefs {
    /// `E(y | simple)`, applied when the simple disclosure is uninformative.
    pub e_simple: f64,
    /// `E(y | complex)`, the unsophisticated reading of any complex message.
    pub e_complex: f64,
    /// `E(y | obfuscated)`, applied by sophisticated investors who cannot
    /// read an obfuscated disclosure.
    pub e_obfusc: f64,
}

impl Beliefs {
    pub fn new(e_simple: f64, e_complex: f64, e_obfusc: f64) -> Self {
        Beliefs {
            e_simple,
            e_complex,
            e_obfusc,
        }
    }

    pub fn uniform(mu: f64) -> Self {
        Beliefs::new(mu, mu, mu)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.e_simple, self.e_complex, self.e_obfusc]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Beliefs::new(a[0], a[1], a[2])
    }

    pub fn sup_distance(&self, other: &Beliefs) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_valid(&self) -> bool {
        self.to_array().iter().all(|v| (0.0..=1.0).contains(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Complex disclosures are better news on average than simple ones.
    SimpleBadNews,
    SimpleGoodNews,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::SimpleBadNews => "simple_bad_news",
            Classification::SimpleGoodNews => "simple_good_news",
        }
    }
}

/// The three affine schedules, in message order.
pub fn price_lines(params: &FullParams, beliefs: &Beliefs) -> [PriceLine; 3] {
    let FullParams { chi, rho_s, rho_u, .. } = *params;
    [
        PriceLine::new(
            Message::Obfuscate,
            chi * rho_u,
            chi * (1.0 - rho_u) * beliefs.e_obfusc + (1.0 - chi) * beliefs.e_complex,
        ),
        PriceLine::new(Message::Simple, rho_s, (1.0 - rho_s) * beliefs.e_simple),
        PriceLine::new(Message::Informative, chi, (1.0 - chi) * beliefs.e_complex),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullEquilibrium {
    pub params: FullParams,
    pub menu: Menu,
    /// Obfuscate below, simple above.
    pub t1: f64,
    /// Simple below, informative above.
    pub t2: f64,
    pub beliefs: Beliefs,
    pub classification: Classification,
    /// Sup-norm gap between the beliefs and the Bayes update they induce.
    pub residual: f64,
    pub iterations: usize,
    /// Message probabilities including forced senders.
    pub masses: MessageMasses,
}

impl FullEquilibrium {
    pub fn price_lines(&self) -> [PriceLine; 3] {
        price_lines(&self.params, &self.beliefs)
    }

    /// Voluntary regions `[0, t1)`, `[t1, t2)`, `[t2, 1]`, empty ones dropped.
    pub fn regions(&self) -> Vec<MessageRegion> {
        envelope::regions_from_thresholds(self.t1, self.t2)
    }

    pub fn has_interior_simple_region(&self) -> bool {
        0.0 < self.t1 && self.t1 < self.t2 && self.t2 < 1.0
    }
}
