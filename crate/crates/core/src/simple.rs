//! One-parameter model of disclosure complexity.
//!
//! Values are uniform on `[0, 1]`. A manager can send a coarse simple
//! message ("above average" or not), a complex informative disclosure that
//! investors understand with probability `q`, or a complex obfuscated one
//! that reveals nothing. In equilibrium managers below `1/2` obfuscate,
//! managers in `[1/2, tau)` send the good simple message and managers above
//! `tau` disclose with a complex informative message.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{bisect_secant, Tolerance};
use crate::schedule::{Message, MessageRegion, PriceLine};
use crate::valuation::ValuationDistribution;

pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_ITER: usize = 500;
const DIST: ValuationDistribution = ValuationDistribution::Uniform01;

/// Lower bound on `q` for the simple-disclosure region to be nonempty.
pub const Q_MIN: f64 = 2.0 / 3.0;

/// Probability that a complex informative disclosure is understood; a proxy
/// for investor sophistication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleParams {
    pub q: f64,
}

impl SimpleParams {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1]")));
        }
        Ok(SimpleParams { q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleEquilibrium {
    pub q: f64,
    /// Switch point from the simple good message to complex informative.
    pub tau: f64,
    /// Price when investors extract no information.
    pub p_nondisc: f64,
    /// Price of the simple good message.
    pub p_simple: f64,
}

impl SimpleEquilibrium {
    /// Builds the equilibrium objects implied by a threshold, with the
    /// no-information price taken from Bayes' rule.
    pub fn from_tau(params: SimpleParams, tau: f64) -> Result<Self> {
        Ok(SimpleEquilibrium {
            q: params.q,
            tau,
            p_nondisc: nondisclosure_price_bayes(params, tau, DIST)?,
            p_simple: simple_price(tau),
        })
    }

    pub fn regions(&self) -> [MessageRegion; 3] {
        [
            MessageRegion::new(Message::Obfuscate, 0.0, 0.5),
            MessageRegion::new(Message::Simple, 0.5, self.tau),
            MessageRegion::new(Message::Informative, self.tau, 1.0),
        ]
    }

    /// `|P_S - (q tau + (1 - q) P_0)|`.
    pub fn indifference_gap(&self) -> f64 {
        (self.p_simple - (self.q * self.tau + (1.0 - self.q) * self.p_nondisc)).abs()
    }

    /// Mass of managers sending each message.
    pub fn message_mass(&self, message: Message) -> f64 {
        match message {
            Message::Obfuscate => 0.5,
            Message::Simple => self.tau - 0.5,
            Message::Informative => 1.0 - self.tau,
        }
    }

    /// Probability that investors learn nothing: obfuscators plus failed
    /// informative disclosures.
    pub fn no_information_mass(&self) -> f64 {
        0.5 + (1.0 - self.tau) * (1.0 - self.q)
    }

    /// Price of the voluntary "below average" simple message. It is never
    /// sent; priced at `E(y | y <= 1/2)` by convention.
    pub fn off_path_bad_simple_price(&self) -> f64 {
        0.25
    }
}

/// Price of the good simple message when it is sent on `[1/2, tau)`.
pub fn simple_price(tau: f64) -> f64 {
    (0.5 + tau) / 2.0
}

/// Closed-form threshold `1 / (1 + sqrt((3q - 2) / (q(7 - 4q) - 2)))`.
pub fn tau_closed_form(params: SimpleParams) -> Result<f64> {
    let q = params.q;
    if !(q > Q_MIN) {
        return Err(Error::NoInteriorEquilibrium { q });
    }
    let ratio = (3.0 * q - 2.0) / (q * (7.0 - 4.0 * q) - 2.0);
    Ok(1.0 / (1.0 + ratio.sqrt()))
}

/// `1 - 2 tau + c tau^2` with `c = 4q(1 - q) / (q(7 - 4q) - 2)`; the
/// equilibrium threshold is its smaller root.
pub fn quadratic_residual(q: f64, tau: f64) -> Result<f64> {
    let den = q * (7.0 - 4.0 * q) - 2.0;
    if den == 0.0 {
        return Err(Error::Domain(format!("q(7 - 4q) - 2 vanishes at q = {q}")));
    }
    let c = 4.0 * q * (1.0 - q) / den;
    Ok(1.0 - 2.0 * tau + c * tau * tau)
}

/// Bayes-consistent price after no information is extracted: obfuscators
/// below `1/2` pooled with informative disclosers above `tau` whose
/// disclosure failed.
pub fn nondisclosure_price_bayes(params: SimpleParams, tau: f64, dist: ValuationDistribution) -> Result<f64> {
    if !(0.5..=1.0).contains(&tau) {
        return Err(Error::Domain(format!("tau = {tau} must lie in [1/2, 1]")));
    }
    let fail = 1.0 - params.q;
    let obfuscators = dist.interval_mass(0.0, 0.5)?;
    let failed = dist.interval_mass(tau, 1.0)? * fail;
    let num = obfuscators * dist.truncated_mean(0.0, 0.5)? + failed * dist.truncated_mean(tau, 1.0)?;
    Ok(num / (obfuscators + failed))
}

/// No-information price that makes the type at `tau` indifferent between
/// the simple and the informative message.
pub fn indifference_price(params: SimpleParams, tau: f64) -> Result<f64> {
    let q = params.q;
    if q >= 1.0 {
        return Err(Error::Domain("indifference price is undefined at q = 1".into()));
    }
    Ok((simple_price(tau) - q * tau) / (1.0 - q))
}

/// Root of `indifference_price - nondisclosure_price_bayes` on `[1/2, 1]`.
pub fn solve_simple_fixed_point(params: SimpleParams, tol: f64) -> Result<SimpleEquilibrium> {
    let q = params.q;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be positive")));
    }
    if q >= 1.0 {
        return Err(Error::Domain("fixed-point path requires q < 1".into()));
    }
    let gap = |tau: f64| {
        let ind = indifference_price(params, tau).unwrap_or(f64::NAN);
        let bayes = nondisclosure_price_bayes(params, tau, DIST).unwrap_or(f64::NAN);
        ind - bayes
    };
    // g(1/2) > 0 always; g(1) < 0 exactly when q > 2/3.
    if !(gap(1.0) < 0.0) {
        return Err(Error::NoInteriorEquilibrium { q });
    }
    let root = bisect_secant(gap, 0.5, 1.0, Tolerance::new(tol, tol, MAX_ITER)).map_err(|e| match e {
        Error::Domain(_) => Error::NoInteriorEquilibrium { q },
        other => other,
    })?;
    SimpleEquilibrium::from_tau(params, root.x)
}

/// Both solution routes plus their agreement, as reported by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimpleSolution {
    pub equilibrium: SimpleEquilibrium,
    pub tau_closed_form: f64,
    /// `None` at `q = 1`, where only the closed form applies.
    pub tau_fixed_point: Option<f64>,
    pub agreement: Option<f64>,
}

/// Solves by closed form and, for `q < 1`, cross-checks with the fixed
/// point. The closed form defines the returned threshold.
pub fn solve_simple(params: SimpleParams, tol: f64) -> Result<SimpleSolution> {
    let tau = tau_closed_form(params)?;
    let equilibrium = SimpleEquilibrium::from_tau(params, tau)?;
    if params.q >= 1.0 {
        return Ok(SimpleSolution {
            equilibrium,
            tau_closed_form: tau,
            tau_fixed_point: None,
            agreement: None,
        });
    }
    let fp = solve_simple_fixed_point(params, tol)?;
    Ok(SimpleSolution {
        equilibrium,
        tau_closed_form: tau,
        tau_fixed_point: Some(fp.tau),
        agreement: Some((fp.tau - tau).abs()),
    })
}

/// Equilibrium price schedule per region: flat `P_0` for obfuscators, flat
/// `P_S` for the simple message and `q y + (1 - q) P_0` for informative
/// disclosures.
pub fn price_schedule_simple(eq: &SimpleEquilibrium) -> Vec<(MessageRegion, PriceLine)> {
    let [obf, simple, informative] = eq.regions();
    vec![
        (obf, PriceLine::flat(Message::Obfuscate, eq.p_nondisc)),
        (simple, PriceLine::flat(Message::Simple, eq.p_simple)),
        (
            informative,
            PriceLine::new(Message::Informative, eq.q, (1.0 - eq.q) * eq.p_nondisc),
        ),
    ]
}
