//! Two-message baseline: managers either disclose their value or stay
//! silent, and a fraction of them cannot disclose at all.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{bisect, Tolerance};
use crate::valuation::ValuationDistribution;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITER: usize = 200;
const BRACKET_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyeParams {
    /// Probability the manager is uninformed and must stay silent.
    pub p_uninformed: f64,
    #[serde(default)]
    pub dist: ValuationDistribution,
}

impl DyeParams {
    pub fn new(p_uninformed: f64) -> Result<Self> {
        let params = DyeParams {
            p_uninformed,
            dist: ValuationDistribution::Uniform01,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_uninformed > 0.0 && self.p_uninformed < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p_uninformed = {} must lie in (0, 1)",
                self.p_uninformed
            )));
        }
        Ok(())
    }

    /// Price of silence when informed managers below `t` stay silent.
    pub fn silence_price(&self, t: f64) -> Result<f64> {
        let p = self.p_uninformed;
        let (lo, _) = self.dist.support();
        let below = self.dist.interval_mass(lo, t)?;
        let num = p * self.dist.mean() + (1.0 - p) * below * self.dist.truncated_mean(lo, t)?;
        let den = p + (1.0 - p) * below;
        Ok(num / den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyeEquilibrium {
    pub threshold: f64,
    pub nondisclosure_price: f64,
}

/// Closed-form threshold under the uniform prior, `sqrt(p) / (1 + sqrt(p))`.
pub fn dye_threshold_uniform(p_uninformed: f64) -> f64 {
    let s = p_uninformed.sqrt();
    s / (1.0 + s)
}

/// Solves `t = price of silence(t)` by bisection on `(eps, mean - eps)`.
pub fn solve_dye(params: &DyeParams, tol: f64) -> Result<DyeEquilibrium> {
    params.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be positive")));
    }
    let residual = |t: f64| t - params.silence_price(t).unwrap_or(f64::NAN);
    let lo = params.dist.support().0 + BRACKET_EPS;
    let hi = params.dist.mean() - BRACKET_EPS;
    // The residual is single-crossing on the bracket, so a missing sign
    // change can only come from a broken silence price.
    // h'(t*) = 1 (the silence price is minimised at t*), so a residual of
    // tol / 10 pins the threshold to the same accuracy.
    let root = bisect(residual, lo, hi, Tolerance::new(0.1 * tol, 0.0, MAX_ITER)).map_err(|e| match e {
        Error::Domain(_) => Error::NoConvergence {
            iterations: 0,
            residual: f64::NAN,
        },
        other => other,
    })?;
    let t = root.x;
    Ok(DyeEquilibrium {
        threshold: t,
        nondisclosure_price: params.silence_price(t)?,
    })
}
