//! Flat JSON configuration files.
//!
//! Keys match the parameter names used throughout the library, for example
//! `{"chi": 0.7, "rho_s": 0.65, "rho_u": 0.2, "forced_simple": 0.1,
//! "forced_obfuscate": 0.1}`. Unknown keys are rejected. Command-line flags
//! override file values.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::full::{FullParams, Menu};
use crate::valuation::ValuationDistribution;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub q: Option<f64>,
    pub chi: Option<f64>,
    pub rho_s: Option<f64>,
    pub rho_u: Option<f64>,
    pub forced_simple: Option<f64>,
    pub forced_obfuscate: Option<f64>,
    pub menu: Option<Menu>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub n_starts: Option<usize>,
    pub seed: Option<u64>,
    pub n_draws: Option<u64>,
    pub z_threshold: Option<f64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: FileConfig) -> FileConfig {
        FileConfig {
            q: top.q.or(self.q),
            chi: top.chi.or(self.chi),
            rho_s: top.rho_s.or(self.rho_s),
            rho_u: top.rho_u.or(self.rho_u),
            forced_simple: top.forced_simple.or(self.forced_simple),
            forced_obfuscate: top.forced_obfuscate.or(self.forced_obfuscate),
            menu: top.menu.or(self.menu),
            tol: top.tol.or(self.tol),
            max_iter: top.max_iter.or(self.max_iter),
            n_starts: top.n_starts.or(self.n_starts),
            seed: top.seed.or(self.seed),
            n_draws: top.n_draws.or(self.n_draws),
            z_threshold: top.z_threshold.or(self.z_threshold),
        }
    }

    /// Full-model parameters, missing ones taken from `defaults`. Forced
    /// masses default to zero. Not validated.
    pub fn full_params_unchecked(&self, defaults: Option<&FullParams>) -> Result<FullParams> {
        let need = |v: Option<f64>, d: Option<f64>, name: &str| {
            v.or(d)
                .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {name}")))
        };
        Ok(FullParams {
            chi: need(self.chi, defaults.map(|d| d.chi), "chi")?,
            rho_s: need(self.rho_s, defaults.map(|d| d.rho_s), "rho_s")?,
            rho_u: need(self.rho_u, defaults.map(|d| d.rho_u), "rho_u")?,
            forced_simple: self.forced_simple.or(defaults.map(|d| d.forced_simple)).unwrap_or(0.0),
            forced_obfuscate: self
                .forced_obfuscate
                .or(defaults.map(|d| d.forced_obfuscate))
                .unwrap_or(0.0),
            dist: ValuationDistribution::Uniform01,
        })
    }

    pub fn full_params(&self, defaults: Option<&FullParams>) -> Result<FullParams> {
        let p = self.full_params_unchecked(defaults)?;
        p.validate()?;
        Ok(p)
    }
}
