//! Seeded simulation of a candidate equilibrium.
//!
//! Draws are generated in fixed batches of [`BATCH_SIZE`]. Batch `k` uses
//! ChaCha8 seeded with `seed_from_u64(seed)` on stream `k`; a uniform on
//! `[0, 1)` is `(next_u64 >> 11) * 2^-53`. Every draw consumes a fixed
//! number of uniforms (two in the simple model, three in the full model),
//! so a report depends only on `(model, equilibrium, n_draws, seed)`.
//! Batches run in parallel and are merged in batch order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::full::FullEquilibrium;
use crate::model::{AnyEquilibrium, ModelSpec};
use crate::schedule::Message;
use crate::simple::SimpleEquilibrium;

pub const BATCH_SIZE: u64 = 1 << 16;
pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub n_draws: u64,
    pub seed: u64,
    pub model: ModelSpec,
    pub equilibrium: AnyEquilibrium,
}

impl SimConfig {
    pub fn new(n_draws: u64, seed: u64, model: ModelSpec, equilibrium: AnyEquilibrium) -> Self {
        SimConfig {
            n_draws,
            seed,
            model,
            equilibrium,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_draws == 0 {
            return Err(Error::InvalidParameter("n_draws must be at least 1".into()));
        }
        match (&self.model, &self.equilibrium) {
            (ModelSpec::Simple(p), AnyEquilibrium::Simple(eq)) if p.q == eq.q => Ok(()),
            (ModelSpec::Full(p), AnyEquilibrium::Full(eq)) if *p == eq.params => Ok(()),
            (model, eq) => Err(Error::Config(format!(
                "equilibrium of the {} model does not match the configured {:?}",
                eq.model_name(),
                model
            ))),
        }
    }
}

/// Uniform on `[0, 1)` from the top 53 bits.
fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    fn mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }

    /// Sample standard deviation over `sqrt(n)`; `None` below two draws.
    fn std_error(&self) -> Option<f64> {
        if self.n < 2 {
            return None;
        }
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        Some((var / n).sqrt())
    }
}

/// Per-batch tallies: message counts, up to three pools of valuations and
/// realized prices.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    messages: [u64; 3],
    pools: [Moments; 3],
    price: Moments,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        for k in 0..3 {
            self.messages[k] += other.messages[k];
            self.pools[k].merge(&other.pools[k]);
        }
        self.price.merge(&other.price);
    }
}

fn message_index(m: Message) -> usize {
    match m {
        Message::Obfuscate => 0,
        Message::Simple => 1,
        Message::Informative => 2,
    }
}

// Simple model pools: 0 = no information extracted, 1 = simple senders.
fn draw_simple(eq: &SimpleEquilibrium, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let y = uniform(rng);
    let read = uniform(rng) < eq.q;
    let (message, price) = if y < 0.5 {
        t.pools[0].push(y);
        (Message::Obfuscate, eq.p_nondisc)
    } else if y < eq.tau {
        t.pools[1].push(y);
        (Message::Simple, eq.p_simple)
    } else if read {
        (Message::Informative, y)
    } else {
        t.pools[0].push(y);
        (Message::Informative, eq.p_nondisc)
    };
    t.messages[message_index(message)] += 1;
    t.price.push(price);
}

// Full model pools: 0 = simple senders, 1 = complex senders, 2 = obfuscators.
// Prices are the representative investor's: a chi-weighted average of the
// sophisticated and unsophisticated valuations.
fn draw_full(eq: &FullEquilibrium, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let p = &eq.params;
    let b = &eq.beliefs;
    let y = uniform(rng);
    let lottery = uniform(rng);
    let event = uniform(rng);
    let forced_simple = if eq.menu == crate::full::Menu::Full {
        p.forced_simple
    } else {
        0.0
    };
    let message = if lottery < forced_simple {
        Message::Simple
    } else if lottery < forced_simple + p.forced_obfuscate || y < eq.t1 {
        Message::Obfuscate
    } else if y < eq.t2 {
        Message::Simple
    } else {
        Message::Informative
    };
    let price = match message {
        Message::Simple => {
            t.pools[0].push(y);
            if event < p.rho_s {
                y
            } else {
                b.e_simple
            }
        }
        Message::Informative => {
            t.pools[1].push(y);
            p.chi * y + (1.0 - p.chi) * b.e_complex
        }
        Message::Obfuscate => {
            t.pools[1].push(y);
            t.pools[2].push(y);
            let sophisticated = if event < p.rho_u { y } else { b.e_obfusc };
            p.chi * sophisticated + (1.0 - p.chi) * b.e_complex
        }
    };
    t.messages[message_index(message)] += 1;
    t.price.push(price);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistic {
    pub name: String,
    pub analytic: f64,
    /// `None` when no draw fell in the statistic's pool.
    pub empirical: Option<f64>,
    /// `None` when fewer than two observations make the width infinite.
    pub std_error: Option<f64>,
    pub z: Option<f64>,
    pub count: u64,
}

impl Statistic {
    fn new(name: &str, analytic: f64, empirical: Option<f64>, std_error: Option<f64>, count: u64) -> Self {
        let z = match (empirical, std_error) {
            (Some(e), Some(se)) if se > 0.0 => Some((e - analytic) / se),
            (Some(e), Some(_)) => Some(if (e - analytic).abs() <= 1e-15 {
                0.0
            } else {
                f64::INFINITY
            }),
            _ => None,
        };
        Statistic {
            name: name.to_string(),
            analytic,
            empirical,
            std_error,
            z,
            count,
        }
    }

    fn frequency(name: &str, analytic: f64, hits: u64, n: u64) -> Self {
        let p = hits as f64 / n as f64;
        let se = (n >= 2).then(|| (p * (1.0 - p) * n as f64 / (n as f64 - 1.0) / n as f64).sqrt());
        Statistic::new(name, analytic, Some(p), se, n)
    }

    fn pool_mean(name: &str, analytic: f64, pool: &Moments) -> Self {
        Statistic::new(name, analytic, pool.mean(), pool.std_error(), pool.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub model: String,
    pub n_draws: u64,
    pub seed: u64,
    /// Empirical frequency of each message.
    pub frequencies: BTreeMap<String, f64>,
    pub mean_price: f64,
    pub mean_price_std_error: Option<f64>,
    pub statistics: Vec<Statistic>,
    /// Largest `|empirical - analytic|` over statistics with data.
    pub max_abs_deviation: f64,
    /// Set when some statistic has too few observations for a standard
    /// error.
    pub infinite_width: bool,
}

fn run_batches<F>(n: u64, seed: u64, draw: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng, &mut Tally) + Sync,
{
    let batches = n.div_ceil(BATCH_SIZE);
    let tallies: Vec<Tally> = (0..batches)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let len = BATCH_SIZE.min(n - k * BATCH_SIZE);
            let mut t = Tally::default();
            for _ in 0..len {
                draw(&mut rng, &mut t);
            }
            t
        })
        .collect();
    let mut total = Tally::default();
    for t in &tallies {
        total.merge(t);
    }
    total
}

pub fn simulate(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let n = config.n_draws;
    let eq = &config.equilibrium;
    let (tally, mut stats) = match eq {
        AnyEquilibrium::Simple(s) => {
            let t = run_batches(n, config.seed, |rng, t| draw_simple(s, rng, t));
            let stats = vec![
                Statistic::pool_mean("pool_mean.no_information", s.p_nondisc, &t.pools[0]),
                Statistic::pool_mean("pool_mean.simple", s.p_simple, &t.pools[1]),
                Statistic::frequency("frequency.no_information", s.no_information_mass(), t.pools[0].n, n),
            ];
            (t, stats)
        }
        AnyEquilibrium::Full(f) => {
            let t = run_batches(n, config.seed, |rng, t| draw_full(f, rng, t));
            let b = &f.beliefs;
            let stats = vec![
                Statistic::pool_mean("pool_mean.simple", b.e_simple, &t.pools[0]),
                Statistic::pool_mean("pool_mean.complex", b.e_complex, &t.pools[1]),
                Statistic::pool_mean("pool_mean.obfuscated", b.e_obfusc, &t.pools[2]),
            ];
            (t, stats)
        }
    };
    for m in Message::ALL {
        stats.push(Statistic::frequency(
            &format!("frequency.{m}"),
            eq.message_mass(m),
            tally.messages[message_index(m)],
            n,
        ));
    }
    stats.push(Statistic::pool_mean("mean_price", eq.prior_mean(), &tally.price));

    let frequencies = Message::ALL
        .iter()
        .map(|m| (m.to_string(), tally.messages[message_index(*m)] as f64 / n as f64))
        .collect();
    let max_abs_deviation = stats
        .iter()
        .filter_map(|s| s.empirical.map(|e| (e - s.analytic).abs()))
        .fold(0.0, f64::max);
    let infinite_width = stats.iter().any(|s| s.std_error.is_none());
    Ok(SimReport {
        model: eq.model_name().to_string(),
        n_draws: n,
        seed: config.seed,
        frequencies,
        mean_price: tally.price.mean().unwrap_or(f64::NAN),
        mean_price_std_error: tally.price.std_error(),
        statistics: stats,
        max_abs_deviation,
        infinite_width,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Some statistic had too few observations to judge.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub verdict: Verdict,
    pub z_threshold: f64,
    pub z_scores: BTreeMap<String, Option<f64>>,
    pub failing: Vec<String>,
}

/// Compares every statistic with its analytic value. Statistics whose
/// pool is empty and analytically off-path are skipped.
pub fn verify_report(report: &SimReport, z_threshold: f64) -> Verification {
    let mut failing = Vec::new();
    let mut inconclusive = false;
    let mut z_scores = BTreeMap::new();
    for s in &report.statistics {
        z_scores.insert(s.name.clone(), s.z);
        match s.z {
            Some(z) if z.abs() > z_threshold => failing.push(s.name.clone()),
            Some(_) => {}
            None if s.count == 0 && s.name.starts_with("pool_mean") => {}
            None => inconclusive = true,
        }
    }
    let verdict = if !failing.is_empty() {
        Verdict::Fail
    } else if inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Verification {
        verdict,
        z_threshold,
        z_scores,
        failing,
    }
}

pub fn verify_equilibrium(config: &SimConfig, z_threshold: f64) -> Result<(SimReport, Verification)> {
    let report = simulate(config)?;
    let verification = verify_report(&report, z_threshold);
    Ok((report, verification))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simple::{solve_simple, SimpleParams};

    fn simple_config(n: u64, seed: u64) -> SimConfig {
        let params = SimpleParams::new(0.75).unwrap();
        let eq = solve_simple(params, 1e-12).unwrap().equilibrium;
        SimConfig::new(n, seed, ModelSpec::Simple(params), eq.into())
    }

    #[test]
    fn uniforms_are_in_unit_interval_and_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let u = uniform(&mut a);
            assert!((0.0..1.0).contains(&u));
            assert_eq!(u, uniform(&mut b));
        }
    }

    #[test]
    fn streams_differ() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        b.set_stream(1);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn frequencies_sum_to_one() {
        let r = simulate(&simple_config(100_003, 1)).unwrap();
        let total: f64 = r.frequencies.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(r.n_draws, 100_003);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = simulate(&simple_config(200_000, 42)).unwrap();
        let b = simulate(&simple_config(200_000, 42)).unwrap();
        assert_eq!(a, b);
        let c = simulate(&simple_config(200_000, 43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_draw_is_inconclusive() {
        let (r, v) = verify_equilibrium(&simple_config(1, 3), 4.0).unwrap();
        assert!(r.infinite_width);
        assert_eq!(v.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn config_errors() {
        let mut c = simple_config(10, 0);
        c.n_draws = 0;
        assert!(matches!(simulate(&c), Err(Error::InvalidParameter(_))));
        let mut c = simple_config(10, 0);
        c.model = ModelSpec::Simple(SimpleParams::new(0.8).unwrap());
        assert!(matches!(simulate(&c), Err(Error::Config(_))));
        let mut c = simple_config(10, 0);
        c.model = ModelSpec::Full(crate::full::FullParams::new(0.7, 0.5, 0.2, 0.1, 0.1).unwrap());
        assert!(matches!(simulate(&c), Err(Error::Config(_))));
    }

    #[test]
    fn moments() {
        let mut m = Moments::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            m.push(x);
        }
        assert_eq!(m.mean(), Some(2.5));
        let se = m.std_error().unwrap();
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
