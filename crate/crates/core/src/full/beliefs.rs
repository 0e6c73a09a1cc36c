use serde::{Deserialize, Serialize};

use super::{Beliefs, Classification, FullParams};
use crate::error::{Error, Result};
use crate::schedule::Message;

/// Probability of each message being sent, forced senders included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MessageMasses {
    pub obfuscate: f64,
    pub simple: f64,
    pub informative: f64,
}

impl MessageMasses {
    pub fn get(&self, message: Message) -> f64 {
        match message {
            Message::Obfuscate => self.obfuscate,
            Message::Simple => self.simple,
            Message::Informative => self.informative,
        }
    }

    pub fn complex(&self) -> f64 {
        self.obfuscate + self.informative
    }

    pub fn total(&self) -> f64 {
        self.obfuscate + self.simple + self.informative
    }
}

/// Pool compositions implied by a pair of thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pools {
    pub beliefs: Beliefs,
    pub masses: MessageMasses,
    /// Pools with zero mass, whose belief fell back to the prior mean; in
    /// the order simple, complex, obfuscated.
    pub off_path: [bool; 3],
}

struct Pool {
    mass: f64,
    weighted: f64,
}

impl Pool {
    fn new() -> Self {
        Pool {
            mass: 0.0,
            weighted: 0.0,
        }
    }

    fn add(&mut self, mass: f64, mean: f64) {
        self.mass += mass;
        self.weighted += mass * mean;
    }

    fn mean_or(&self, fallback: f64) -> (f64, bool) {
        if self.mass > 0.0 {
            (self.weighted / self.mass, false)
        } else {
            (fallback, true)
        }
    }
}

/// Bayes update of all three beliefs for voluntary regions `[0, t1)`,
/// `[t1, t2)`, `[t2, 1]` plus the forced senders, who are drawn from the
/// whole prior.
pub fn pools(params: &FullParams, t1: f64, t2: f64) -> Result<Pools> {
    if !(0.0 <= t1 && t1 <= t2 && t2 <= 1.0) {
        return Err(Error::Domain(format!(
            "thresholds must satisfy 0 <= t1 <= t2 <= 1, got ({t1}, {t2})"
        )));
    }
    let dist = params.dist;
    let (lo, hi) = dist.support();
    let free = params.free_mass();
    let prior = dist.mean();

    let region =
        |a: f64, b: f64| -> Result<(f64, f64)> { Ok((free * dist.interval_mass(a, b)?, dist.truncated_mean(a, b)?)) };
    let (m_obf, y_obf) = region(lo, t1)?;
    let (m_simple, y_simple) = region(t1, t2)?;
    let (m_inf, y_inf) = region(t2, hi)?;

    let mut simple = Pool::new();
    simple.add(m_simple, y_simple);
    simple.add(params.forced_simple, prior);

    let mut obfusc = Pool::new();
    obfusc.add(m_obf, y_obf);
    obfusc.add(params.forced_obfuscate, prior);

    // Unsophisticated investors see only that the disclosure is complex.
    let mut complex = Pool::new();
    complex.add(m_obf, y_obf);
    complex.add(m_inf, y_inf);
    complex.add(params.forced_obfuscate, prior);

    let (e_simple, off_s) = simple.mean_or(prior);
    let (e_complex, off_c) = complex.mean_or(prior);
    let (e_obfusc, off_o) = obfusc.mean_or(prior);
    Ok(Pools {
        beliefs: Beliefs {
            e_simple,
            e_complex,
            e_obfusc,
        },
        masses: MessageMasses {
            obfuscate: obfusc.mass,
            simple: simple.mass,
            informative: m_inf,
        },
        off_path: [off_s, off_c, off_o],
    })
}

pub fn update_beliefs(params: &FullParams, t1: f64, t2: f64) -> Result<Beliefs> {
    Ok(pools(params, t1, t2)?.beliefs)
}

/// Good news iff the simple pool's mean strictly exceeds the complex pool's.
pub fn classify(simple_pool_mean: f64, complex_pool_mean: f64) -> Classification {
    if simple_pool_mean > complex_pool_mean {
        Classification::SimpleGoodNews
    } else {
        Classification::SimpleBadNews
    }
}

pub fn classify_equilibrium(params: &FullParams, t1: f64, t2: f64) -> Result<Classification> {
    let b = update_beliefs(params, t1, t2)?;
    Ok(classify(b.e_simple, b.e_complex))
}
