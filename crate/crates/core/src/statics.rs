//! Comparative statics over parameter grids and the geometric and sign
//! checks on solved equilibria.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::full::{
    classify, enumerate_equilibria, solve_full_newton, solve_full_with, Beliefs, Classification, FullEquilibrium,
    FullParams, SolverOptions,
};
use crate::model::{AnyEquilibrium, ModelSpec};
use crate::schedule::Message;
use crate::simple::{solve_simple, SimpleEquilibrium, SimpleParams};

/// Half-open interval `[lo, hi)`; the upper region is closed at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UShape {
    pub u_shaped: bool,
    /// Complex disclosures below `middle`.
    pub lower: Interval,
    /// Simple disclosures.
    pub middle: Interval,
    /// Complex disclosures above `middle`.
    pub upper: Interval,
}

/// Complexity is U-shaped in value when complex messages are sent on a
/// lower and an upper region with simple messages in between.
pub fn check_u_shape(eq: &AnyEquilibrium) -> UShape {
    let (a, b) = match eq {
        AnyEquilibrium::Simple(s) => (0.5, s.tau),
        AnyEquilibrium::Full(f) => (f.t1, f.t2),
    };
    let lower = Interval { lo: 0.0, hi: a };
    let middle = Interval { lo: a, hi: b };
    // Closed at the top, so only a point at 1 is empty.
    let upper = Interval { lo: b, hi: 1.0 };
    let u_shaped = !lower.is_empty() && !middle.is_empty() && !upper.is_empty();
    UShape {
        u_shaped,
        lower,
        middle,
        upper,
    }
}

/// Events whose price reaction can be measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Announcement {
    Simple,
    /// Either complex message, as seen by an investor who cannot tell them
    /// apart.
    Complex,
    Obfuscated,
    Informative,
    /// Simple model: the pooled event where investors learn nothing.
    NoInformation,
    /// Simple model: a simple message claiming bad news, never sent.
    BadSimple,
}

impl Announcement {
    pub fn as_str(self) -> &'static str {
        match self {
            Announcement::Simple => "simple",
            Announcement::Complex => "complex",
            Announcement::Obfuscated => "obfuscated",
            Announcement::Informative => "informative",
            Announcement::NoInformation => "no_information",
            Announcement::BadSimple => "bad_simple",
        }
    }
}

fn off_path(what: Announcement) -> Error {
    Error::OffPathMessage(format!("{} is sent with probability zero", what.as_str()))
}

fn simple_complex_mean(eq: &SimpleEquilibrium) -> f64 {
    let t = eq.tau;
    let mass = 0.5 + (1.0 - t);
    (0.125 + (1.0 - t) * (1.0 + t) / 2.0) / mass
}

/// `E(y | event) - E(y)`.
pub fn announcement_return(eq: &AnyEquilibrium, what: Announcement) -> Result<f64> {
    let prior = eq.prior_mean();
    let conditional = match eq {
        AnyEquilibrium::Simple(s) => match what {
            Announcement::Simple if s.tau > 0.5 => s.p_simple,
            Announcement::Complex => simple_complex_mean(s),
            Announcement::Obfuscated => 0.25,
            Announcement::Informative if s.tau < 1.0 => (1.0 + s.tau) / 2.0,
            Announcement::NoInformation => s.p_nondisc,
            _ => return Err(off_path(what)),
        },
        AnyEquilibrium::Full(f) => {
            let m = &f.masses;
            match what {
                Announcement::Simple if m.simple > 0.0 => f.beliefs.e_simple,
                Announcement::Complex if m.complex() > 0.0 => f.beliefs.e_complex,
                Announcement::Obfuscated if m.obfuscate > 0.0 => f.beliefs.e_obfusc,
                Announcement::Informative if m.informative > 0.0 => f.params.dist.truncated_mean(f.t2, 1.0)?,
                Announcement::NoInformation | Announcement::BadSimple => {
                    return Err(Error::InvalidParameter(format!(
                        "{} is defined only in the simple model",
                        what.as_str()
                    )))
                }
                _ => return Err(off_path(what)),
            }
        }
    };
    Ok(conditional - prior)
}

/// Probability of either complex message, forced senders included.
pub fn complex_propensity(eq: &AnyEquilibrium) -> f64 {
    eq.message_mass(Message::Obfuscate) + eq.message_mass(Message::Informative)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Q,
    Chi,
    RhoS,
    RhoU,
    ForcedSimple,
    ForcedObfuscate,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Q => "q",
            SweepParam::Chi => "chi",
            SweepParam::RhoS => "rho_s",
            SweepParam::RhoU => "rho_u",
            SweepParam::ForcedSimple => "forced_simple",
            SweepParam::ForcedObfuscate => "forced_obfuscate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "q" => SweepParam::Q,
            "chi" => SweepParam::Chi,
            "rho_s" => SweepParam::RhoS,
            "rho_u" => SweepParam::RhoU,
            "forced_simple" => SweepParam::ForcedSimple,
            "forced_obfuscate" => SweepParam::ForcedObfuscate,
            other => return Err(Error::InvalidParameter(format!("unknown sweep parameter {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Warm-start each point from the previous point's beliefs.
    #[default]
    Continuation,
    /// Enumerate every equilibrium at each point independently.
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub base: ModelSpec,
    pub mode: SweepMode,
    pub tol: f64,
    /// Starting beliefs for the first continuation solve; the prior mean
    /// when absent.
    pub init: Option<Beliefs>,
    /// Starts per belief axis in cold mode.
    pub n_starts: usize,
}

impl SweepSpec {
    pub fn new(param: SweepParam, from: f64, to: f64, steps: usize, base: ModelSpec) -> Self {
        SweepSpec {
            param,
            from,
            to,
            steps,
            base,
            mode: SweepMode::Continuation,
            tol: crate::full::DEFAULT_TOL,
            init: None,
            n_starts: 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "steps = {} must be at least 2",
                self.steps
            )));
        }
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(Error::InvalidParameter(format!(
                "sweep range [{}, {}] must be increasing",
                self.from, self.to
            )));
        }
        // Every sweepable parameter is a probability or a mass.
        if !(self.from >= 0.0 && self.to <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "{} range [{}, {}] leaves [0, 1]",
                self.param.as_str(),
                self.from,
                self.to
            )));
        }
        let fits = matches!(
            (self.param, &self.base),
            (SweepParam::Q, ModelSpec::Simple(_))
                | (
                    SweepParam::Chi
                        | SweepParam::RhoS
                        | SweepParam::RhoU
                        | SweepParam::ForcedSimple
                        | SweepParam::ForcedObfuscate,
                    ModelSpec::Full(_)
                )
        );
        if !fits {
            return Err(Error::InvalidParameter(format!(
                "parameter {} does not belong to the chosen model",
                self.param.as_str()
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol = {} must be positive", self.tol)));
        }
        if self.mode == SweepMode::Cold && self.n_starts < 2 {
            return Err(Error::InvalidParameter("n_starts must be at least 2".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|k| {
                if k == n {
                    self.to
                } else {
                    self.from + (self.to - self.from) * k as f64 / n as f64
                }
            })
            .collect()
    }

    /// Base model with the swept parameter replaced. Not validated.
    fn model_at(&self, v: f64) -> ModelSpec {
        match self.base {
            ModelSpec::Simple(_) => ModelSpec::Simple(SimpleParams { q: v }),
            ModelSpec::Full(p) => {
                let mut p = p;
                match self.param {
                    SweepParam::Chi => p.chi = v,
                    SweepParam::RhoS => p.rho_s = v,
                    SweepParam::RhoU => p.rho_u = v,
                    SweepParam::ForcedSimple => p.forced_simple = v,
                    SweepParam::ForcedObfuscate => p.forced_obfuscate = v,
                    SweepParam::Q => {}
                }
                ModelSpec::Full(p)
            }
        }
    }
}

/// One grid point, or one equilibrium at a grid point in cold mode.
/// Fields other than the first four are absent on failed rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    /// `ok`, or the lowercase error code of the failure.
    pub status: String,
    pub equilibrium_lost: bool,
    pub branch: Option<usize>,
    pub n_equilibria: Option<usize>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub e_simple: Option<f64>,
    pub e_complex: Option<f64>,
    pub e_obfusc: Option<f64>,
    /// Simple model only.
    pub price_no_information: Option<f64>,
    pub classification: Option<String>,
    pub p_obfuscate: Option<f64>,
    pub p_simple: Option<f64>,
    pub p_informative: Option<f64>,
    pub p_complex: Option<f64>,
    pub return_simple: Option<f64>,
    pub return_complex: Option<f64>,
    pub mass_total: Option<f64>,
}

pub const SWEEP_COLUMNS: [&str; 20] = [
    "param",
    "value",
    "status",
    "equilibrium_lost",
    "branch",
    "n_equilibria",
    "t1",
    "t2",
    "e_simple",
    "e_complex",
    "e_obfusc",
    "price_no_information",
    "classification",
    "p_obfuscate",
    "p_simple",
    "p_informative",
    "p_complex",
    "return_simple",
    "return_complex",
    "mass_total",
];

impl SweepRow {
    fn failed(param: SweepParam, value: f64, err: &Error) -> Self {
        SweepRow {
            param: param.as_str().to_string(),
            value,
            status: err.code().to_lowercase(),
            equilibrium_lost: false,
            branch: None,
            n_equilibria: None,
            t1: None,
            t2: None,
            e_simple: None,
            e_complex: None,
            e_obfusc: None,
            price_no_information: None,
            classification: None,
            p_obfuscate: None,
            p_simple: None,
            p_informative: None,
            p_complex: None,
            return_simple: None,
            return_complex: None,
            mass_total: None,
        }
    }

    pub fn from_equilibrium(param: SweepParam, value: f64, eq: &AnyEquilibrium) -> Self {
        let (t1, t2, beliefs, p_nodisc, class) = match eq {
            AnyEquilibrium::Simple(s) => {
                let e_c = simple_complex_mean(s);
                (
                    0.5,
                    s.tau,
                    [s.p_simple, e_c, 0.25],
                    Some(s.p_nondisc),
                    classify(s.p_simple, e_c),
                )
            }
            AnyEquilibrium::Full(f) => (f.t1, f.t2, f.beliefs.to_array(), None, f.classification),
        };
        let mass = |m| eq.message_mass(m);
        SweepRow {
            param: param.as_str().to_string(),
            value,
            status: "ok".to_string(),
            equilibrium_lost: false,
            branch: None,
            n_equilibria: None,
            t1: Some(t1),
            t2: Some(t2),
            e_simple: Some(beliefs[0]),
            e_complex: Some(beliefs[1]),
            e_obfusc: Some(beliefs[2]),
            price_no_information: p_nodisc,
            classification: Some(class.as_str().to_string()),
            p_obfuscate: Some(mass(Message::Obfuscate)),
            p_simple: Some(mass(Message::Simple)),
            p_informative: Some(mass(Message::Informative)),
            p_complex: Some(complex_propensity(eq)),
            return_simple: announcement_return(eq, Announcement::Simple).ok(),
            return_complex: announcement_return(eq, Announcement::Complex).ok(),
            mass_total: Some(Message::ALL.iter().map(|m| mass(*m)).sum()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

fn solve_simple_at(q: f64, tol: f64) -> Result<AnyEquilibrium> {
    Ok(solve_simple(SimpleParams::new(q)?, tol)?.equilibrium.into())
}

/// The first point is found by damped iteration, which picks the basin of
/// the starting beliefs. Later points use Newton from the previous
/// equilibrium, which tracks the branch through repelling equilibria.
fn continue_from(params: &FullParams, init: &Beliefs, warm: bool, opts: &SolverOptions) -> Result<FullEquilibrium> {
    params.validate()?;
    if warm {
        solve_full_newton(params, init, opts).or_else(|_| solve_full_with(params, init, opts))
    } else {
        solve_full_with(params, init, opts).or_else(|_| solve_full_newton(params, init, opts))
    }
}

fn run_continuation(spec: &SweepSpec) -> Vec<SweepRow> {
    let opts = SolverOptions::new(spec.tol, crate::full::DEFAULT_MAX_ITER);
    let mut rows = Vec::with_capacity(spec.steps);
    let mut warm: Option<Beliefs> = None;
    let mut branch: Option<Classification> = None;
    for v in spec.grid() {
        let solved = match spec.model_at(v) {
            ModelSpec::Simple(p) => solve_simple_at(p.q, spec.tol),
            ModelSpec::Full(p) => {
                let init = warm.or(spec.init).unwrap_or_else(|| Beliefs::uniform(p.prior_mean()));
                continue_from(&p, &init, warm.is_some(), &opts).map(AnyEquilibrium::Full)
            }
        };
        let row = match solved {
            Ok(eq) => {
                let mut row = SweepRow::from_equilibrium(spec.param, v, &eq);
                if let AnyEquilibrium::Full(f) = &eq {
                    warm = Some(f.beliefs);
                    match branch {
                        None => branch = Some(f.classification),
                        Some(c) => row.equilibrium_lost = c != f.classification,
                    }
                }
                row
            }
            Err(e) => {
                let mut row = SweepRow::failed(spec.param, v, &e);
                row.equilibrium_lost = branch.is_some();
                row
            }
        };
        rows.push(row);
    }
    rows
}

fn run_cold(spec: &SweepSpec) -> Vec<SweepRow> {
    let per_point: Vec<Vec<SweepRow>> = spec
        .grid()
        .into_par_iter()
        .map(|v| {
            let found: Result<Vec<AnyEquilibrium>> = match spec.model_at(v) {
                ModelSpec::Simple(p) => solve_simple_at(p.q, spec.tol).map(|e| vec![e]),
                ModelSpec::Full(p) => p.validate().and_then(|_| {
                    let found =
                        enumerate_equilibria(&p, spec.n_starts, spec.tol)?.nonempty(crate::full::DEFAULT_MAX_ITER)?;
                    Ok(found.equilibria.into_iter().map(AnyEquilibrium::Full).collect())
                }),
            };
            match found {
                Ok(eqs) => {
                    let n = eqs.len();
                    eqs.iter()
                        .enumerate()
                        .map(|(k, eq)| SweepRow {
                            branch: Some(k),
                            n_equilibria: Some(n),
                            ..SweepRow::from_equilibrium(spec.param, v, eq)
                        })
                        .collect()
                }
                Err(e) => vec![SweepRow::failed(spec.param, v, &e)],
            }
        })
        .collect();
    per_point.into_iter().flatten().collect()
}

/// Solves the model along the grid in parameter order. Failed points are
/// kept as flagged rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(match spec.mode {
        SweepMode::Continuation => run_continuation(spec),
        SweepMode::Cold => run_cold(spec),
    })
}

/// Parameter values at which a continuation sweep's classification differs
/// from the previous converged row.
pub fn classification_flips(rows: &[SweepRow]) -> Vec<f64> {
    let mut prev: Option<&str> = None;
    let mut flips = Vec::new();
    for r in rows.iter().filter(|r| r.is_ok()) {
        let c = r.classification.as_deref();
        if prev.is_some() && c != prev {
            flips.push(r.value);
        }
        prev = c;
    }
    flips
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple_eq(q: f64) -> AnyEquilibrium {
        solve_simple(SimpleParams::new(q).unwrap(), 1e-12)
            .unwrap()
            .equilibrium
            .into()
    }

    #[test]
    fn u_shape_simple() {
        let u = check_u_shape(&simple_eq(0.75));
        assert!(u.u_shaped);
        assert_eq!(u.lower, Interval { lo: 0.0, hi: 0.5 });
        assert!((u.middle.hi - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(u.upper.hi, 1.0);
        assert!(!check_u_shape(&simple_eq(1.0)).u_shaped);
    }

    #[test]
    fn announcement_returns_simple() {
        let eq = simple_eq(0.75);
        let r = |a| announcement_return(&eq, a).unwrap();
        assert!((r(Announcement::Simple) - 1.0 / 12.0).abs() < 1e-12);
        assert!((r(Announcement::NoInformation) + 1.0 / 6.0).abs() < 1e-12);
        assert!(matches!(
            announcement_return(&eq, Announcement::BadSimple),
            Err(Error::OffPathMessage(_))
        ));
        assert!(matches!(
            announcement_return(&simple_eq(1.0), Announcement::Simple),
            Err(Error::OffPathMessage(_))
        ));
    }

    #[test]
    fn complex_propensity_simple() {
        assert!((complex_propensity(&simple_eq(0.75)) - 5.0 / 6.0).abs() < 1e-12);
        assert!((complex_propensity(&simple_eq(1.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_announcement_is_prior_consistent() {
        // Mass-weighted simple and complex returns cancel.
        let eq = simple_eq(0.8);
        let s = announcement_return(&eq, Announcement::Simple).unwrap();
        let c = announcement_return(&eq, Announcement::Complex).unwrap();
        let ms = eq.message_mass(Message::Simple);
        assert!((ms * s + (1.0 - ms) * c).abs() < 1e-12);
    }

    #[test]
    fn grid_endpoints() {
        let spec = SweepSpec::new(
            SweepParam::Q,
            0.68,
            0.99,
            50,
            ModelSpec::Simple(SimpleParams { q: 0.75 }),
        );
        let g = spec.grid();
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.68);
        assert_eq!(g[49], 0.99);
    }

    #[test]
    fn bad_specs() {
        let base = ModelSpec::Simple(SimpleParams { q: 0.75 });
        for spec in [
            SweepSpec::new(SweepParam::Q, 0.9, 0.7, 10, base),
            SweepSpec::new(SweepParam::Q, 0.7, 0.9, 1, base),
            SweepSpec::new(SweepParam::Q, 0.7, 1.2, 10, base),
            SweepSpec::new(SweepParam::Chi, 0.5, 0.9, 10, base),
        ] {
            assert!(matches!(run_sweep(&spec), Err(Error::InvalidParameter(_))), "{spec:?}");
        }
    }

    #[test]
    fn flips() {
        let mk = |v: f64, c: &str| SweepRow {
            classification: Some(c.to_string()),
            ..SweepRow::from_equilibrium(SweepParam::Q, v, &simple_eq(0.75))
        };
        let rows = vec![mk(0.1, "a"), mk(0.2, "a"), mk(0.3, "b"), mk(0.4, "b")];
        assert_eq!(classification_flips(&rows), vec![0.3]);
    }
}
