//! Command-line front end.
//!
//! [`run`] parses the arguments, executes one subcommand and renders the
//! whole result before anything is written, so a failing run prints only
//! a single `CODE: message` line on stderr.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::FileConfig;
use crate::dye::{self, dye_threshold_uniform, solve_dye, DyeParams};
use crate::error::{Error, Result};
use crate::figure::{figure_menus, figure_multiplicity, figure_simple, Panel, FIGURE_COLUMNS};
use crate::full::{
    self, belief_lattice, enumerate_from, solve_full_with, Beliefs, FullEquilibrium, FullParams, Menu, SolverOptions,
};
use crate::model::{AnyEquilibrium, ModelSpec};
use crate::montecarlo::{verify_equilibrium, SimConfig, DEFAULT_Z_THRESHOLD};
use crate::output::{render_value, to_csv, Cell};
use crate::simple::{self, price_schedule_simple, solve_simple, SimpleParams};
use crate::statics::{
    announcement_return, check_u_shape, classification_flips, complex_propensity, run_sweep, Announcement, SweepMode,
    SweepParam, SweepSpec, SWEEP_COLUMNS,
};

/// Parameters of the figure 1 example.
pub const FIGURE1_DEFAULTS: FullParams = FullParams {
    chi: 0.7,
    rho_s: 0.5,
    rho_u: 0.2,
    forced_simple: 0.1,
    forced_obfuscate: 0.1,
    dist: crate::valuation::ValuationDistribution::Uniform01,
};

/// A point with both kinds of equilibrium, used by figure 2.
pub const FIGURE2_DEFAULTS: FullParams = FullParams {
    rho_s: 0.65,
    ..FIGURE1_DEFAULTS
};

pub const DEFAULT_N_STARTS: usize = 5;

#[derive(Debug, Parser)]
#[command(
    name = "strategic-complexity",
    version,
    about = "Equilibria of disclosure-complexity games"
)]
pub struct Cli {
    /// Output format; figures default to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Solver tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Simulation seed (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Simple,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MenuArg {
    Full,
    ComplexOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Continuation,
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PanelArg {
    Left,
    Right,
    Both,
}

/// Full-model parameters from a config file and flags.
#[derive(Debug, Clone, Default, Args)]
pub struct FullArgs {
    /// Flat JSON file of parameters; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Fraction of sophisticated investors
    #[arg(long)]
    pub chi: Option<f64>,
    /// Probability a simple disclosure is informative
    #[arg(long = "rho-s", alias = "rho_s")]
    pub rho_s: Option<f64>,
    /// Probability a sophisticated investor reads through obfuscation
    #[arg(long = "rho-u", alias = "rho_u")]
    pub rho_u: Option<f64>,
    /// Mass of managers who must send the simple message
    #[arg(long = "forced-simple", alias = "forced_simple")]
    pub forced_simple: Option<f64>,
    /// Mass of managers who must send a complex uninformative disclosure
    #[arg(long = "forced-obfuscate", alias = "forced_obfuscate")]
    pub forced_obfuscate: Option<f64>,
    /// Iteration budget
    #[arg(long = "max-iter", alias = "max_iter")]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    pub menu: Option<MenuArg>,
    /// Starting beliefs `e_simple,e_complex,e_obfusc`.
    #[arg(long, value_parser = parse_beliefs)]
    pub init: Option<Beliefs>,
    /// Starts per belief axis when enumerating.
    #[arg(long = "n-starts", alias = "n_starts")]
    pub n_starts: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form equilibrium of the one-parameter model.
    SolveSimple {
        /// Probability a complex informative disclosure is understood, in (2/3, 1]
        #[arg(long)]
        q: f64,
    },
    /// Equilibrium of the three-message model.
    SolveFull {
        #[command(flatten)]
        full: FullArgs,
        /// Search a lattice of starting beliefs for every equilibrium.
        #[arg(long)]
        enumerate: bool,
    },
    /// Solve along a parameter grid.
    Sweep {
        #[arg(long, value_enum)]
        model: ModelKind,
        /// q, chi, rho_s, rho_u, forced_simple or forced_obfuscate.
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Grid points, at least 2
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value = "continuation")]
        mode: ModeArg,
        #[command(flatten)]
        full: FullArgs,
    },
    /// Simulate an equilibrium and compare with its analytic values.
    Simulate {
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        q: Option<f64>,
        /// Number of draws.
        #[arg(long)]
        n: Option<u64>,
        /// Largest acceptable |z|.
        #[arg(long)]
        z: Option<f64>,
        #[command(flatten)]
        full: FullArgs,
    },
    /// Plot data for figure 1, 2 or 3.
    Figure {
        /// 1, 2 or 3
        #[arg(long)]
        which: u8,
        #[arg(long, value_enum, default_value = "both")]
        panel: PanelArg,
        /// Figure 3 only.
        #[arg(long, default_value_t = 0.75)]
        q: f64,
        #[command(flatten)]
        full: FullArgs,
    },
    /// Two-message baseline with exogenous silence.
    SolveDye {
        /// Probability the manager is uninformed.
        #[arg(long)]
        p: f64,
    },
}

fn parse_beliefs(s: &str) -> std::result::Result<Beliefs, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let [a, b, c] = parts[..] else {
        return Err("expected three comma-separated beliefs".into());
    };
    let beliefs = Beliefs::new(a, b, c);
    if !beliefs.is_valid() {
        return Err("beliefs must lie in [0, 1]".into());
    }
    Ok(beliefs)
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_line(e: &Error) -> String {
    format!("{}: {}\n", e.code(), e.to_string().replace('\n', " "))
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                };
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let err = Error::Usage(first.trim_start_matches("error: ").to_string());
            return Outcome {
                code: err.exit_code(),
                stdout: String::new(),
                stderr: error_line(&err),
            };
        }
    };
    let result = execute(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, &text)
            .map(|_| String::new())
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => Ok(text),
    });
    match result {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: error_line(&e),
        },
    }
}

/// Executes the subcommand and returns the rendered output.
pub fn execute(cli: &Cli) -> Result<String> {
    if let Some(tol) = cli.tol {
        check_tol(tol)?;
    }
    match &cli.command {
        Command::SolveSimple { q } => cmd_solve_simple(cli, *q),
        Command::SolveFull { full, enumerate } => cmd_solve_full(cli, full, *enumerate),
        Command::Sweep {
            model,
            param,
            from,
            to,
            steps,
            mode,
            full,
        } => cmd_sweep(cli, *model, param, *from, *to, *steps, *mode, full),
        Command::Simulate { model, q, n, z, full } => cmd_simulate(cli, *model, *q, *n, *z, full),
        Command::Figure { which, panel, q, full } => cmd_figure(cli, *which, *panel, *q, full),
        Command::SolveDye { p } => cmd_solve_dye(cli, *p),
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tol = {tol} must be positive")));
    }
    Ok(())
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

fn resolve(full: &FullArgs) -> Result<FileConfig> {
    let file = match &full.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = FileConfig {
        chi: full.chi,
        rho_s: full.rho_s,
        rho_u: full.rho_u,
        forced_simple: full.forced_simple,
        forced_obfuscate: full.forced_obfuscate,
        menu: full.menu.map(|m| match m {
            MenuArg::Full => Menu::Full,
            MenuArg::ComplexOnly => Menu::ComplexOnly,
        }),
        max_iter: full.max_iter,
        n_starts: full.n_starts,
        ..Default::default()
    };
    Ok(file.overlay(flags))
}

/// Global flag, then config file, then `default`.
fn tol_for(cli: &Cli, cfg: &FileConfig, default: f64) -> Result<f64> {
    let tol = cli.tol.or(cfg.tol).unwrap_or(default);
    check_tol(tol)?;
    Ok(tol)
}

fn solver_options(cli: &Cli, cfg: &FileConfig) -> Result<SolverOptions> {
    let tol = tol_for(cli, cfg, full::DEFAULT_TOL)?;
    let max_iter = cfg.max_iter.unwrap_or(full::DEFAULT_MAX_ITER);
    if max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be positive".into()));
    }
    Ok(SolverOptions {
        tol,
        max_iter,
        menu: cfg.menu.unwrap_or_default(),
        ..Default::default()
    })
}

fn n_starts(cfg: &FileConfig) -> Result<usize> {
    let n = cfg.n_starts.unwrap_or(DEFAULT_N_STARTS);
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n_starts = {n} must be at least 2")));
    }
    Ok(n)
}

fn regions_json(eq: &AnyEquilibrium) -> Value {
    let u = check_u_shape(eq);
    json!({
        "u_shaped": u.u_shaped,
        "lower": [u.lower.lo, u.lower.hi],
        "middle": [u.middle.lo, u.middle.hi],
        "upper": [u.upper.lo, u.upper.hi],
    })
}

fn returns_json(eq: &AnyEquilibrium) -> Value {
    let mut m = serde_json::Map::new();
    for a in [
        Announcement::Simple,
        Announcement::Complex,
        Announcement::Obfuscated,
        Announcement::Informative,
    ] {
        m.insert(
            a.as_str().to_string(),
            announcement_return(eq, a).ok().map_or(Value::Null, |r| json!(r)),
        );
    }
    Value::Object(m)
}

fn cmd_solve_simple(cli: &Cli, q: f64) -> Result<String> {
    let params = SimpleParams::new(q)?;
    let tol = tol_for(cli, &FileConfig::default(), simple::DEFAULT_TOL)?;
    let sol = solve_simple(params, tol)?;
    let eq = sol.equilibrium;
    match format_or(cli, Format::Json) {
        Format::Csv => to_csv(
            &[
                "q",
                "tau",
                "p_nondisc",
                "p_simple",
                "tau_closed_form",
                "tau_fixed_point",
                "agreement",
            ],
            &[vec![
                q.into(),
                eq.tau.into(),
                eq.p_nondisc.into(),
                eq.p_simple.into(),
                sol.tau_closed_form.into(),
                sol.tau_fixed_point.into(),
                sol.agreement.into(),
            ]],
        ),
        Format::Json => {
            let schedule: Vec<Value> = price_schedule_simple(&eq)
                .into_iter()
                .map(|(r, line)| {
                    json!({"message": r.message, "lo": r.lo, "hi": r.hi, "price_slope": line.slope, "price_intercept": line.intercept})
                })
                .collect();
            let mut notices = Vec::new();
            if sol.tau_fixed_point.is_none() {
                notices.push("fixed-point check skipped at q = 1; closed form only");
            }
            let any = AnyEquilibrium::Simple(eq);
            Ok(render_value(&json!({
                "model": "simple",
                "q": q,
                "tau": eq.tau,
                "p_nondisc": eq.p_nondisc,
                "p_simple": eq.p_simple,
                "tau_closed_form": sol.tau_closed_form,
                "tau_fixed_point": sol.tau_fixed_point,
                "agreement": sol.agreement,
                "regions": schedule,
                "complexity": regions_json(&any),
                "complex_propensity": complex_propensity(&any),
                "announcement_returns": returns_json(&any),
                "notices": notices,
            })))
        }
    }
}

fn full_json(eq: &FullEquilibrium) -> Value {
    let any = AnyEquilibrium::Full(eq.clone());
    json!({
        "t1": eq.t1,
        "t2": eq.t2,
        "beliefs": eq.beliefs,
        "classification": eq.classification,
        "residual": eq.residual,
        "iterations": eq.iterations,
        "masses": eq.masses,
        "regions": eq.regions(),
        "complexity": regions_json(&any),
        "complex_propensity": complex_propensity(&any),
        "announcement_returns": returns_json(&any),
    })
}

const FULL_COLUMNS: [&str; 13] = [
    "index",
    "t1",
    "t2",
    "e_simple",
    "e_complex",
    "e_obfusc",
    "classification",
    "residual",
    "iterations",
    "p_obfuscate",
    "p_simple",
    "p_informative",
    "u_shaped",
];

fn full_row(k: usize, eq: &FullEquilibrium) -> Vec<Cell> {
    vec![
        k.into(),
        eq.t1.into(),
        eq.t2.into(),
        eq.beliefs.e_simple.into(),
        eq.beliefs.e_complex.into(),
        eq.beliefs.e_obfusc.into(),
        eq.classification.as_str().into(),
        eq.residual.into(),
        eq.iterations.into(),
        eq.masses.obfuscate.into(),
        eq.masses.simple.into(),
        eq.masses.informative.into(),
        eq.has_interior_simple_region().into(),
    ]
}

fn solve_one_full(params: &FullParams, init: Option<Beliefs>, opts: &SolverOptions) -> Result<FullEquilibrium> {
    let init = init.unwrap_or_else(|| Beliefs::uniform(params.prior_mean()));
    solve_full_with(params, &init, opts)
}

fn cmd_solve_full(cli: &Cli, full: &FullArgs, enumerate: bool) -> Result<String> {
    let cfg = resolve(full)?;
    let params = cfg.full_params(None)?;
    let opts = solver_options(cli, &cfg)?;
    let (equilibria, attempts, failed) = if enumerate {
        let found = enumerate_from(&params, &belief_lattice(n_starts(&cfg)?), &opts)?.nonempty(opts.max_iter)?;
        (found.equilibria, found.attempts, found.failed)
    } else {
        (vec![solve_one_full(&params, full.init, &opts)?], 1, 0)
    };
    match format_or(cli, Format::Json) {
        Format::Csv => {
            let rows: Vec<_> = equilibria.iter().enumerate().map(|(k, e)| full_row(k, e)).collect();
            to_csv(&FULL_COLUMNS, &rows)
        }
        Format::Json => Ok(render_value(&json!({
            "model": "full",
            "params": params,
            "menu": opts.menu,
            "tol": opts.tol,
            "enumerated": enumerate,
            "attempts": attempts,
            "failed": failed,
            "equilibria": equilibria.iter().map(full_json).collect::<Vec<_>>(),
        }))),
    }
}

/// Range checks for the parameters a sweep holds fixed.
fn check_fixed_ranges(p: &FullParams, swept: SweepParam) -> Result<()> {
    let probs = [
        (SweepParam::Chi, p.chi),
        (SweepParam::RhoS, p.rho_s),
        (SweepParam::RhoU, p.rho_u),
    ];
    for (name, v) in probs {
        if name != swept && !(v > 0.0 && v < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "{} = {v} must lie in (0, 1)",
                name.as_str()
            )));
        }
    }
    for (name, v) in [
        (SweepParam::ForcedSimple, p.forced_simple),
        (SweepParam::ForcedObfuscate, p.forced_obfuscate),
    ] {
        if name != swept && !(0.0..1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "{} = {v} must lie in [0, 1)",
                name.as_str()
            )));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    cli: &Cli,
    model: ModelKind,
    param: &str,
    from: f64,
    to: f64,
    steps: usize,
    mode: ModeArg,
    full: &FullArgs,
) -> Result<String> {
    let param = SweepParam::parse(param)?;
    let mut cfg = resolve(full)?;
    let base = match model {
        ModelKind::Simple => ModelSpec::Simple(SimpleParams { q: from }),
        ModelKind::Full => {
            // The swept value is replaced at every point.
            match param {
                SweepParam::Chi => cfg.chi = cfg.chi.or(Some(from)),
                SweepParam::RhoS => cfg.rho_s = cfg.rho_s.or(Some(from)),
                SweepParam::RhoU => cfg.rho_u = cfg.rho_u.or(Some(from)),
                SweepParam::ForcedSimple => cfg.forced_simple = cfg.forced_simple.or(Some(from)),
                SweepParam::ForcedObfuscate => cfg.forced_obfuscate = cfg.forced_obfuscate.or(Some(from)),
                SweepParam::Q => {}
            }
            let p = cfg.full_params_unchecked(None)?;
            check_fixed_ranges(&p, param)?;
            ModelSpec::Full(p)
        }
    };
    let default_tol = if model == ModelKind::Simple {
        simple::DEFAULT_TOL
    } else {
        full::DEFAULT_TOL
    };
    let spec = SweepSpec {
        mode: match mode {
            ModeArg::Continuation => SweepMode::Continuation,
            ModeArg::Cold => SweepMode::Cold,
        },
        tol: tol_for(cli, &cfg, default_tol)?,
        init: full.init,
        n_starts: n_starts(&cfg)?,
        ..SweepSpec::new(param, from, to, steps, base)
    };
    let rows = run_sweep(&spec)?;
    match format_or(cli, Format::Json) {
        Format::Csv => {
            let cells: Vec<Vec<Cell>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.param.as_str().into(),
                        r.value.into(),
                        r.status.as_str().into(),
                        r.equilibrium_lost.into(),
                        r.branch.into(),
                        r.n_equilibria.into(),
                        r.t1.into(),
                        r.t2.into(),
                        r.e_simple.into(),
                        r.e_complex.into(),
                        r.e_obfusc.into(),
                        r.price_no_information.into(),
                        r.classification.clone().into(),
                        r.p_obfuscate.into(),
                        r.p_simple.into(),
                        r.p_informative.into(),
                        r.p_complex.into(),
                        r.return_simple.into(),
                        r.return_complex.into(),
                        r.mass_total.into(),
                    ]
                })
                .collect();
            to_csv(&SWEEP_COLUMNS, &cells)
        }
        Format::Json => {
            let flips = (spec.mode == SweepMode::Continuation).then(|| classification_flips(&rows));
            Ok(render_value(&json!({
                "spec": spec,
                "rows": rows,
                "classification_flips": flips,
            })))
        }
    }
}

fn cmd_simulate(
    cli: &Cli,
    model: ModelKind,
    q: Option<f64>,
    n: Option<u64>,
    z: Option<f64>,
    full: &FullArgs,
) -> Result<String> {
    let cfg = resolve(full)?;
    let n_draws = n
        .or(cfg.n_draws)
        .ok_or_else(|| Error::InvalidParameter("missing --n (number of draws)".into()))?;
    if n_draws == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let z = z.or(cfg.z_threshold).unwrap_or(DEFAULT_Z_THRESHOLD);
    if !(z > 0.0) {
        return Err(Error::InvalidParameter(format!("z = {z} must be positive")));
    }
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let (spec, eq) = match model {
        ModelKind::Simple => {
            let q = q
                .or(cfg.q)
                .ok_or_else(|| Error::InvalidParameter("missing --q".into()))?;
            let params = SimpleParams::new(q)?;
            let tol = tol_for(cli, &cfg, simple::DEFAULT_TOL)?;
            (
                ModelSpec::Simple(params),
                AnyEquilibrium::Simple(solve_simple(params, tol)?.equilibrium),
            )
        }
        ModelKind::Full => {
            let params = cfg.full_params(None)?;
            let opts = solver_options(cli, &cfg)?;
            (
                ModelSpec::Full(params),
                AnyEquilibrium::Full(solve_one_full(&params, full.init, &opts)?),
            )
        }
    };
    let (report, verification) = verify_equilibrium(&SimConfig::new(n_draws, seed, spec, eq.clone()), z)?;
    match format_or(cli, Format::Json) {
        Format::Csv => {
            let verdict = serde_json::to_value(verification.verdict)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            let rows: Vec<Vec<Cell>> = report
                .statistics
                .iter()
                .map(|s| {
                    vec![
                        s.name.as_str().into(),
                        s.analytic.into(),
                        s.empirical.into(),
                        s.std_error.into(),
                        s.z.into(),
                        s.count.into(),
                        s.z.map_or(Cell::Empty, |v| Cell::Bool(v.abs() <= z)),
                        verdict.as_str().into(),
                    ]
                })
                .collect();
            to_csv(
                &[
                    "statistic",
                    "analytic",
                    "empirical",
                    "std_error",
                    "z",
                    "count",
                    "within_threshold",
                    "verdict",
                ],
                &rows,
            )
        }
        Format::Json => Ok(render_value(&json!({
            "equilibrium": eq,
            "report": report,
            "verification": verification,
        }))),
    }
}

fn cmd_figure(cli: &Cli, which: u8, panel: PanelArg, q: f64, full: &FullArgs) -> Result<String> {
    let cfg = resolve(full)?;
    let figure = match which {
        1 | 2 => {
            let defaults = if which == 1 { FIGURE1_DEFAULTS } else { FIGURE2_DEFAULTS };
            let params = cfg.full_params(Some(&defaults))?;
            let opts = solver_options(cli, &cfg)?;
            if which == 1 {
                let panel = match panel {
                    PanelArg::Left => Panel::Left,
                    PanelArg::Right => Panel::Right,
                    PanelArg::Both => Panel::Both,
                };
                figure_menus(&params, panel, &opts)?
            } else {
                figure_multiplicity(&params, n_starts(&cfg)?, opts.tol)?
            }
        }
        3 => figure_simple(q, tol_for(cli, &cfg, simple::DEFAULT_TOL)?)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown figure {other}; expected 1, 2 or 3"
            )))
        }
    };
    match format_or(cli, Format::Csv) {
        Format::Csv => to_csv(&FIGURE_COLUMNS, &figure.csv_rows()),
        Format::Json => crate::output::to_json(&figure),
    }
}

fn cmd_solve_dye(cli: &Cli, p: f64) -> Result<String> {
    let params = DyeParams::new(p)?;
    let tol = tol_for(cli, &FileConfig::default(), dye::DEFAULT_TOL)?;
    let eq = solve_dye(&params, tol)?;
    let closed = dye_threshold_uniform(p);
    match format_or(cli, Format::Json) {
        Format::Csv => to_csv(
            &["p_uninformed", "threshold", "nondisclosure_price", "closed_form"],
            &[vec![
                p.into(),
                eq.threshold.into(),
                eq.nondisclosure_price.into(),
                closed.into(),
            ]],
        ),
        Format::Json => Ok(render_value(&json!({
            "model": "dye",
            "p_uninformed": p,
            "threshold": eq.threshold,
            "nondisclosure_price": eq.nondisclosure_price,
            "closed_form": closed,
            "abs_error": (eq.threshold - closed).abs(),
        }))),
    }
}
