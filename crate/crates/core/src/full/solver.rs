use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::beliefs::pools;
use super::envelope::envelope_thresholds;
use super::{price_lines, Beliefs, FullEquilibrium, FullParams, Menu};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_DAMPING: f64 = 0.5;
/// Floor for the adaptive damping factor.
const MIN_DAMPING: f64 = 1.0 / 1024.0;
const NEWTON_MAX_ITER: usize = 100;
const FD_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Initial weight on the Bayes update; halved whenever the residual
    /// grows, down to 1/1024.
    pub damping: f64,
    pub menu: Menu,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            damping: DEFAULT_DAMPING,
            menu: Menu::Full,
        }
    }
}

impl SolverOptions {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        SolverOptions {
            tol,
            max_iter,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "damping = {} must lie in (0, 1]",
                self.damping
            )));
        }
        Ok(())
    }
}

/// Parameters actually faced by managers under `menu`.
fn effective(params: &FullParams, menu: Menu) -> FullParams {
    match menu {
        Menu::Full => *params,
        Menu::ComplexOnly => FullParams {
            forced_simple: 0.0,
            ..*params
        },
    }
}

/// Best response to `b` followed by the Bayes update.
fn best_response_update(params: &FullParams, menu: Menu, b: &Beliefs) -> Result<Beliefs> {
    let t = envelope_thresholds(&price_lines(params, b), menu)?;
    Ok(pools(params, t.t1, t.t2)?.beliefs)
}

fn build(params: &FullParams, menu: Menu, b: Beliefs, residual: f64, iterations: usize) -> Result<FullEquilibrium> {
    let eff = effective(params, menu);
    let t = envelope_thresholds(&price_lines(&eff, &b), menu)?;
    let pools = pools(&eff, t.t1, t.t2)?;
    Ok(FullEquilibrium {
        params: *params,
        menu,
        t1: t.t1,
        t2: t.t2,
        beliefs: b,
        classification: super::classify(pools.beliefs.e_simple, pools.beliefs.e_complex),
        residual,
        iterations,
        masses: pools.masses,
    })
}

fn check_init(init: &Beliefs) -> Result<()> {
    if !init.is_valid() {
        return Err(Error::Domain(format!("initial beliefs {init:?} must lie in [0, 1]")));
    }
    Ok(())
}

pub fn solve_full_equilibrium(
    params: &FullParams,
    init: &Beliefs,
    tol: f64,
    max_iter: usize,
) -> Result<FullEquilibrium> {
    solve_full_with(params, init, &SolverOptions::new(tol, max_iter))
}

/// Damped best-response iteration on beliefs.
///
/// Each step moves the beliefs a fraction `damping` toward the Bayes update
/// of the envelope partition they induce. Equilibria where the update
/// overshoots (negative slope of the map) make the residual grow, which
/// halves the damping. Converges once the sup-norm gap between the beliefs
/// and their update is at most `tol`.
pub fn solve_full_with(params: &FullParams, init: &Beliefs, opts: &SolverOptions) -> Result<FullEquilibrium> {
    params.validate()?;
    opts.validate()?;
    check_init(init)?;
    let eff = effective(params, opts.menu);
    let mut b = *init;
    let mut damping = opts.damping;
    let mut prev = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for it in 0..opts.max_iter {
        let next = best_response_update(&eff, opts.menu, &b)?;
        residual = next.sup_distance(&b);
        if residual <= opts.tol {
            return build(params, opts.menu, b, residual, it);
        }
        if residual > prev {
            damping = (0.5 * damping).max(MIN_DAMPING);
        }
        prev = residual;
        let (cur, upd) = (b.to_array(), next.to_array());
        b = Beliefs::from_array([0, 1, 2].map(|k| (1.0 - damping) * cur[k] + damping * upd[k]));
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

fn solve3(mut a: [[f64; 3]; 3], mut rhs: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (v, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= f * p;
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (rhs[row] - s) / a[row][row];
    }
    Some(x)
}

/// Newton's method on `update(b) - b` with a finite-difference Jacobian and
/// backtracking. Reaches equilibria that repel best-response iteration.
pub fn solve_full_newton(params: &FullParams, init: &Beliefs, opts: &SolverOptions) -> Result<FullEquilibrium> {
    params.validate()?;
    opts.validate()?;
    check_init(init)?;
    let eff = effective(params, opts.menu);
    let gap = |b: &[f64; 3]| -> Result<[f64; 3]> {
        let u = best_response_update(&eff, opts.menu, &Beliefs::from_array(*b))?.to_array();
        Ok([u[0] - b[0], u[1] - b[1], u[2] - b[2]])
    };
    let norm = |g: &[f64; 3]| g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let budget = opts.max_iter.min(NEWTON_MAX_ITER);

    let mut b = init.to_array();
    let mut g = gap(&b)?;
    let mut residual = norm(&g);
    for it in 0..budget {
        if residual <= opts.tol {
            return build(params, opts.menu, Beliefs::from_array(b), residual, it);
        }
        let mut jac = [[0.0; 3]; 3];
        for j in 0..3 {
            let h = if b[j] + FD_STEP <= 1.0 { FD_STEP } else { -FD_STEP };
            let mut bh = b;
            bh[j] += h;
            let gh = gap(&bh)?;
            for i in 0..3 {
                jac[i][j] = (gh[i] - g[i]) / h;
            }
        }
        let Some(step) = solve3(jac, g.map(|v| -v)) else { break };
        let mut scale = 1.0;
        let mut accepted = false;
        while scale > 1e-6 {
            let trial = [0, 1, 2].map(|k| (b[k] + scale * step[k]).clamp(0.0, 1.0));
            let gt = gap(&trial)?;
            if norm(&gt) < residual {
                b = trial;
                g = gt;
                residual = norm(&gt);
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if residual <= opts.tol {
        return build(params, opts.menu, Beliefs::from_array(b), residual, budget);
    }
    Err(Error::NoConvergence {
        iterations: budget,
        residual,
    })
}

/// `n^3` initial conjectures on an evenly spaced grid over `[0, 1]^3`.
pub fn belief_lattice(n: usize) -> Vec<Beliefs> {
    let axis: Vec<f64> = (0..n)
        .map(|i| if n == 1 { 0.5 } else { i as f64 / (n - 1) as f64 })
        .collect();
    let mut out = Vec::with_capacity(n * n * n);
    for &s in &axis {
        for &c in &axis {
            for &o in &axis {
                out.push(Beliefs::new(s, c, o));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Enumeration {
    pub equilibria: Vec<FullEquilibrium>,
    /// Solver runs attempted (two per start: damped iteration and Newton).
    pub attempts: usize,
    /// Runs that did not converge.
    pub failed: usize,
    /// Smallest residual reached by a failed run.
    #[serde(skip)]
    pub best_failed_residual: Option<f64>,
}

impl Enumeration {
    /// `NoConvergence` when no start found an equilibrium; `max_iter` is
    /// the per-run budget that was used.
    pub fn nonempty(self, max_iter: usize) -> Result<Self> {
        if self.equilibria.is_empty() {
            return Err(Error::NoConvergence {
                iterations: max_iter,
                residual: self.best_failed_residual.unwrap_or(f64::NAN),
            });
        }
        Ok(self)
    }
}

/// Runs both solvers from every start and keeps distinct equilibria,
/// sorted by `(t1, t2)`.
pub fn enumerate_from(params: &FullParams, starts: &[Beliefs], opts: &SolverOptions) -> Result<Enumeration> {
    params.validate()?;
    opts.validate()?;
    let runs: Vec<Result<FullEquilibrium>> = starts
        .par_iter()
        .flat_map_iter(|s| [solve_full_with(params, s, opts), solve_full_newton(params, s, opts)])
        .map(|eq| eq.map(|eq| polish(eq, opts)))
        .collect();
    let failed = runs.iter().filter(|r| r.is_err()).count();
    let best_failed_residual = runs
        .iter()
        .filter_map(|r| match r {
            Err(Error::NoConvergence { residual, .. }) if residual.is_finite() => Some(*residual),
            _ => None,
        })
        .min_by(f64::total_cmp);
    let key_tol = 10.0 * opts.tol;
    let mut distinct: Vec<FullEquilibrium> = Vec::new();
    for eq in runs.into_iter().flatten() {
        let dup = distinct
            .iter()
            .any(|d| (d.t1 - eq.t1).abs() < key_tol && (d.t2 - eq.t2).abs() < key_tol);
        if !dup {
            distinct.push(eq);
        }
    }
    distinct.sort_by(|a, b| a.t1.total_cmp(&b.t1).then(a.t2.total_cmp(&b.t2)));
    Ok(Enumeration {
        equilibria: distinct,
        attempts: 2 * starts.len(),
        failed,
        best_failed_residual,
    })
}

/// Tightens a converged equilibrium so duplicates found from different
/// starts land well inside the deduplication radius.
fn polish(eq: FullEquilibrium, opts: &SolverOptions) -> FullEquilibrium {
    let tight = SolverOptions {
        tol: (opts.tol * 1e-3).max(1e-14),
        ..*opts
    };
    match solve_full_newton(&eq.params, &eq.beliefs, &tight) {
        Ok(p) if p.residual < eq.residual && p.beliefs.sup_distance(&eq.beliefs) < 10.0 * opts.tol => FullEquilibrium {
            iterations: eq.iterations,
            ..p
        },
        _ => eq,
    }
}

/// Enumeration from an `n_starts`-per-axis lattice of initial beliefs.
pub fn enumerate_equilibria(params: &FullParams, n_starts: usize, tol: f64) -> Result<Enumeration> {
    if n_starts < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_starts = {n_starts} must be at least 2"
        )));
    }
    enumerate_from(
        params,
        &belief_lattice(n_starts),
        &SolverOptions::new(tol, DEFAULT_MAX_ITER),
    )
}
