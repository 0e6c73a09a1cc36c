//! Bracketed scalar root finding: plain bisection and a bisection/secant
//! hybrid that keeps the sign-change bracket at every step.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Stop once `|f(x)| <= ftol`.
    pub ftol: f64,
    /// Stop once the bracket is narrower than `xtol`.
    pub xtol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(ftol: f64, xtol: f64, max_iter: usize) -> Self {
        Tolerance { ftol, xtol, max_iter }
    }
}

fn check_bracket<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a < b) {
        return Err(Error::Domain(format!("empty bracket [{a}, {b}]")));
    }
    let (fa, fb) = (f(a), f(b));
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite endpoint values f({a}) = {fa}, f({b}) = {fb}"
        )));
    }
    Ok((fa, fb))
}

/// Bisection on `[a, b]`. Returns `Error::Domain` when `f` has no sign
/// change on the bracket; callers map that to their own error.
pub fn bisect<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Root> {
    let (mut a, mut b) = (a, b);
    let (mut fa, fb) = check_bracket(&f, a, b)?;
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!("no sign change on [{a}, {b}]")));
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for it in 1..=tol.max_iter {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm == 0.0 || fm.abs() <= tol.ftol || (b - a) <= tol.xtol {
            return Ok(Root {
                x: m,
                residual: fm,
                iterations: it,
            });
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iter,
        residual: best.1.abs(),
    })
}

/// Bisection to shrink the bracket, secant steps once they land inside it
/// and make progress. Termination requires the residual test or a bracket
/// narrower than `xtol`.
pub fn bisect_secant<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Root> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = check_bracket(&f, a, b)?;
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!("no sign change on [{a}, {b}]")));
    }
    // Last two iterates for the secant step.
    let (mut x0, mut f0) = (a, fa);
    let (mut x1, mut f1) = (b, fb);
    let mut width = b - a;
    for it in 1..=tol.max_iter {
        let mut x = f64::NAN;
        if f1 != f0 {
            let s = x1 - f1 * (x1 - x0) / (f1 - f0);
            // Accept the secant step only if it stays strictly inside the
            // bracket and the bracket halved over the last two steps.
            if s > a && s < b && (b - a) <= 0.5 * width {
                x = s;
            }
        }
        if !x.is_finite() {
            x = 0.5 * (a + b);
        }
        width = b - a;
        let fx = f(x);
        if fx == 0.0 || fx.abs() <= tol.ftol {
            return Ok(Root {
                x,
                residual: fx,
                iterations: it,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        x0 = x1;
        f0 = f1;
        x1 = x;
        f1 = fx;
        if b - a <= tol.xtol {
            let (x, fx) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
            return Ok(Root {
                x,
                residual: fx,
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iter,
        residual: fa.abs().min(fb.abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let tol = Tolerance::new(1e-14, 1e-14, 200);
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, tol).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
        let r = bisect_secant(|x| x * x - 2.0, 0.0, 2.0, tol).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn hybrid_is_faster_on_smooth_functions() {
        let tol = Tolerance::new(1e-15, 1e-15, 200);
        let f = |x: f64| x.exp() - 3.0;
        let plain = bisect(f, 0.0, 3.0, tol).unwrap();
        let hybrid = bisect_secant(f, 0.0, 3.0, tol).unwrap();
        assert!((hybrid.x - 3f64.ln()).abs() < 1e-14);
        assert!(hybrid.iterations < plain.iterations);
    }

    #[test]
    fn flat_then_steep_still_brackets() {
        // Secant steps stall on this shape; bisection fallback must finish.
        let f = |x: f64| if x < 0.9 { -1e-3 } else { (x - 0.95) * 100.0 };
        let r = bisect_secant(f, 0.0, 1.0, Tolerance::new(1e-13, 1e-13, 300)).unwrap();
        assert!((r.x - 0.95).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change() {
        let tol = Tolerance::new(1e-12, 1e-12, 100);
        assert!(matches!(bisect(|x| x * x + 1.0, -1.0, 1.0, tol), Err(Error::Domain(_))));
        assert!(matches!(
            bisect_secant(|x| x * x + 1.0, -1.0, 1.0, tol),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn budget_exhaustion() {
        let tol = Tolerance::new(0.0, 0.0, 5);
        assert!(matches!(
            bisect(|x| x - 0.3, 0.0, 1.0, tol),
            Err(Error::NoConvergence { iterations: 5, .. })
        ));
    }
}
