//! C interface to the strategic-complexity solvers.
//!
//! Every function returns an [`ScStatus`]. On failure a description is
//! available from [`sc_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their `_free` function; strings
//! returned by the library must be released with [`sc_string_free`].
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use strategic_complexity::dye::{solve_dye, DyeParams};
use strategic_complexity::full::{
    enumerate_equilibria, solve_full_with, Beliefs, Classification, FullEquilibrium, FullParams, SolverOptions,
};
use strategic_complexity::montecarlo::{verify_equilibrium, SimConfig};
use strategic_complexity::output::render_value;
use strategic_complexity::simple::{solve_simple, tau_closed_form, SimpleParams};
use strategic_complexity::{AnyEquilibrium, Error, ModelSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    InvalidParameter = 1,
    DomainError = 2,
    NoInteriorEquilibrium = 3,
    InvalidOrdering = 4,
    NoConvergence = 5,
    OffPathMessage = 6,
    ConfigError = 7,
    IoError = 8,
    NullPointer = 9,
    OutOfRange = 10,
    Panic = 11,
}

impl From<&Error> for ScStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::Usage(_) => ScStatus::InvalidParameter,
            Error::Domain(_) => ScStatus::DomainError,
            Error::NoInteriorEquilibrium { .. } => ScStatus::NoInteriorEquilibrium,
            Error::InvalidOrdering { .. } => ScStatus::InvalidOrdering,
            Error::NoConvergence { .. } => ScStatus::NoConvergence,
            Error::OffPathMessage(_) => ScStatus::OffPathMessage,
            Error::Config(_) => ScStatus::ConfigError,
            Error::Io(_) => ScStatus::IoError,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(ScStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(ScStatus::from(&e), format!("{}: {e}", e.code()))
    }
}

fn null(what: &str) -> Fail {
    Fail(ScStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any failure and converts panics to `Panic`.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> ScStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ScStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ScStatus::Panic
        }
    }
}

/// Writes through `out` after checking it.
unsafe fn write<T>(out: *mut T, what: &str, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScSimpleEquilibrium {
    pub q: f64,
    pub tau: f64,
    pub p_nondisc: f64,
    pub p_simple: f64,
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_tau_closed_form(q: f64, out: *mut f64) -> ScStatus {
    guard(|| {
        let tau = tau_closed_form(SimpleParams::new(q)?)?;
        write(out, "out", tau)
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_solve_simple(q: f64, tol: f64, out: *mut ScSimpleEquilibrium) -> ScStatus {
    guard(|| {
        let eq = solve_simple(SimpleParams::new(q)?, tol)?.equilibrium;
        write(
            out,
            "out",
            ScSimpleEquilibrium {
                q: eq.q,
                tau: eq.tau,
                p_nondisc: eq.p_nondisc,
                p_simple: eq.p_simple,
            },
        )
    })
}

/// # Safety
/// Both pointers must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_solve_dye(p_uninformed: f64, tol: f64, threshold: *mut f64, price: *mut f64) -> ScStatus {
    guard(|| {
        if threshold.is_null() || price.is_null() {
            return Err(null("output"));
        }
        let eq = solve_dye(&DyeParams::new(p_uninformed)?, tol)?;
        write(threshold, "threshold", eq.threshold)?;
        write(price, "price", eq.nondisclosure_price)
    })
}

/// Validated full-model parameters.
pub struct ScFullParams(FullParams);

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_full_params_new(
    chi: f64,
    rho_s: f64,
    rho_u: f64,
    forced_simple: f64,
    forced_obfuscate: f64,
    out: *mut *mut ScFullParams,
) -> ScStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = FullParams::new(chi, rho_s, rho_u, forced_simple, forced_obfuscate)?;
        write(out, "out", Box::into_raw(Box::new(ScFullParams(p))))
    })
}

/// # Safety
/// `params` must be null or a handle from `sc_full_params_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_full_params_free(params: *mut ScFullParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScFullEquilibrium {
    pub t1: f64,
    pub t2: f64,
    pub e_simple: f64,
    pub e_complex: f64,
    pub e_obfusc: f64,
    /// 1 when simple disclosures are good news, 0 otherwise.
    pub simple_good_news: i32,
    pub residual: f64,
    pub p_obfuscate: f64,
    pub p_simple: f64,
    pub p_informative: f64,
}

impl From<&FullEquilibrium> for ScFullEquilibrium {
    fn from(eq: &FullEquilibrium) -> Self {
        ScFullEquilibrium {
            t1: eq.t1,
            t2: eq.t2,
            e_simple: eq.beliefs.e_simple,
            e_complex: eq.beliefs.e_complex,
            e_obfusc: eq.beliefs.e_obfusc,
            simple_good_news: (eq.classification == Classification::SimpleGoodNews) as i32,
            residual: eq.residual,
            p_obfuscate: eq.masses.obfuscate,
            p_simple: eq.masses.simple,
            p_informative: eq.masses.informative,
        }
    }
}

unsafe fn params_ref<'a>(params: *const ScFullParams) -> Result<&'a FullParams, Fail> {
    params.as_ref().map(|p| &p.0).ok_or_else(|| null("params"))
}

/// Damped belief iteration from the given starting beliefs.
///
/// # Safety
/// `params` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_solve_full(
    params: *const ScFullParams,
    e_simple: f64,
    e_complex: f64,
    e_obfusc: f64,
    tol: f64,
    max_iter: usize,
    out: *mut ScFullEquilibrium,
) -> ScStatus {
    guard(|| {
        let p = params_ref(params)?;
        let init = Beliefs::new(e_simple, e_complex, e_obfusc);
        let eq = solve_full_with(p, &init, &SolverOptions::new(tol, max_iter))?;
        write(out, "out", ScFullEquilibrium::from(&eq))
    })
}

/// Distinct equilibria found by enumeration.
pub struct ScEquilibria(Vec<FullEquilibrium>);

/// # Safety
/// `params` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_enumerate(
    params: *const ScFullParams,
    n_starts: usize,
    tol: f64,
    out: *mut *mut ScEquilibria,
) -> ScStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = params_ref(params)?;
        let found = enumerate_equilibria(p, n_starts, tol)?;
        write(out, "out", Box::into_raw(Box::new(ScEquilibria(found.equilibria))))
    })
}

/// Number of equilibria in `list`, 0 for null.
///
/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_equilibria_len(list: *const ScEquilibria) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// # Safety
/// `list` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_equilibria_get(
    list: *const ScEquilibria,
    index: usize,
    out: *mut ScFullEquilibrium,
) -> ScStatus {
    guard(|| {
        let l = list.as_ref().ok_or_else(|| null("list"))?;
        let eq = l.0.get(index).ok_or_else(|| {
            Fail(
                ScStatus::OutOfRange,
                format!("index {index} out of range for {} equilibria", l.0.len()),
            )
        })?;
        write(out, "out", ScFullEquilibrium::from(eq))
    })
}

/// # Safety
/// `list` must be null or a handle from `sc_enumerate` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_equilibria_free(list: *mut ScEquilibria) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

unsafe fn simulate_json(
    model: ModelSpec,
    eq: AnyEquilibrium,
    n_draws: u64,
    seed: u64,
    z: f64,
    out: *mut *mut c_char,
) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let (report, verification) = verify_equilibrium(&SimConfig::new(n_draws, seed, model, eq.clone()), z)?;
    let value = serde_json::json!({ "equilibrium": eq, "report": report, "verification": verification });
    let text = CString::new(render_value(&value)).map_err(|e| Fail(ScStatus::IoError, e.to_string()))?;
    write(out, "out", text.into_raw())
}

/// Simulates the simple-model equilibrium at `q`; writes a JSON report to
/// `*out`, to be released with `sc_string_free`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_simulate_simple_json(
    q: f64,
    n_draws: u64,
    seed: u64,
    z_threshold: f64,
    out: *mut *mut c_char,
) -> ScStatus {
    guard(|| {
        let p = SimpleParams::new(q)?;
        let eq = solve_simple(p, strategic_complexity::simple::DEFAULT_TOL)?.equilibrium;
        simulate_json(ModelSpec::Simple(p), eq.into(), n_draws, seed, z_threshold, out)
    })
}

/// Simulates the full-model equilibrium reached from beliefs at the prior
/// mean.
///
/// # Safety
/// `params` must be a live handle; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sc_simulate_full_json(
    params: *const ScFullParams,
    n_draws: u64,
    seed: u64,
    z_threshold: f64,
    out: *mut *mut c_char,
) -> ScStatus {
    guard(|| {
        let p = *params_ref(params)?;
        let eq = solve_full_with(&p, &Beliefs::uniform(p.prior_mean()), &SolverOptions::default())?;
        simulate_json(ModelSpec::Full(p), eq.into(), n_draws, seed, z_threshold, out)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a nul byte"),
    };
    VERSION.as_ptr()
}
