//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::time::{Duration, Instant};

use serde_json::Value;
use strategic_complexity::dye::{dye_threshold_uniform, solve_dye, DyeParams};
use strategic_complexity::full::{enumerate_equilibria, update_beliefs, Classification, FullEquilibrium, FullParams};
use strategic_complexity::montecarlo::{simulate, SimConfig, SimReport};
use strategic_complexity::schedule::message_at;
use strategic_complexity::simple::{
    nondisclosure_price_bayes, quadratic_residual, simple_price, solve_simple_fixed_point, tau_closed_form,
    SimpleParams,
};
use strategic_complexity::statics::{announcement_return, check_u_shape, Announcement};
use strategic_complexity::{AnyEquilibrium, ModelSpec, ValuationDistribution};

type Check = std::result::Result<String, String>;

const SEED: u64 = 42;

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_budget(start: Instant, budget: Duration) -> std::result::Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < budget, format!("took {t:?}, budget {budget:?}"))?;
    Ok(t)
}

/// Independent closed form for the threshold under the uniform prior.
fn oracle_tau(q: f64) -> f64 {
    1.0 / (1.0 + ((3.0 * q - 2.0) / (q * (7.0 - 4.0 * q) - 2.0)).sqrt())
}

fn q_grid() -> Vec<f64> {
    let (lo, hi) = (2.0 / 3.0 + 1e-3, 1.0 - 1e-3);
    (0..200).map(|k| lo + (hi - lo) * k as f64 / 199.0).collect()
}

fn c1_closed_form_anchor() -> Check {
    let p = SimpleParams::new(0.75).map_err(|e| e.to_string())?;
    let tau = tau_closed_form(p).map_err(|e| e.to_string())?;
    let p0 = nondisclosure_price_bayes(p, tau, ValuationDistribution::Uniform01).map_err(|e| e.to_string())?;
    let ps = simple_price(tau);
    ensure((tau - 2.0 / 3.0).abs() <= 1e-12, format!("tau = {tau}"))?;
    ensure((p0 - 1.0 / 3.0).abs() <= 1e-12, format!("P_0 = {p0}"))?;
    ensure((ps - 7.0 / 12.0).abs() <= 1e-12, format!("P_S = {ps}"))?;
    Ok(format!("tau = {tau}, P_0 = {p0}, P_S = {ps}"))
}

fn c2_oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut worst_gap = 0.0f64;
    let mut worst_res = 0.0f64;
    for q in q_grid() {
        let p = SimpleParams::new(q).map_err(|e| e.to_string())?;
        let closed = tau_closed_form(p).map_err(|e| e.to_string())?;
        let fixed = solve_simple_fixed_point(p, 1e-12)
            .map_err(|e| format!("q = {q}: {e}"))?
            .tau;
        worst_gap = worst_gap.max((closed - fixed).abs());
        worst_res = worst_res.max(quadratic_residual(q, closed).map_err(|e| e.to_string())?.abs());
    }
    ensure(worst_gap <= 1e-9, format!("max |closed - fixed| = {worst_gap:e}"))?;
    ensure(worst_res <= 1e-10, format!("max residual = {worst_res:e}"))?;
    let t = within_budget(start, Duration::from_secs(1))?;
    Ok(format!(
        "200 points, max gap {worst_gap:.1e}, max residual {worst_res:.1e}, {t:.2?}"
    ))
}

fn c3_monotone() -> Check {
    let taus: Vec<f64> = q_grid()
        .into_iter()
        .map(|q| tau_closed_form(SimpleParams::new(q).unwrap()).unwrap())
        .collect();
    ensure(taus.windows(2).all(|w| w[1] < w[0]), "tau not strictly decreasing")?;
    // Spot values from an independent evaluation of the closed form.
    let mut spots = Vec::new();
    for (q, expected) in [
        (0.7, 0.7540545305534314),
        (0.8, 0.6172177814626812),
        (0.9, 0.5516827258491078),
    ] {
        let tau = tau_closed_form(SimpleParams::new(q).unwrap()).unwrap();
        ensure(
            (oracle_tau(q) - expected).abs() < 1e-15,
            format!("oracle drift at q = {q}"),
        )?;
        ensure(
            (tau - expected).abs() <= 1e-5,
            format!("tau({q}) = {tau}, expected {expected}"),
        )?;
        spots.push(format!("tau({q}) = {tau:.6}"));
    }
    Ok(format!("strictly decreasing on 200 points; {}", spots.join(", ")))
}

fn stat<'a>(
    r: &'a SimReport,
    name: &str,
) -> std::result::Result<&'a strategic_complexity::montecarlo::Statistic, String> {
    r.statistics
        .iter()
        .find(|s| s.name == name)
        .ok_or(format!("missing statistic {name}"))
}

fn within_3se(r: &SimReport, name: &str, target: f64) -> std::result::Result<f64, String> {
    let s = stat(r, name)?;
    let (e, se) = (s.empirical.ok_or("empty pool")?, s.std_error.ok_or("infinite width")?);
    let z = (e - target) / se;
    ensure(z.abs() <= 3.0, format!("{name}: {e} vs {target}, z = {z:.2}"))?;
    Ok(z)
}

fn c4_monte_carlo() -> Check {
    let p = SimpleParams::new(0.75).unwrap();
    let eq = strategic_complexity::simple::solve_simple(p, 1e-12)
        .map_err(|e| e.to_string())?
        .equilibrium;
    let cfg = SimConfig::new(1_000_000, SEED, ModelSpec::Simple(p), eq.into());
    let start = Instant::now();
    let r = simulate(&cfg).map_err(|e| e.to_string())?;
    let t = within_budget(start, Duration::from_secs(10))?;
    let z0 = within_3se(&r, "pool_mean.no_information", 1.0 / 3.0)?;
    let zp = within_3se(&r, "mean_price", 0.5)?;
    let zs = within_3se(&r, "frequency.simple", 1.0 / 6.0)?;
    let again = simulate(&cfg).map_err(|e| e.to_string())?;
    let bytes = |r: &SimReport| strategic_complexity::output::to_json(r).unwrap();
    ensure(bytes(&r) == bytes(&again), "repeated run differs")?;
    Ok(format!(
        "z: no-information mean {z0:.2}, mean price {zp:.2}, simple frequency {zs:.2}; {t:.2?}; repeat identical"
    ))
}

fn c5_dye() -> Check {
    for (p, expected) in [(0.25, 1.0 / 3.0), (0.04, 1.0 / 6.0)] {
        let t = solve_dye(&DyeParams::new(p).unwrap(), 1e-10)
            .map_err(|e| e.to_string())?
            .threshold;
        ensure((t - expected).abs() <= 1e-10, format!("p = {p}: {t}"))?;
        ensure(
            (t - dye_threshold_uniform(p)).abs() <= 1e-10,
            format!("p = {p}: closed form mismatch"),
        )?;
    }
    let ts: Vec<f64> = (1..=50)
        .map(|k| {
            solve_dye(&DyeParams::new(k as f64 / 51.0).unwrap(), 1e-10)
                .unwrap()
                .threshold
        })
        .collect();
    ensure(ts.windows(2).all(|w| w[1] > w[0]), "threshold not increasing in p")?;
    Ok("1/3 and 1/6 within 1e-10; increasing over 50 points".into())
}

fn lattice() -> Vec<FullParams> {
    let mut out = Vec::new();
    for chi in [0.5, 0.7, 0.9] {
        for rho_u in [0.2, 0.4, 0.6] {
            for f in [0.25, 0.5, 0.75] {
                let rho_s = chi * rho_u + f * (chi - chi * rho_u);
                out.push(FullParams::new(chi, rho_s, rho_u, 0.1, 0.1).unwrap());
            }
        }
    }
    out
}

fn check_equilibrium(eq: &FullEquilibrium) -> std::result::Result<(), String> {
    let lines = eq.price_lines();
    let regions = eq.regions();
    for k in 0..=1000 {
        let y = k as f64 / 1000.0;
        let chosen = message_at(&regions, y).ok_or(format!("no region at {y}"))?;
        let best = lines.iter().map(|l| l.at(y)).fold(f64::NEG_INFINITY, f64::max);
        let got = lines.iter().find(|l| l.message == chosen).unwrap().at(y);
        ensure(best - got <= 1e-9, format!("envelope mismatch at y = {y}"))?;
    }
    let b = update_beliefs(&eq.params, eq.t1, eq.t2).map_err(|e| e.to_string())?;
    let res = b.sup_distance(&eq.beliefs);
    ensure(res <= 1e-8, format!("self-consistency residual {res:e}"))?;
    ensure(
        0.0 <= eq.t1 && eq.t1 <= eq.t2 && eq.t2 <= 1.0,
        "thresholds out of order",
    )?;
    ensure(
        regions
            .windows(2)
            .all(|w| w[0].message < w[1].message && w[0].hi == w[1].lo),
        "regions out of order",
    )?;
    Ok(())
}

fn lattice_equilibria() -> std::result::Result<Vec<(FullParams, Vec<FullEquilibrium>)>, String> {
    lattice()
        .into_iter()
        .map(|p| {
            Ok((
                p,
                enumerate_equilibria(&p, 3, 1e-10)
                    .map_err(|e| e.to_string())?
                    .equilibria,
            ))
        })
        .collect()
}

fn c6_full_model(found: &[(FullParams, Vec<FullEquilibrium>)], elapsed: Duration) -> Check {
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    let mut n = 0;
    for (p, eqs) in found {
        ensure(
            eqs.iter().any(|e| e.classification == Classification::SimpleBadNews),
            format!("no bad-news equilibrium at {p:?}"),
        )?;
        for eq in eqs {
            check_equilibrium(eq).map_err(|e| format!("{p:?}: {e}"))?;
            n += 1;
        }
    }
    Ok(format!(
        "27 points, {n} equilibria checked, bad news everywhere; {elapsed:.2?}"
    ))
}

fn c7_u_shape(found: &[(FullParams, Vec<FullEquilibrium>)]) -> Check {
    let eq = strategic_complexity::simple::solve_simple(SimpleParams::new(0.75).unwrap(), 1e-12)
        .unwrap()
        .equilibrium;
    let u = check_u_shape(&AnyEquilibrium::Simple(eq));
    ensure(u.u_shaped, "simple model not U-shaped")?;
    ensure(u.lower.lo == 0.0 && u.lower.hi == 0.5, format!("lower {:?}", u.lower))?;
    ensure(
        (u.middle.hi - 2.0 / 3.0).abs() <= 1e-12 && u.upper.hi == 1.0,
        format!("middle {:?}", u.middle),
    )?;
    let mut interior = 0;
    for eq in found.iter().flat_map(|(_, e)| e) {
        if eq.has_interior_simple_region() {
            interior += 1;
            let u = check_u_shape(&AnyEquilibrium::Full(eq.clone()));
            ensure(u.u_shaped && !u.middle.is_empty(), format!("not U-shaped: {eq:?}"))?;
        }
    }
    Ok(format!(
        "simple model [0, 1/2), [1/2, 2/3), [2/3, 1]; {interior} interior full-model equilibria U-shaped"
    ))
}

fn c8_h3(found: &[(FullParams, Vec<FullEquilibrium>)]) -> Check {
    for q in q_grid() {
        let p = SimpleParams::new(q).unwrap();
        let eq = AnyEquilibrium::Simple(
            strategic_complexity::simple::solve_simple(p, 1e-12)
                .unwrap()
                .equilibrium,
        );
        let AnyEquilibrium::Simple(s) = &eq else { unreachable!() };
        let r = announcement_return(&eq, Announcement::Simple).map_err(|e| e.to_string())?;
        ensure(
            r > 0.0 && (r - (s.tau - 0.5) / 2.0).abs() <= 1e-12,
            format!("q = {q}: return {r}"),
        )?;
    }
    let p = SimpleParams::new(0.75).unwrap();
    let eq = strategic_complexity::simple::solve_simple(p, 1e-12)
        .unwrap()
        .equilibrium;
    let r = simulate(&SimConfig::new(1_000_000, SEED, ModelSpec::Simple(p), eq.into())).map_err(|e| e.to_string())?;
    within_3se(&r, "pool_mean.simple", 0.5 + 1.0 / 12.0)?;

    let mut bad = 0;
    let mut simulated = 0;
    for (params, eqs) in found {
        for eq in eqs.iter().filter(|e| e.classification == Classification::SimpleBadNews) {
            let any = AnyEquilibrium::Full(eq.clone());
            let ret = announcement_return(&any, Announcement::Simple).map_err(|e| e.to_string())?;
            ensure(ret < 0.0, format!("{params:?}: simple return {ret}"))?;
            bad += 1;
            // Every third equilibrium is checked against simulated pool means.
            if bad % 3 == 1 {
                let cfg = SimConfig::new(1_000_000, SEED, ModelSpec::Full(*params), any);
                let r = simulate(&cfg).map_err(|e| e.to_string())?;
                within_3se(&r, "pool_mean.simple", eq.beliefs.e_simple)?;
                let s = stat(&r, "pool_mean.simple")?;
                ensure(
                    s.empirical.unwrap() < params.prior_mean(),
                    "simulated simple pool above the prior",
                )?;
                simulated += 1;
            }
        }
    }
    Ok(format!("simple returns positive on 200 points; {bad} bad-news equilibria negative, {simulated} confirmed by simulation"))
}

fn cli_json(args: &[&str]) -> std::result::Result<Value, String> {
    let o = strategic_complexity::cli::run(std::iter::once("strategic-complexity").chain(args.iter().copied()));
    ensure(o.code == 0, o.stderr.clone())?;
    serde_json::from_str(&o.stdout).map_err(|e| e.to_string())
}

fn c9_figures() -> Check {
    let v = cli_json(&["figure", "--which", "3", "--q", "0.75", "--format", "json"])?;
    let kinks: Vec<f64> = v["blocks"][0]["breakpoints"]
        .as_array()
        .ok_or("no breakpoints")?
        .iter()
        .filter(|b| b["kind"] == "kink")
        .filter_map(|b| b["y"].as_f64())
        .collect();
    ensure(
        kinks.len() == 1 && (kinks[0] - 2.0 / 3.0).abs() <= 1e-9,
        format!("kinks {kinks:?}"),
    )?;
    let v = cli_json(&["figure", "--which", "1", "--panel", "left", "--format", "json"])?;
    let regions = v["blocks"][0]["regions"].as_array().ok_or("no regions")?.len();
    ensure(regions == 2, format!("{regions} regions without the simple message"))?;
    Ok(format!(
        "figure 3 kink at {}; figure 1 left panel has 2 regions",
        kinks[0]
    ))
}

fn main() {
    let mut failures = 0;
    let mut report = |n: u32, name: &str, result: Check| match result {
        Ok(detail) => println!("criterion {n} ({name}): PASS - {detail}"),
        Err(why) => {
            failures += 1;
            println!("criterion {n} ({name}): FAIL - {why}");
        }
    };
    report(1, "closed-form anchor", c1_closed_form_anchor());
    report(2, "oracle equivalence", c2_oracle_equivalence());
    report(3, "monotone threshold", c3_monotone());
    report(4, "Monte Carlo", c4_monte_carlo());
    report(5, "baseline", c5_dye());
    let start = Instant::now();
    let found = lattice_equilibria();
    let elapsed = start.elapsed();
    match found {
        Ok(found) => {
            report(6, "full-model properties", c6_full_model(&found, elapsed));
            report(7, "U-shape", c7_u_shape(&found));
            report(8, "announcement signs", c8_h3(&found));
        }
        Err(e) => {
            for (n, name) in [(6, "full-model properties"), (7, "U-shape"), (8, "announcement signs")] {
                report(n, name, Err(e.clone()));
            }
        }
    }
    report(9, "figures", c9_figures());
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
