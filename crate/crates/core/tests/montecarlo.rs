use strategic_complexity::full::{enumerate_equilibria, Classification, FullParams};
use strategic_complexity::montecarlo::{simulate, verify_equilibrium, SimConfig, Verdict};
use strategic_complexity::simple::{solve_simple, SimpleEquilibrium, SimpleParams};
use strategic_complexity::{AnyEquilibrium, ModelSpec};

fn simple_eq(q: f64) -> (SimpleParams, SimpleEquilibrium) {
    let p = SimpleParams::new(q).unwrap();
    (p, solve_simple(p, 1e-12).unwrap().equilibrium)
}

fn stat<'a>(
    r: &'a strategic_complexity::montecarlo::SimReport,
    name: &str,
) -> &'a strategic_complexity::montecarlo::Statistic {
    r.statistics.iter().find(|s| s.name == name).unwrap()
}

#[test]
fn true_simple_equilibrium_passes() {
    let (p, eq) = simple_eq(0.75);
    let cfg = SimConfig::new(1_000_000, 42, ModelSpec::Simple(p), eq.into());
    let (r, v) = verify_equilibrium(&cfg, 4.0).unwrap();
    assert_eq!(v.verdict, Verdict::Pass, "{v:?}");
    for name in ["pool_mean.no_information", "mean_price", "frequency.simple"] {
        assert!(stat(&r, name).z.unwrap().abs() <= 3.0, "{name}: {:?}", stat(&r, name));
    }
    assert!((stat(&r, "pool_mean.no_information").analytic - 1.0 / 3.0).abs() < 1e-12);
    assert!((stat(&r, "frequency.simple").analytic - 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn perturbed_threshold_fails_on_pool_means() {
    let (p, eq) = simple_eq(0.75);
    let bad = SimpleEquilibrium {
        tau: eq.tau + 0.05,
        ..eq
    };
    let cfg = SimConfig::new(1_000_000, 42, ModelSpec::Simple(p), bad.into());
    let (_, v) = verify_equilibrium(&cfg, 4.0).unwrap();
    assert_eq!(v.verdict, Verdict::Fail);
    assert!(v.failing.iter().any(|s| s.starts_with("pool_mean")), "{:?}", v.failing);
}

#[test]
fn z_scores_look_standard_normal_over_seeds() {
    let (p, eq) = simple_eq(0.8);
    let mut total = 0;
    let mut big = 0;
    for seed in 0..100 {
        let cfg = SimConfig::new(20_000, seed, ModelSpec::Simple(p), eq.into());
        let r = simulate(&cfg).unwrap();
        for s in &r.statistics {
            total += 1;
            if s.z.unwrap().abs() > 3.0 {
                big += 1;
            }
        }
    }
    assert!((big as f64) < 0.01 * total as f64, "{big} of {total}");
}

#[test]
fn full_model_equilibria_pass() {
    let p = FullParams::new(0.7, 0.65, 0.2, 0.1, 0.1).unwrap();
    let found = enumerate_equilibria(&p, 5, 1e-10).unwrap();
    assert!(found.equilibria.len() >= 2);
    for eq in found.equilibria {
        let class = eq.classification;
        let cfg = SimConfig::new(400_000, 7, ModelSpec::Full(p), AnyEquilibrium::Full(eq));
        let (r, v) = verify_equilibrium(&cfg, 4.0).unwrap();
        assert_eq!(v.verdict, Verdict::Pass, "{class:?}: {v:?}");
        let total: f64 = r.frequencies.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        if class == Classification::SimpleBadNews {
            let s = stat(&r, "pool_mean.simple");
            assert!(s.empirical.unwrap() < 0.5);
        }
    }
}

#[test]
fn report_serializes_identically() {
    let (p, eq) = simple_eq(0.75);
    let cfg = SimConfig::new(100_000, 9, ModelSpec::Simple(p), eq.into());
    let a = serde_json::to_string(&simulate(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&simulate(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}
