use std::process::{Command, Output};

use serde_json::Value;
use strategic_complexity::output::render_value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strategic-complexity"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

/// Failure: given exit code, no stdout, one `CODE: message` line.
fn assert_fails(o: &Output, exit: i32, code: &str) {
    assert_eq!(o.status.code(), Some(exit), "stderr: {}", stderr(o));
    assert!(o.stdout.is_empty());
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("{code}: ")), "{err}");
}

const BAND: [&str; 10] = [
    "--chi",
    "0.7",
    "--rho-s",
    "0.65",
    "--rho-u",
    "0.2",
    "--forced-simple",
    "0.1",
    "--forced-obfuscate",
    "0.1",
];

#[test]
fn solve_simple_values() {
    let v = json(&run(&["solve-simple", "--q", "0.75"]));
    let get = |k: &str| v[k].as_f64().unwrap();
    assert!((get("tau") - 2.0 / 3.0).abs() < 1e-12);
    assert!((get("p_nondisc") - 1.0 / 3.0).abs() < 1e-12);
    assert!((get("p_simple") - 7.0 / 12.0).abs() < 1e-12);
    assert!(get("agreement") < 1e-9);
}

#[test]
fn solve_simple_errors_and_degenerate_case() {
    assert_fails(&run(&["solve-simple", "--q", "0.5"]), 2, "NO_INTERIOR_EQUILIBRIUM");
    assert_fails(&run(&["solve-simple", "--q", "1.5"]), 1, "INVALID_PARAMETER");
    assert_fails(&run(&["solve-simple"]), 1, "USAGE_ERROR");
    assert_fails(&run(&["solve-simple", "--q", "abc"]), 1, "USAGE_ERROR");
    let v = json(&run(&["solve-simple", "--q", "1.0"]));
    assert_eq!(v["tau"].as_f64(), Some(0.5));
    assert!(v["tau_fixed_point"].is_null());
    assert_eq!(v["notices"].as_array().unwrap().len(), 1);
}

#[test]
fn json_round_trips_byte_for_byte() {
    for args in [
        vec!["solve-simple", "--q", "0.8"],
        vec!["solve-dye", "--p", "0.3"],
        vec![
            "sweep", "--model", "simple", "--param", "q", "--from", "0.7", "--to", "0.9", "--steps", "4",
        ],
    ] {
        let text = stdout(&run(&args));
        let again = render_value(&serde_json::from_str(&text).unwrap());
        assert_eq!(text, again, "{args:?}");
    }
}

#[test]
fn solve_full_enumerates_both_classes() {
    let mut args = vec!["solve-full", "--enumerate"];
    args.extend(BAND);
    let v = json(&run(&args));
    let eqs = v["equilibria"].as_array().unwrap();
    assert!(eqs.len() >= 2);
    let classes: std::collections::BTreeSet<_> = eqs.iter().map(|e| e["classification"].as_str().unwrap()).collect();
    assert_eq!(classes.len(), 2);
}

#[test]
fn solve_full_reads_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("band.json");
    std::fs::write(
        &path,
        r#"{"chi": 0.7, "rho_s": 0.5, "rho_u": 0.2, "forced_simple": 0.1, "forced_obfuscate": 0.1}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let v = json(&run(&["solve-full", "--config", p]));
    assert_eq!(v["equilibria"][0]["classification"], "simple_bad_news");
    assert_eq!(v["params"]["rho_s"].as_f64(), Some(0.5));
    // Flags override the file.
    assert_fails(
        &run(&["solve-full", "--config", p, "--rho-s", "0.9"]),
        2,
        "INVALID_ORDERING",
    );

    std::fs::write(
        &path,
        r#"{"chi": 0.7, "rho_s": 0.5, "rho_u": 0.2, "forced_simple": 0.5, "forced_obfuscate": 0.5}"#,
    )
    .unwrap();
    assert_fails(&run(&["solve-full", "--config", p]), 1, "INVALID_PARAMETER");
    std::fs::write(&path, r#"{"chi": 0.7, "colour": 1}"#).unwrap();
    assert_fails(&run(&["solve-full", "--config", p]), 1, "CONFIG_ERROR");
    assert_fails(&run(&["solve-full", "--config", "/nonexistent/x.json"]), 1, "IO_ERROR");
}

#[test]
fn solve_full_budget_exhaustion_exits_3() {
    let mut args = vec!["solve-full", "--max-iter", "1", "--tol", "1e-15"];
    args.extend(BAND);
    assert_fails(&run(&args), 3, "NO_CONVERGENCE");
}

#[test]
fn sweep_csv() {
    let o = run(&[
        "sweep", "--model", "simple", "--param", "q", "--from", "0.68", "--to", "0.99", "--steps", "50", "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header, strategic_complexity::statics::SWEEP_COLUMNS);
    let t2: Vec<f64> = r.records().map(|rec| rec.unwrap()[7].parse().unwrap()).collect();
    assert_eq!(t2.len(), 50);
    assert!(t2.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_errors_and_flags() {
    assert_fails(
        &run(&[
            "sweep", "--model", "simple", "--param", "q", "--from", "0.9", "--to", "0.7", "--steps", "5",
        ]),
        1,
        "INVALID_PARAMETER",
    );
    assert_fails(
        &run(&[
            "sweep", "--model", "simple", "--param", "chi", "--from", "0.5", "--to", "0.7", "--steps", "5",
        ]),
        1,
        "INVALID_PARAMETER",
    );
    let v = json(&run(&[
        "sweep", "--model", "simple", "--param", "q", "--from", "0.6", "--to", "0.9", "--steps", "4",
    ]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["status"], "no_interior_equilibrium");
}

#[test]
fn simulate_is_deterministic_and_passes() {
    let args = [
        "simulate", "--model", "simple", "--q", "0.75", "--n", "1000000", "--seed", "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["verification"]["verdict"], "pass");
    let v = json(&run(&[
        "simulate", "--model", "simple", "--q", "0.75", "--n", "1000000", "--seed", "20261019",
    ]));
    assert_eq!(v["verification"]["verdict"], "pass");
    assert_fails(
        &run(&["simulate", "--model", "simple", "--q", "0.75", "--n", "0"]),
        1,
        "INVALID_PARAMETER",
    );
    assert_fails(
        &run(&["simulate", "--model", "simple", "--q", "0.6", "--n", "10"]),
        2,
        "NO_INTERIOR_EQUILIBRIUM",
    );
}

#[test]
fn figures() {
    let o = run(&["figure", "--which", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1002);
    let v = json(&run(&["figure", "--which", "1", "--panel", "left", "--format", "json"]));
    assert_eq!(v["blocks"][0]["regions"].as_array().unwrap().len(), 2);
    let v = json(&run(&["figure", "--which", "2", "--format", "json"]));
    let blocks = v["blocks"].as_array().unwrap();
    assert!(blocks.len() >= 2);
    let labels: std::collections::BTreeSet<_> = blocks.iter().map(|b| b["label"].as_str().unwrap()).collect();
    assert_eq!(labels.len(), 2);
    assert_fails(&run(&["figure", "--which", "4"]), 1, "INVALID_PARAMETER");
}

#[test]
fn out_flag_writes_file_only_on_success() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tau.json");
    let p = path.to_str().unwrap();
    let o = run(&["solve-simple", "--q", "0.75", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["tau"].is_number());

    let failed = dir.path().join("none.json");
    let o = run(&["solve-simple", "--q", "0.5", "--out", failed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!failed.exists());
}

#[test]
fn help_and_dye() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("solve-simple"));
    let v = json(&run(&["solve-dye", "--p", "0.25"]));
    assert!((v["threshold"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-10);
    assert_fails(&run(&["solve-dye", "--p", "1.5"]), 1, "INVALID_PARAMETER");
    assert_fails(
        &run(&["solve-simple", "--q", "0.8", "--tol", "0"]),
        1,
        "INVALID_PARAMETER",
    );
}
