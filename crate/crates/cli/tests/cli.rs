use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hbspace"));
    cmd.args(args).env_remove("HB_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["corona", "--b", &data("half-sum.json"), "--depth", "3"])), 1);
    assert_eq!(code(&run(&["mate", "--b", &data("half-sum.json"), "--grid-exponent", "19"])), 1);
    assert_eq!(code(&run(&["mate", "--b", &data("half-sum.json"), "--format", "yaml"])), 1);
}

#[test]
fn determinate_verdicts_exit_zero_with_a_clean_stderr() {
    let o = run(&["analyze-direct", "--b", &data("half-sum.json"), "--mu", &data("mu-beta.json"), "--depth", "8"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stderr.is_empty());
    let rep = json(&o);
    assert_eq!(rep["analysis"], "direct_carleson");
    assert!(rep["conditions"].as_object().is_some_and(|m| !m.is_empty()));
    assert!(rep["diagnostics"].is_object());

    let o = run(&["analyze-reverse", "--b", &data("half-sum.json"), "--mu", &data("lebesgue.json"), "--depth", "8"]);
    assert_eq!(code(&o), 0);
    assert!(o.stderr.is_empty());
    assert_eq!(json(&o)["verdict"], "fail");
}

#[test]
fn equivalence_reports_carry_all_three_reports() {
    let o = run(&[
        "analyze-equivalence",
        "--b",
        &data("alpha-power.json"),
        "--mu",
        &data("canonical.json"),
        "--depth",
        "8",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["inconsistent"], false);
    for part in ["equivalence", "direct", "reverse"] {
        assert!(doc[part]["verdict"].is_string(), "{part} missing");
    }
    let conds = &doc["reverse"]["conditions"];
    for key in ["MainThm.2", "MainThm.3", "MainThm.4"] {
        assert_eq!(conds[key]["verdict"], "pass", "{key}");
    }
}

#[test]
fn undetermined_scans_exit_two() {
    let o = run(&["scan-dump", "--mu", &data("mu-slow.json"), "--format", "json", "--depth", "8"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["verdict"], "undetermined");
    assert!(o.stderr.is_empty());
}

#[test]
fn a2_dichotomy_through_the_cli() {
    let pass = run(&["a2", "--weight", &data("power.json"), "--alpha", "0.25", "--depth", "10"]);
    assert_eq!(code(&pass), 0);
    assert_eq!(json(&pass)["verdict"], "pass");
    let fail = run(&["a2", "--weight", &data("power.json"), "--alpha", "0.75", "--depth", "10"]);
    assert_eq!(code(&fail), 0);
    assert_eq!(json(&fail)["verdict"], "fail");
}

#[test]
fn parse_errors_name_the_file_and_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"form\": \"rational\",\n  \"numerator\": [[0.5, 0]\n").unwrap();
    let o = run(&["mate", "--b", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("bad.json"), "{err}");
    assert!(err.contains("line"), "{err}");
    assert!(o.stdout.is_empty());

    let o = run(&["mate", "--b", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("missing.json"));
}

#[test]
fn bad_thread_counts_are_errors() {
    for v in ["0", "many", "-2"] {
        let o = run_env(&["scenario", "list"], &[("HB_THREADS", v)]);
        assert_eq!(code(&o), 1, "HB_THREADS={v}");
        assert!(stderr(&o).contains("HB_THREADS"));
    }
    assert_eq!(code(&run_env(&["scenario", "list"], &[("HB_THREADS", "2")])), 0);
}

#[test]
fn out_writes_the_same_bytes_and_nothing_to_stdout() {
    let args =
        ["scan-dump", "--mu", &data("mu-beta.json"), "--b", &data("half-sum.json"), "--weight", "mate", "--depth", "6"];
    let direct = run(&args);
    assert_eq!(code(&direct), 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    std::fs::write(&path, "stale").unwrap();
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_out.extend(["--out", &p]);
    let o = run(&with_out);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1, "temporary files left behind");
}

#[test]
fn scan_csv_round_trips_through_the_column_contract() {
    let mu = data("mu-beta.json");
    let csv_out = run(&["scan-dump", "--mu", &mu, "--depth", "6"]);
    let json_out = run(&["scan-dump", "--mu", &mu, "--depth", "6", "--format", "json"]);
    assert_eq!(code(&csv_out), code(&json_out));
    let mut rdr = csv::Reader::from_reader(csv_out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["level", "arc_center", "arc_length", "value"]);
    let mut rows = 0;
    let mut sup = f64::NEG_INFINITY;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let level: u32 = rec[0].parse().unwrap();
        let center: f64 = rec[1].parse().unwrap();
        let length: f64 = rec[2].parse().unwrap();
        let value: f64 = rec[3].parse().unwrap();
        assert!((1..=6).contains(&level));
        assert!(center.abs() <= std::f64::consts::PI + 1e-12);
        assert_eq!(length, 0.5f64.powi(level as i32));
        sup = sup.max(value);
        rows += 1;
    }
    assert_eq!(rows, (1..=6).map(|l| 2usize << l).sum::<usize>());
    assert_eq!(sup, json(&json_out)["value"].as_f64().unwrap());
}

#[test]
fn norms_agree_with_closed_forms() {
    let o = run(&["norms", "--b", &data("half-sum.json"), "--lambda", "0.5,-0.25", "--monomials", "4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let doc: Value = serde_json::from_str(&text).unwrap();
    for row in doc["kernels"].as_array().unwrap() {
        assert!(row["rel_error"].as_f64().unwrap() < 1e-10, "{row}");
    }
}

#[test]
fn scenario_verbs() {
    let list = run(&["scenario", "list"]);
    assert_eq!(code(&list), 0);
    let names: Vec<String> =
        json(&list).as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap().to_string()).collect();
    for n in ["half-sum", "alpha-power", "reverse-canonical", "blaschke-corona", "oscillating-a2"] {
        assert!(names.iter().any(|x| x == n), "{n} not listed");
    }

    let o = run(&["scenario", "run", "mu-beta", "--param", "beta=0.5", "--depth", "8"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(json(&o)["passed"], true);

    assert_eq!(code(&run(&["scenario", "run", "no-such-scenario"])), 1);
    assert_eq!(code(&run(&["scenario", "run", "mu-beta", "--param", "beta=0.5", "--param", "beta=0.3"])), 1);
    assert_eq!(code(&run(&["scenario", "run", "mu-beta", "--param", "gamma=1"])), 1);
}

#[test]
fn extreme_symbols_have_no_mate() {
    let o = run(&["mate", "--b", &data("gauss-extreme.json"), "--grid-exponent", "12"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).starts_with("error:"));
}
