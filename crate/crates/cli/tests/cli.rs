use std::process::{Command, Output};

use horolab_cli::error::{EXIT_CAPACITY, EXIT_COMPUTATION, EXIT_IO, EXIT_PRECISION, EXIT_VALIDATION};
use serde_json::Value;

fn horolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horolab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = horolab(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn stdout(args: &[&str]) -> String {
    let out = horolab(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn classify_square_root_of_two() {
    let v = json(&["classify", "--z", "sqrt:2"]);
    assert_eq!(v["schema"], "horolab.report/v1");
    assert_eq!(v["result"]["group"], "trivial_group");
    assert_eq!(v["result"]["descriptor"], "surd:1,0,-2");
    let v = json(&["classify", "--z", "3/4"]);
    assert_eq!(v["result"]["group"], "full_rational_group");
    assert_eq!(v["result"]["witness"]["chi"], "2");
}

#[test]
fn decompose_counts_are_exact_and_reproducible() {
    let args = ["decompose", "--n", "100000", "--alpha", "0.3", "--j0", "9", "--j1", "30"];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a["result"], b["result"]);
    let c = &a["result"]["counts"];
    assert_eq!(c["not_in_s"], 31727);
    assert_eq!(c["in_s_multiple"], 4217);
    assert_eq!(c["sum_s_j"], 64055);
    assert_eq!(c["covered"], 56975);
    assert_eq!(c["leftover"], 43024);
    assert_eq!(a["result"]["violations_clean"], true);
}

#[test]
fn thread_count_does_not_change_results() {
    let base = ["criterion", "--n", "20000", "--j1", "25", "--cutoff", "30"];
    let one = json(&[&base[..], &["--threads", "1"]].concat());
    let two = json(&[&base[..], &["--threads", "2"]].concat());
    assert_eq!(one["result"], two["result"]);
    assert_eq!(one["result"]["unconditional_holds"], true);
}

#[test]
fn criterion_report_fields() {
    let v = json(&["criterion", "--nu", "mobius", "--seq", "exp:theta=sqrt2", "--n", "100000", "--cutoff", "50"]);
    let r = &v["result"];
    assert!(r["tau"]["tau_hat"].is_string());
    assert!(r["bound"].is_string());
    assert_eq!(r["verdict"], "holds");
    assert_eq!(v["config"]["j1"], "30");
}

#[test]
fn orbit_series_csv() {
    let text = stdout(&["orbit", "--n", "3", "--point", "point:lower:t=exp1", "--format", "csv"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,x,y,theta,f");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,"));
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("series.csv");
    let out = dir.path().join("report.json");
    let status = horolab(&[
        "orbit",
        "--n",
        "10",
        "--series",
        series.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let csv = std::fs::read_to_string(&series).unwrap();
    assert_eq!(csv.lines().count(), 12);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["result"]["genericity"]["kind"], "Generic");
}

#[test]
fn disjointness_ladder_rows() {
    let text = stdout(&["disjointness", "--ladder", "100,1000", "--obs", "obs:const:c=1", "--format", "csv"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("100,0.01,"));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sieve run\ncommand=sieve\nn=50\nnu=liouville\n").unwrap();
    let v = json(&["sieve", "--config", cfg.to_str().unwrap(), "--n", "100"]);
    assert_eq!(v["result"]["n"], 100);
    assert_eq!(v["result"]["partial_sum"], -2);
    let v = json(&["sieve", "--n", "100"]);
    assert_eq!(v["result"]["partial_sum"], 1);
}

#[test]
fn exit_codes_per_class() {
    let code = |args: &[&str]| horolab(args).status.code().unwrap();
    assert_eq!(code(&["decompose", "--alpha", "2"]), EXIT_VALIDATION);
    assert_eq!(code(&["classify", "--z", "surd:1,0,-4"]), EXIT_VALIDATION);
    assert_eq!(code(&["decompose", "--point", "point:identity"]), EXIT_VALIDATION);
    assert_eq!(code(&["sieve", "--n", "1000000000000"]), EXIT_CAPACITY);
    assert_eq!(code(&["orbit", "--n", "100000", "--precision-bits", "10"]), EXIT_PRECISION);
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.csv");
    std::fs::write(&short, "n,re,im\n1,1,0\n2,0,1\n").unwrap();
    let seq = format!("csv:{}", short.display());
    assert_eq!(code(&["criterion", "--n", "20000", "--j1", "25", "--seq", &seq]), EXIT_COMPUTATION);
    assert_eq!(code(&["classify", "--z", "inf", "--out", "/nonexistent/dir/r.json"]), EXIT_IO);
}
