//! End-to-end tests of the `noisylab` binary: exit codes, config-file
//! precedence, and the exact bytes of the CSV surfaces. Expected values are
//! frozen from the library's own verified closed forms.
//!
//! Exit code 2 (verification failure) has no honest trigger from the
//! command line — it fires only when a shipped invariant breaks mid-run —
//! so its mapping is pinned by unit tests on the error type instead.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noisylab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn help_exits_zero_and_names_every_subcommand() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for sub in ["encode", "bisect", "refine", "diag", "entropy", "floor", "sweep", "compare"] {
        assert!(text.contains(sub), "help must mention {sub}");
    }
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(1), "no arguments is a usage error");

    let out = run(&["nosuchcmd"]);
    assert_eq!(out.status.code(), Some(1), "unknown subcommand is a usage error");

    let out = run(&["refine"]);
    assert_eq!(out.status.code(), Some(1), "missing required value is a usage error");
    assert!(
        stderr(&out).contains("missing value for --m"),
        "the message must name the missing key, got: {}",
        stderr(&out)
    );

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "delta 0.4\n").unwrap();
    let out = run(&["refine", "--config", cfg.to_str().unwrap(), "--m", "1"]);
    assert_eq!(out.status.code(), Some(1), "malformed config line is a usage error");
}

#[test]
fn flags_override_config_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "m=1\ndelta=0.4\nn=1\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    // File alone: one round at delta = 0.4 has worst case exactly 0.4.
    let out = run(&["refine", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("delta 0.4"), "got: {text}");
    assert!(text.contains("searched worst error 0.4  exhaustive true"), "got: {text}");

    // The --delta flag beats the file's 0.4.
    let out = run(&["refine", "--config", cfg, "--delta", "0.2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("delta 0.2"), "got: {text}");
    assert!(text.contains("searched worst error 0.2  exhaustive true"), "got: {text}");
    assert!(text.contains("matched floor claims 0.2  realized on witnesses 0.2"), "got: {text}");
}

#[test]
fn sigma_file_feeds_the_truncation_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sigma.txt");
    fs::write(&path, "1.0\n0.5\n").unwrap();
    let out = run(&["diag", "--sigma", path.to_str().unwrap(), "--p", "inf", "--n", "1", "--delta", "0.2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    // max(delta * sigma_1, sigma_(n+1)): 1 at n = 0, then max(0.2, 0.5).
    assert_eq!(stdout(&out), "n,truncation_error\n0,1\n1,0.5\n");
}

#[test]
fn allocation_plan_csv_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.csv");
    let out = run(&[
        "diag", "--sigma", "power:1", "--m", "8", "--p", "inf", "--delta", "0.5", "--eps", "0.25",
        "--out", plan.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("allocation: keep 3  rounds [2, 1, 1]  total 4"), "got: {text}");
    assert_eq!(
        fs::read_to_string(&plan).unwrap(),
        "i,sigma_i,n_i\n1,1,2\n2,0.5,1\n3,0.3333333333333333,1\n"
    );
}

#[test]
fn diag_out_without_eps_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.csv");
    let out = run(&[
        "diag", "--sigma", "power:1", "--m", "4", "--p", "inf", "--delta", "0.5",
        "--out", plan.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!Path::new(&plan).exists(), "no plan may be written without a target accuracy");
}

#[test]
fn entropy_profile_csv_is_frozen() {
    // Identity on the sup-norm square: at n divisible by m the product cover
    // closes the sandwich exactly at 2^(-n/m); odd n carry the (1, 3) band.
    let out = run(&["entropy", "--m", "2", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(
        stdout(&out),
        "n,lower,upper,formula,band_lo,band_hi\n\
         1,1,1.03125,0.7071067811865476,1,3\n\
         2,0.5,0.5,0.5,1,1\n\
         3,0.5,0.5,0.3535533905932738,1,3\n\
         4,0.25,0.25,0.25,1,1\n"
    );
}

#[test]
fn compare_table_is_frozen_and_rates_are_citations() {
    let out = run(&["compare", "--m", "2", "--delta", "0.25", "--eps", "0.0625"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(
        text,
        "class,quantity,value,theory_ref\n\
         linear,noise_floor,0.25,zero-transcript-indistinguishable\n\
         linear,rate_in_n,,cited:linear-noise-floor\n\
         lipschitz,unit_class_floor,0.25,midpoint-transcript-indistinguishable\n\
         lipschitz,rate_in_n,,cited:lipschitz-noise-floor\n\
         continuous,measurements_to_eps,4,refinement-geometric\n\
         continuous,rate_in_n,,cited:continuous-matches-noiseless-rate\n\
         arbitrary,bits_per_measurement,2,bits-exact-decode\n\
         arbitrary,entropy_error_at_eps_budget,0.0625,entropy-at-equal-budget\n\
         arbitrary,rate_in_n,,cited:entropy-rate-times-bits\n\
         any,delta_resolution_limit,0.25,midpoint-transcript-indistinguishable\n"
    );
    // Every rate row is a citation with an empty value cell, and vice versa.
    for line in text.lines().skip(1) {
        assert_eq!(line.contains("rate_in_n"), line.contains(",,cited:"), "row: {line}");
    }
}

#[test]
fn encoder_command_reports_zero_decode_failures() {
    let out = run(&["encode", "--m", "1", "--n", "2", "--delta", "0.2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("cells 16  bits/measurement 2  measurements 2  cover radius 0.0625"), "got: {text}");
    assert!(text.contains("sessions 1674  decode failures 0  worst error 0.0625"), "got: {text}");
}

#[test]
fn sweep_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&["sweep", "--seed", "3", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    let bytes_a = fs::read(&a).unwrap();
    let bytes_b = fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b, "equal config and seed must reproduce the file bytes");
    let text = String::from_utf8(bytes_a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "experiment,kind,m,n,p,q,delta,param,error_est,lower_cert,upper_theory,theory_ref"
    );
}
