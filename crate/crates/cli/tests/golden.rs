//! Report schemas are pinned by golden files. Regenerate them with
//! `UPDATE_GOLDEN=1 cargo test -p degen-cli --test golden`.

use std::path::PathBuf;

use degen_cli::{run, CliError};
use degen_core::Error;

fn dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
}

fn check(name: &str, args: &[&str]) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("degen").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let path = dir("golden").join(format!("{name}.json"));
    let got = String::from_utf8(out).unwrap();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_default();
    assert_eq!(got, want, "{name} differs from {}", path.display());
}

fn fixture(name: &str) -> String {
    dir("fixtures").join(name).to_str().unwrap().to_string()
}

#[test]
fn simulate_cond41() {
    check(
        "simulate_cond41",
        &[
            "simulate", "--model", "asym", "--n", "12", "--c", "0", "--trials", "50", "--seed", "1",
        ],
    );
}

#[test]
fn simulate_histogram() {
    check(
        "simulate_histogram",
        &[
            "simulate",
            "--model",
            "sym",
            "--n",
            "20",
            "--c",
            "-0.5",
            "--q",
            "0.25",
            "--trials",
            "80",
            "--seed",
            "2",
            "--target",
            "histogram",
        ],
    );
}

#[test]
fn sweep_csv() {
    check(
        "sweep_csv",
        &[
            "sweep", "--model", "asym", "--n", "10,20", "--c", "0", "--trials", "40", "--seed",
            "3", "--target", "pm", "--csv",
        ],
    );
}

#[test]
fn predict() {
    check(
        "predict_sym",
        &["predict", "--model", "sym", "--c", "0", "--q", "0.5"],
    );
}

#[test]
fn oracle() {
    check(
        "oracle",
        &["oracle", "--max-n", "2", "--samples", "3", "--seed", "4"],
    );
}

#[test]
fn graph() {
    check(
        "graph_cond41",
        &[
            "graph",
            "--in",
            &fixture("counterexample.txt"),
            "--check",
            "cond41",
        ],
    );
    check(
        "graph_witness",
        &[
            "graph",
            "--in",
            &fixture("path_sym.txt"),
            "--check",
            "witness",
        ],
    );
}

#[test]
fn discriminant() {
    check(
        "discriminant_exact",
        &["discriminant", "--coeffs", "-6,11,-6", "--exact"],
    );
}

#[test]
fn failures_exit_one() {
    let failures = [
        Error::BridgeDisagreement {
            seed: 1,
            trial: 2,
            graph: true,
            spectrum: false,
        },
        Error::EigenNonConvergence {
            n: 3,
            seed: Some(1),
            trial: Some(0),
        },
        Error::OracleDisagreement {
            mask: "01/10".into(),
        },
        Error::ThresholdViolation {
            which: "pm",
            mask: "01/10".into(),
        },
    ];
    for e in failures {
        assert_eq!(CliError::from(e).exit_code(), 1);
    }
    assert_eq!(CliError::from(Error::NotSymmetric).exit_code(), 2);
}
