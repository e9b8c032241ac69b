use std::process::Command;

use gue_moments::bipoly::BivariatePolynomial;
use gue_moments::cli::{run, Outcome, OutputEnvelope};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("gue-moments").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> OutputEnvelope {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = cli(&full);
    serde_json::from_str(&out.stdout).expect("valid envelope")
}

#[test]
fn moment_examples() {
    assert_eq!(cli(&["moment", "--ks", "2,2"]).stdout, "v^4 + 2*v^2\n");
    assert_eq!(
        cli(&["moment", "--ks", "4", "--gamma-form"]).stdout,
        "2*v^3 + g*v\n"
    );
    assert_eq!(cli(&["moment", "--ks", "3"]).stdout, "0\n");
    let out = cli(&["moment", "--ks", "2,2", "--eval", "5"]);
    assert_eq!(out.stdout, "v^4 + 2*v^2\nat N=5: 675\n");
    let out = cli(&[
        "moment",
        "--ks",
        "4",
        "--method",
        "enumeration",
        "--gamma-form",
    ]);
    assert_eq!(out.stdout, "2*v^3 + g*v\n");
}

#[test]
fn moment_csv_and_json() {
    assert_eq!(
        cli(&["moment", "--ks", "2,2", "--format", "csv"]).stdout,
        "4,1\n2,2\n"
    );
    let out = cli(&[
        "moment",
        "--ks",
        "4",
        "--gamma-form",
        "--format",
        "csv",
        "--header",
    ]);
    assert_eq!(out.stdout, "g,v,c\n0,3,2\n1,1,1\n");

    let env = json(&["moment", "--ks", "4", "--gamma-form", "--eval", "6"]);
    assert_eq!(env.command, "moment");
    assert_eq!(env.result["value"], "438");
    let terms: BivariatePolynomial = serde_json::from_value(env.result["terms"].clone()).unwrap();
    assert_eq!(terms.to_string(), "2*v^3 + g*v");
    assert_eq!(env.inputs["ks"], serde_json::json!([4]));
    assert_eq!(env.version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn eta_examples() {
    assert_eq!(
        cli(&["eta", "--ks", "4"]).stdout,
        "0,3,2\n1,1,1\ntotal,,3\n"
    );
    assert_eq!(cli(&["eta", "--ks", "2"]).stdout, "0,2,1\ntotal,,1\n");
    assert_eq!(cli(&["eta", "--ks", "1,1"]).stdout, "1,1,1\ntotal,,1\n");
    assert_eq!(cli(&["eta", "--ks", "3"]).stdout, "total,,0\n");
    let out = cli(&["eta", "--ks", "2", "--format", "csv", "--header"]);
    assert_eq!(out.stdout, "g,b,count\n0,2,1\ntotal,,1\n");
}

#[test]
fn enumeration_cap() {
    let out = cli(&["eta", "--ks", "12,10"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("--cap"), "{}", out.stderr);
    let out = cli(&[
        "moment",
        "--ks",
        "6",
        "--method",
        "enumeration",
        "--cap",
        "4",
    ]);
    assert_eq!(out.code, 3);
    let out = cli(&[
        "moment",
        "--ks",
        "6",
        "--method",
        "enumeration",
        "--cap",
        "6",
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "5*v^4 + 10*v^2\n");
}

#[test]
fn asympt_examples() {
    assert_eq!(
        cli(&["asympt", "--evens", "2", "--which", "leading"]).stdout,
        "2\n"
    );
    assert_eq!(
        cli(&["asympt", "--odds", "1,1", "--which", "leading"]).stdout,
        "12\n"
    );
    let out = cli(&[
        "asympt",
        "--evens",
        "5,21",
        "--odds",
        "7,21,23,31",
        "--which",
        "leading",
    ]);
    assert_eq!(
        out.stdout.trim(),
        "25081904924688737847061935982290890890757044619026344345600000"
    );
    assert_eq!(
        cli(&["asympt", "--evens", "3", "--which", "subleading"]).stdout,
        "10\n"
    );
    assert_eq!(
        cli(&["asympt", "--evens", "1,1", "--odds", "0,2", "--which", "degree"]).stdout,
        "7\n"
    );
    assert_eq!(
        cli(&["asympt", "--odds", "1", "--which", "leading"]).code,
        2
    );
    assert_eq!(cli(&["asympt", "--odds", "1", "--which", "degree"]).code, 2);
    assert_eq!(
        cli(&["asympt", "--odds", "1,1", "--which", "subleading"]).code,
        2
    );
}

#[test]
fn corr_limit_examples() {
    let out = cli(&["corr-limit", "--f-odds", "0", "--g-odds", "1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("exact: sqrt(3)/2"));
    assert!(out.stdout.contains("case: 2"));
    let env = json(&["corr-limit", "--f-evens", "1", "--g-evens", "2"]);
    assert_eq!(env.result["exact"], "2*sqrt(2)/3");
    assert_eq!(env.result["case"], 5);
    let env = json(&["corr-limit", "--f-odds", "0", "--g-evens", "1"]);
    assert_eq!(env.result["exact"], "0");
    assert_eq!(env.result["case"], 1);

    let out = cli(&["corr-limit", "--f-evens", "0", "--g-evens", "1"]);
    assert_eq!(out.code, 4);
    assert!(out.stdout.contains("undefined"));
    assert!(out.stderr.contains("undefined"));
    let out = cli(&["corr-limit", "--f-odds", "0,1", "--g-evens", "0"]);
    assert_eq!(out.code, 2);
}

#[test]
fn mc_check_examples() {
    for (ks, n, exact) in [("2", "8", "64"), ("1,3", "4", "48"), ("3", "4", "0")] {
        let env = json(&[
            "mc-check",
            "--ks",
            ks,
            "--n",
            n,
            "--samples",
            "100000",
            "--seed",
            "42",
            "--sigma",
            "4",
        ]);
        assert_eq!(env.result["passed"], true, "{ks}");
        assert_eq!(env.result["attempts"][0]["exact"], exact);
    }
    let out = cli(&[
        "mc-check",
        "--ks",
        "2",
        "--n",
        "3",
        "--samples",
        "1000",
        "--sigma",
        "0.0001",
    ]);
    assert_eq!(out.code, 5);
    assert!(out.stdout.contains("result: fail"));
    let out = cli(&["mc-check", "--ks", "2", "--n", "3", "--samples", "1"]);
    assert_eq!(out.code, 2);
}

#[test]
fn mc_check_is_deterministic() {
    let args = [
        "mc-check",
        "--ks",
        "2,2",
        "--n",
        "3",
        "--samples",
        "5000",
        "--seed",
        "9",
    ];
    assert_eq!(cli(&args), cli(&args));
}

#[test]
fn semicircle_examples() {
    let out = cli(&["semicircle", "--poly", "0,0,1", "--mode", "both"]);
    assert_eq!(out.stdout, "exact: 1\nquadrature: 1.0000000000\n");
    assert_eq!(
        cli(&["semicircle", "--poly", "0,1", "--mode", "exact"]).stdout,
        "exact: 0\n"
    );
    let out = cli(&["semicircle", "--poly", "-1,0,1/2", "--mode", "exact"]);
    assert_eq!(out.stdout, "exact: -1/2\n");
    assert_eq!(cli(&["semicircle", "--poly", "x"]).code, 2);
}

#[test]
fn json_round_trip_is_idempotent() {
    let commands: [&[&str]; 6] = [
        &["moment", "--ks", "3,3", "--gamma-form", "--eval", "100"],
        &["eta", "--ks", "2,2,2"],
        &[
            "asympt",
            "--evens",
            "5,21",
            "--odds",
            "7,21,23,31",
            "--which",
            "leading",
        ],
        &["corr-limit", "--f-odds", "0,0", "--g-odds", "1,1"],
        &["mc-check", "--ks", "2", "--n", "2", "--samples", "200"],
        &["semicircle", "--poly", "1,0,1"],
    ];
    for args in commands {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let printed = cli(&full).stdout;
        let parsed: OutputEnvelope = serde_json::from_str(&printed).unwrap();
        let rendered = parsed.render() + "\n";
        assert_eq!(rendered, printed, "{args:?}");
        let reparsed: OutputEnvelope = serde_json::from_str(&rendered).unwrap();
        assert_eq!(reparsed, parsed);
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&[]).code, 2);
    assert_eq!(cli(&["moment"]).code, 2);
    assert_eq!(cli(&["moment", "--ks", "-1"]).code, 2);
    assert_eq!(cli(&["eta", "--ks", "2,0"]).code, 2);
    assert_eq!(cli(&["asympt", "--which", "sideways"]).code, 2);
    assert_eq!(cli(&["--version"]).code, 0);
}

#[test]
fn binary_streams_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gue-moments");
    let out = Command::new(bin)
        .args(["moment", "--ks", "1,3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "3*v^2\n");

    let out = Command::new(bin)
        .args(["corr-limit", "--g-evens", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("undefined"));

    let out = Command::new(bin)
        .args(["eta", "--ks", "4", "--cache-size"])
        .env("RAYON_NUM_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cache entries"));
}
