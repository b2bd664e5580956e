use std::path::Path;
use std::process::Command;

use ptrig::cli::run;
use serde_json::Value;

fn ptrig(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ptrig").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn records(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

const INVOCATIONS: &[&[&str]] = &[
    &["eval", "sin_p", "--p", "2", "--x", "1.0"],
    &["eval", "exp_p", "--p", "3", "--grid", "0:1:3"],
    &["eval", "v_p", "--p", "3", "--x", "0.25"],
    &["coeffs", "--p", "1.5", "--jmax", "9"],
    &["coeffs", "--p", "3", "--jmax", "9", "--kind", "a"],
    &["criterion", "--p", "1.7", "--jmax", "99"],
    &["bounds", "--p", "2.2", "--jmax", "99"],
    &["thresholds"],
    &["regularity", "--p", "3", "--rho", "1.5", "--jmax", "99"],
    &["operator", "--p", "1.7", "--size", "6"],
    &[
        "operator",
        "--p",
        "1.7",
        "--size",
        "6",
        "--action",
        "reconstruct",
        "--col",
        "2",
    ],
    &[
        "operator",
        "--p",
        "2.4",
        "--size",
        "4",
        "--action",
        "expand",
        "--fhat",
        "1,0.5,0,-0.25",
    ],
    &[
        "operator",
        "--action",
        "isometry",
        "--g",
        "x2",
        "--dilation",
        "3",
        "--s",
        "3",
    ],
    &[
        "operator",
        "--p",
        "1.7",
        "--size",
        "16",
        "--action",
        "condition",
    ],
];

#[test]
fn trivial_examples() {
    let (code, out, _) = ptrig(&["eval", "sin_p", "--p", "2", "--x", "1.0"]);
    assert_eq!(code, 0);
    let r = &records(&out)[0];
    assert!((num(&r["results"]["value"]) - 1f64.sin()).abs() < 1e-15);
    assert_eq!(r["command"], "eval");
    assert_eq!(r["params"]["function"], "sin_p");

    let (_, out, _) = ptrig(&["eval", "cos_p", "--p", "1.5", "--x", "0"]);
    assert_eq!(num(&records(&out)[0]["results"]["value"]), 1.0);

    let (_, out, _) = ptrig(&["eval", "F_p", "--p", "2", "--x", "0.5"]);
    let v = num(&records(&out)[0]["results"]["value"]);
    assert!((v - std::f64::consts::FRAC_PI_6).abs() < 1e-15);

    let (_, out, _) = ptrig(&["criterion", "--p", "2.0"]);
    let r = &records(&out)[0]["results"];
    assert_eq!(r["holds"], true);
    assert!((num(&r["margin"]) - 1.0).abs() < 1e-12);

    let (_, out, _) = ptrig(&["criterion", "--p", "1.46"]);
    assert_eq!(records(&out)[0]["results"]["holds"], true);
}

#[test]
fn one_record_per_point_in_order() {
    let (code, out, _) = ptrig(&[
        "eval",
        "sin_p",
        "--p",
        "3",
        "--x",
        "0.5,-0.25",
        "--x",
        "2",
        "--grid",
        "0:1:5",
    ]);
    assert_eq!(code, 0);
    let xs: Vec<f64> = records(&out)
        .iter()
        .map(|r| num(&r["params"]["x"]))
        .collect();
    assert_eq!(xs, [0.5, -0.25, 2.0, 0.0, 0.25, 0.5, 0.75, 1.0]);
}

#[test]
fn coefficient_csv() {
    let (code, out, _) = ptrig(&["coeffs", "--p", "2", "--jmax", "9", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(
        rows.headers().unwrap(),
        vec!["j", "value", "err_est", "bound"]
    );
    for row in rows.records() {
        let row = row.unwrap();
        let j: usize = row[0].parse().unwrap();
        let v: f64 = row[1].parse().unwrap();
        assert_eq!(v, if j == 1 { 1.0 } else { 0.0 });
        assert_eq!(&row[3], "");
    }
    assert!(!out.contains('\r'));

    for p in ["1.5", "3"] {
        let (_, out, _) = ptrig(&["coeffs", "--p", p, "--jmax", "99", "--format", "csv"]);
        let mut rows = csv::Reader::from_reader(out.as_bytes());
        for row in rows.records() {
            let row = row.unwrap();
            if row[3].is_empty() {
                continue;
            }
            let (v, b): (f64, f64) = (row[1].parse().unwrap(), row[3].parse().unwrap());
            assert!(v.abs() < b, "p={p} j={}", &row[0]);
        }
    }
}

#[test]
fn thresholds_within_reference_windows() {
    let (code, out, _) = ptrig(&["thresholds"]);
    assert_eq!(code, 0);
    let recs = records(&out);
    assert_eq!(recs.len(), 3);
    assert!((num(&recs[0]["results"]["root"]) - 1.458801).abs() < 5e-6);
    assert!((num(&recs[1]["results"]["root"]) - 2.42865).abs() < 5e-5);
    assert_eq!(recs[1]["results"]["within_window"], true);
    assert!(recs[0]["results"]["trace"].as_array().unwrap().len() > 1);
}

#[test]
fn every_command_validates_against_schema_in_both_formats() {
    let schema_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output_record.schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for args in INVOCATIONS {
        let (code, out, err) = ptrig(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        let recs = records(&out);
        assert!(!recs.is_empty(), "{args:?}");
        for r in &recs {
            let errors: Vec<String> = validator.iter_errors(r).map(|e| e.to_string()).collect();
            assert!(errors.is_empty(), "{args:?}: {errors:?}");
            // Lossless round trip through the typed record.
            let typed: ptrig::cli::output::OutputRecord =
                serde_json::from_value(r.clone()).unwrap();
            assert_eq!(&serde_json::to_value(&typed).unwrap(), r);
        }

        let mut csv_args = args.to_vec();
        csv_args.extend(["--format", "csv"]);
        let (code, out, _) = ptrig(&csv_args);
        assert_eq!(code, 0);
        let mut reader = csv::Reader::from_reader(out.as_bytes());
        assert!(!reader.headers().unwrap().is_empty());
        assert_eq!(reader.records().count(), recs.len(), "{args:?}");
    }
}

#[test]
fn floats_round_trip_exactly() {
    let (_, out, _) = ptrig(&["eval", "sin_p", "--p", "1.7", "--x", "0.1,0.7,1.3"]);
    let (_, out2, _) = ptrig(&[
        "eval",
        "sin_p",
        "--p",
        "1.7",
        "--x",
        "0.1,0.7,1.3",
        "--format",
        "csv",
    ]);
    let csv_values: Vec<f64> = csv::Reader::from_reader(out2.as_bytes())
        .records()
        .map(|r| r.unwrap()[3].parse().unwrap())
        .collect();
    let pe = ptrig::PExponent::new(1.7).unwrap();
    for ((r, c), x) in records(&out).iter().zip(csv_values).zip([0.1, 0.7, 1.3]) {
        let exact = pe.sin_p(x).unwrap();
        assert_eq!(num(&r["results"]["value"]).to_bits(), exact.to_bits());
        assert_eq!(c.to_bits(), exact.to_bits());
    }
}

#[test]
fn exit_codes() {
    let (code, _, err) = ptrig(&["eval", "sin_p", "--p", "0.5", "--x", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("p must be"), "{err}");
    assert_eq!(ptrig(&["eval", "sin_p", "--x", "1"]).0, 2);
    assert_eq!(ptrig(&["eval", "u_p", "--p", "3", "--x", "0.1"]).0, 2);
    assert_eq!(ptrig(&["coeffs", "--p", "1.5", "--jmax", "0"]).0, 2);
    assert_eq!(ptrig(&["criterion", "--p", "1.5", "--jmax", "100"]).0, 2);
    assert_eq!(ptrig(&["eval", "sin_p", "--p", "2", "--grid", "0:1"]).0, 2);
    assert_eq!(ptrig(&["frobnicate"]).0, 2);
    assert_eq!(ptrig(&["--help"]).0, 0);
    let (code, _, err) = ptrig(&["operator", "--action", "isometry", "--g", "x", "--s", "0.5"]);
    assert_eq!(code, 2, "{err}");

    // An unattainable tolerance is a numerical failure, not a domain error.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.conf");
    std::fs::write(
        &cfg,
        "max_newton_iters = 1\nrel_tol = 1e-300\nabs_tol = 1e-300\n",
    )
    .unwrap();
    let (code, out, err) = ptrig(&[
        "eval",
        "sin_p",
        "--p",
        "1.5",
        "--x",
        "1",
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "{err}");
    assert!(out.is_empty());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    std::fs::write(&cfg, "# sweep\np = 3\nformat = csv\njmax = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let (code, out, _) = ptrig(&["coeffs", "--config", cfg]);
    assert_eq!(code, 0);
    assert!(out.starts_with("j,value,err_est,bound\n"));
    assert_eq!(out.lines().count(), 7);
    let (_, out, _) = ptrig(&["coeffs", "--config", cfg, "--format", "json", "--p", "1.5"]);
    assert_eq!(num(&records(&out)[0]["params"]["p"]), 1.5);

    std::fs::write(dir.path().join("bad.conf"), "colour = red\n").unwrap();
    let bad = dir.path().join("bad.conf");
    assert_eq!(
        ptrig(&["thresholds", "--config", bad.to_str().unwrap()]).0,
        2
    );

    let target = dir.path().join("out.jsonl");
    let (code, out, _) = ptrig(&[
        "eval",
        "sin_p",
        "--p",
        "2",
        "--x",
        "1",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(records(&std::fs::read_to_string(target).unwrap()).len(), 1);

    let (_, out, _) = ptrig(&["eval", "sin_p", "--p", "2", "--x", "1", "--tol", "1e-9"]);
    assert_eq!(num(&records(&out)[0]["config"]["rel_tol"]), 1e-9);
}

fn binary(args: &[&str], epoch: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ptrig"));
    cmd.args(args).env("LC_ALL", "de_DE.UTF-8");
    match epoch {
        Some(e) => cmd.env("SOURCE_DATE_EPOCH", e),
        None => cmd.env_remove("SOURCE_DATE_EPOCH"),
    };
    cmd.output().unwrap()
}

#[test]
fn binary_is_byte_reproducible() {
    let args = ["regularity", "--p", "2.5", "--rho", "1.2", "--jmax", "199"];
    let a = binary(&args, Some("1700000000"));
    let b = binary(&args, Some("1700000000"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"timestamp\":\"2023-11-14T22:13:20Z\""));

    let csv_args = ["coeffs", "--p", "1.3", "--jmax", "15", "--format", "csv"];
    assert_eq!(
        binary(&csv_args, None).stdout,
        binary(&csv_args, None).stdout
    );
}

#[test]
fn binary_exit_codes_and_streams() {
    let out = binary(&["eval", "sin_p", "--p", "-1", "--x", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    let out = binary(
        &["eval", "sin_p", "--p", "2", "--x", "1"],
        Some("not-a-number"),
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(binary(&["--version"], None).status.code(), Some(0));
}
