use std::path::Path;
use std::process::{Command, Output};

use kasym::cli::execute;
use kasym::report::{Format, PairReport, Report, SolveReport};
use kasym_core::kernel::{discrepancy_report, standard_grid, FormMode};
use kasym_core::quad::{pairing_exact, PrescriptionMode, QuadratureSpec};
use kasym_core::testfn::{make_gaussian_hermite, Monomial};
use kasym_core::wavesolve::{solve_theorem2, RightHandSide, SymbolFactorization};
use serde_json::Value;

fn kasym(args: &[&str], output_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kasym"));
    cmd.args(args).env_remove("KASYM_OUTPUT_DIR");
    if let Some(dir) = output_dir {
        cmd.env("KASYM_OUTPUT_DIR", dir);
    }
    cmd.output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = kasym(args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn error_object(out: &Output) -> Value {
    assert!(!out.status.success());
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    v["error"].clone()
}

#[test]
fn odd_k_is_zero_in_both_modes() {
    let text = stdout(&["tkn", "--k", "3", "--N", "10", "--xi1", "0.7"]);
    assert_eq!(text, "k,N,xi1,mode,re,im\n3,10,0.7,paper_literal,0,0\n3,10,0.7,derived,0,0\n");
}

#[test]
fn default_sweep_row_count() {
    let text = stdout(&["sweep"]);
    let records = text.lines().skip(1).take_while(|l| !l.is_empty()).count();
    assert_eq!(records, 4 * 3 * 4);
}

#[test]
fn malformed_config_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"subcommand\": \"sweep\",\n  \"a_values\": [1, 2,\n}\n").unwrap();
    let out = kasym(&["--config", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    let err = error_object(&out);
    assert_eq!(err["kind"], "parse");
    assert_eq!(err["line"], 4);
    assert!(err["column"].as_u64().is_some());
}

#[test]
fn every_invalid_field_is_listed() {
    let out = kasym(&["sweep", "--fn", "nope", "--a-list", "-3", "--modes", "pv,sideways"], None);
    let err = error_object(&out);
    assert_eq!(err["kind"], "validation");
    let fields: Vec<&str> = err["fields"].as_array().unwrap().iter().map(|f| f["field"].as_str().unwrap()).collect();
    assert_eq!(fields, ["fn", "a-list", "modes"]);
}

#[test]
fn usage_errors_are_json() {
    let err = error_object(&kasym(&["tkn", "--k", "two"], None));
    assert_eq!(err["kind"], "usage");
}

#[test]
fn output_directory_and_explicit_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = kasym(&["tkn", "--k", "2", "--N", "10", "--xi1", "1", "--format", "json"], Some(dir.path()));
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("tkn.json")).unwrap()).unwrap();
    assert_eq!(v["rows"][1]["value"]["re"], -19.79932930453785);

    let explicit = dir.path().join("nested").join("t.csv");
    let out = kasym(&["tkn", "--k", "2", "--N", "10", "--xi1", "1", "--out", explicit.to_str().unwrap()], Some(dir.path()));
    assert!(out.status.success());
    assert!(std::fs::read_to_string(explicit).unwrap().starts_with("k,N,xi1"));
}

#[test]
fn cli_reproduces_library_calls() {
    let spec = QuadratureSpec::default();
    let f = make_gaussian_hermite((0.0, 0.0), 1.0, &[Monomial::new(1, 0, 1.0)]).unwrap();

    let r = pairing_exact(&f, 30.0, PrescriptionMode::PlusI0, &spec).unwrap();
    let lib = PairReport {
        a: 30.0,
        mode: PrescriptionMode::PlusI0,
        value: r.value,
        error_estimate: r.error,
        cutoff: r.cutoff,
    };
    for format in [Format::Csv, Format::Json] {
        let flag = if format == Format::Csv { "csv" } else { "json" };
        let cli = stdout(&["pair", "--fn", "xi1-gaussian", "--a", "30", "--mode", "plus_i0", "--format", flag]);
        assert_eq!(cli, lib.render(format));
    }

    let lib = discrepancy_report(2, &standard_grid(), &spec).unwrap().to_csv();
    assert_eq!(stdout(&["discrepancy", "--nmax", "2"]), lib);

    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    std::fs::write(&points, "xi1,xi2\n0,0\n0.5,0.25\n").unwrap();
    let fact = SymbolFactorization::identity(10.0).unwrap();
    let sol = solve_theorem2(
        &fact,
        &RightHandSide::new(f),
        2,
        &[(0.0, 0.0), (0.5, 0.25)],
        FormMode::Derived,
        0.0,
        &spec,
    )
    .unwrap();
    let lib = SolveReport {
        factorization: "identity".into(),
        a: 10.0,
        order: 2,
        mode: FormMode::Derived,
        points: sol,
    }
    .to_json();
    let cli = stdout(&[
        "solve",
        "--fact",
        "identity",
        "--rhs",
        "xi1-gaussian",
        "--order",
        "2",
        "--points-file",
        points.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(cli, lib);
}

#[test]
fn config_supplies_subcommand_and_custom_function() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"subcommand": "expand", "a": 100, "order": 2,
            "test_function": {"family": "gaussian_hermite", "poly": [{"p1": 1, "p2": 0, "coeff": 1}]}}"#,
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let from_config = stdout(&["--config", cfg]);
    let from_flags = stdout(&["expand", "--fn", "xi1-gaussian", "--a", "100", "--order", "2"]);
    assert_eq!(from_config, from_flags);
    assert!(from_config.lines().last().unwrap().starts_with("value,"));
    // flags win over the config
    assert_eq!(stdout(&["--config", cfg, "expand", "--order", "0"]).lines().count(), 3);
}

#[test]
fn lemma1_and_execute_agree() {
    let cli = stdout(&["lemma1", "--k", "2", "--fn1d", "shifted-gaussian", "--format", "json"]);
    let v: Value = serde_json::from_str(&cli).unwrap();
    assert!(v["check"]["discrepancy"].as_f64().unwrap() < 1e-6);
    let plan = kasym::cli::plan(clap::Parser::parse_from(["kasym", "lemma1", "--k", "2", "--fn1d", "shifted-gaussian"]))
        .unwrap();
    let csv = execute(&plan.job, &plan.spec, Format::Csv).unwrap();
    assert!(csv.starts_with("k,grid,halfwidth,direct,re_dft,im_dft,discrepancy\n2,4096,20,"));
}
