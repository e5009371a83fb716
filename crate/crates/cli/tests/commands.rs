use std::process::Command as Process;

use abqt_cli::commands::{cmd_run, cmd_sweep, cmd_tables, render_sweep, render_tables};
use abqt_cli::config::{Axis, OutputFormat, ScenarioConfig};
use abqt_cli::error::CliError;
use abqt_cli::{execute, resolve_config, Cli};
use abqt_core::protocol::CaseId;
use clap::Parser;
use sha2::{Digest, Sha256};

fn cfg(alpha: f64) -> ScenarioConfig {
    ScenarioConfig {
        alpha,
        ..Default::default()
    }
}

/// Small fixed grid for the checksum regression.
pub fn checksum_config() -> ScenarioConfig {
    let mut c = ScenarioConfig::default();
    c.sweep.alphas = vec![0.5, 1.0, 5.0];
    c.sweep.theta = Axis::full_turn(5);
    c.sweep.phi = Axis::full_turn(5);
    c.sweep.curve_alphas = vec![0.5, 1.0, 2.0, 5.0];
    c
}

const SWEEP_SHA256: &str = "e3cfb7f36c1224799fb557c0362217e0462a445b1d84e4352b4362250e1c6918";

#[test]
fn run_at_large_alpha_has_one_faithful_row_per_case() {
    let r = cmd_run(&cfg(5.0)).unwrap();
    assert_eq!(r.rows.len(), 64);
    let faithful: Vec<_> = r
        .rows
        .iter()
        .filter(|x| x.class_ab == "F" && x.class_ba == "F")
        .collect();
    assert_eq!(faithful.len(), 8);
    assert!(faithful.iter().all(|x| x.row == 5));
    assert!((r.faithful_total - 0.125).abs() < 1e-3);
    assert!((r.total_probability - 1.0).abs() < 1e-10);
}

#[test]
fn classification_column_does_not_depend_on_alpha() {
    let a = cmd_run(&cfg(5.0)).unwrap();
    let b = cmd_run(&cfg(1.0)).unwrap();
    let tags = |r: &abqt_cli::commands::RunReport| -> Vec<_> {
        r.rows.iter().map(|x| (x.case, x.row, x.class_ab, x.class_ba)).collect()
    };
    assert_eq!(tags(&a), tags(&b));
}

#[test]
fn degenerate_bob_still_reports_every_row() {
    let r = cmd_run(&ScenarioConfig {
        theta1: 0.0,
        ..cfg(1.0)
    })
    .unwrap();
    assert_eq!(r.rows.len(), 64);
    let r = cmd_run(&ScenarioConfig {
        bob: Some([1.0, 0.0]),
        ..cfg(2.0)
    })
    .unwrap();
    assert_eq!(r.rows.len(), 64);
}

#[test]
fn single_point_sweep_matches_run() {
    let mut c = cfg(1.0);
    c.sweep.alphas = vec![1.0];
    c.sweep.theta = Axis::Values(vec![c.theta]);
    c.sweep.phi = Axis::Values(vec![c.phi]);
    c.sweep.curve_alphas = vec![1.0];
    let rows = cmd_sweep(&c).unwrap();
    assert_eq!(rows.len(), 3 + 6);
    let run = cmd_run(&c).unwrap();
    let get = |row| run.rows.iter().find(|x| x.case == CaseId::I && x.row == row).unwrap();
    assert_eq!(rows[0].value, get(1).f_ab);
    assert_eq!(rows[1].value, get(3).f_ab);
    assert_eq!(rows[2].value, get(4).f_ab);
    let curve: Vec<f64> = rows[3..].iter().map(|r| r.value).collect();
    assert_eq!(curve[..4], [get(1).f_ab, get(1).f_ba, get(3).f_ab, get(4).f_ab]);
    assert_eq!(curve[4], run.average_f_ab);
    assert_eq!(curve[5], run.average_f_ba);
}

#[test]
fn sweep_layout_is_surfaces_then_curves() {
    let mut c = checksum_config();
    c.sweep.theta = Axis::full_turn(4);
    c.sweep.phi = Axis::full_turn(3);
    let rows = cmd_sweep(&c).unwrap();
    let surface = 3 * 4 * 3 * 3;
    assert_eq!(rows.len(), surface + 4 * 6);
    for q in ["F1_AB", "F3_AB", "F4_AB"] {
        assert_eq!(rows[..surface].iter().filter(|r| r.quantity == q).count(), 36);
    }
    assert!(rows[surface..].iter().all(|r| r.theta == c.theta && r.phi == c.phi));
    assert!(rows.iter().all(|r| (0.0..=1.0 + 1e-12).contains(&r.value)));
}

#[test]
fn sweep_csv_is_deterministic_and_frozen() {
    let c = checksum_config();
    let a = render_sweep(&cmd_sweep(&c).unwrap(), OutputFormat::Csv);
    let b = render_sweep(&cmd_sweep(&c).unwrap(), OutputFormat::Csv);
    assert_eq!(a, b);
    assert!(a.starts_with("theta,phi,theta1,alpha,quantity,value\n"));
    assert!(!a.contains('\r'));
    assert_eq!(a.lines().count(), 1 + 3 * 25 * 3 + 4 * 6);
    let digest = format!("{:x}", Sha256::digest(a.as_bytes()));
    println!("sweep sha256 {digest}");
    assert_eq!(digest, SWEEP_SHA256);
}

#[test]
fn empty_grid_is_a_config_error() {
    let mut c = cfg(1.0);
    c.sweep.alphas.clear();
    assert!(matches!(cmd_sweep(&c), Err(CliError::Config { field, .. }) if field == "sweep.alphas"));
    let mut c = cfg(1.0);
    c.sweep.phi = Axis::Range {
        start: 0.0,
        stop: 1.0,
        points: 0,
    };
    assert!(matches!(cmd_sweep(&c), Err(CliError::Config { field, .. }) if field == "sweep.phi"));
}

#[test]
fn tables_match_printed_rows() {
    let rows = cmd_tables(&cfg(1.0)).unwrap();
    assert_eq!(rows.len(), 64);
    let t1r5 = &rows[4];
    assert_eq!(
        (t1r5.alice_op.as_str(), t1r5.bob_op.as_str(), t1r5.tag().as_str()),
        ("I_6", "I_5 ⊗ I_4", "F")
    );
    let t2r1 = &rows[8];
    assert_eq!(t2r1.alice_op, "D_6 P_6");
    assert_eq!(t2r1.bob_op, "D_5 P_5 ⊗ D_4 P_4");
    assert_eq!(t2r1.tag(), "NF");
    let md = render_tables(&rows, OutputFormat::Markdown);
    assert_eq!(md.matches("## Table").count(), 8);
    let json: serde_json::Value = serde_json::from_str(&render_tables(&rows, OutputFormat::Json)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 64);
}

#[test]
fn flags_override_file_over_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"alpha": 2.5, "theta": 0.1, "format": "json"}"#).unwrap();
    let p = path.to_str().unwrap();
    let c = resolve_config(&Cli::parse_from(["abqt", "--config", p, "run", "--theta", "0.4"])).unwrap();
    assert_eq!((c.alpha, c.theta, c.phi), (2.5, 0.4, 0.9));
    assert_eq!(c.format, Some(OutputFormat::Json));
    let c = resolve_config(&Cli::parse_from([
        "abqt", "--config", p, "--format", "csv", "run", "--alpha", "3",
    ]))
    .unwrap();
    assert_eq!((c.alpha, c.theta), (3.0, 0.1));
    assert_eq!(c.format, Some(OutputFormat::Csv));
}

#[test]
fn verify_command_reports_and_fails_on_small_cutoff() {
    let out = execute(&Cli::parse_from(["abqt", "verify", "--alpha", "0.5", "--cutoff", "10"])).unwrap();
    assert_eq!(out.exit_code, 0);
    assert!(out.text.starts_with("PASS"));
    let err = execute(&Cli::parse_from(["abqt", "verify", "--alpha", "1", "--cutoff", "4"])).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("try cutoff"));
    // a tolerance no oracle can meet is a verification failure, not an error
    let out = execute(&Cli::parse_from([
        "abqt",
        "verify",
        "--alpha",
        "0.5",
        "--cutoff",
        "10",
        "--tolerance",
        "1e-30",
    ]))
    .unwrap();
    assert_eq!(out.exit_code, 2);
}

fn binary() -> Process {
    Process::new(env!("CARGO_BIN_EXE_abqt"))
}

#[test]
fn binary_exit_codes_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let st = binary().args(["run", "--alpha", "0"]).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&st.stderr).contains("alpha"));

    let circuit = dir.path().join("bad.circ");
    std::fs::write(&circuit, "MODES 2\nBPS 0 7\n").unwrap();
    let st = binary().arg("circuit").arg(&circuit).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&st.stderr).contains("2:7:"));

    let good = dir.path().join("good.circ");
    std::fs::write(&good, "MODES 2\nSTATE 0 1 = 1.0 |a,a> + 1.0 |-a,-a>\nBPS 0 1\nMEASURE 1 ZERO\nTARGET 0 = |1.4142135623730951a> + |-1.4142135623730951a>\n").unwrap();
    let st = binary()
        .args(["circuit", "--alpha", "0.8", "--format", "csv"])
        .arg(&good)
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let text = String::from_utf8(st.stdout).unwrap();
    let fid: f64 = text.lines().find(|l| l.starts_with("fidelity")).unwrap()[9..]
        .parse()
        .unwrap();
    assert!((fid - 1.0).abs() < 1e-12, "{text}");

    let st = binary()
        .env("ABQT_OUTPUT_DIR", dir.path())
        .args(["tables", "--format", "csv", "--output", "tables.csv"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("tables.csv")).unwrap();
    assert_eq!(csv.lines().count(), 65);
}
