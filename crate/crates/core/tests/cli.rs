//! The `annulus` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn annulus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annulus")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn json_envelope_has_a_fixed_layout() {
    let out = annulus(&["minimize", "--N", "4", "--k", "3", "--rho", "0.3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let keys: Vec<&str> = ["\"tool\"", "\"version\"", "\"config\"", "\"result\""].to_vec();
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["tool"], "annulus");
    assert_eq!(doc["config"]["N"], 4);
    assert_eq!(doc["config"]["rho"], 0.3);
    let r0 = doc["result"]["r0"].as_f64().unwrap();
    assert!(r0 > 0.3 && r0 < 1.0);
}

#[test]
fn out_file_matches_stdout_and_leaves_no_temporaries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("threshold.json");
    let args = ["threshold", "--N", "4", "--k", "3"];
    let printed = annulus(&args);
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let written = annulus(&with_out);
    assert!(written.status.success());
    assert!(written.stdout.is_empty());
    let file = std::fs::read(&path).unwrap();
    // the echoed config differs only by the output path
    let a: serde_json::Value = serde_json::from_slice(&printed.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&file).unwrap();
    assert_eq!(a["result"], b["result"]);
    assert_eq!(b["config"]["out"], p);
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1);

    // overwriting replaces the file in one step
    assert!(annulus(&with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), file);
}

#[test]
fn lambda1_profile_csv_round_trips() {
    let out = annulus(&["lambda1", "--N", "3", "--k", "2", "--rho", "0.8", "--grid", "64"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["r", "lambda1", "f", "dlambda1"]);
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    for row in &rows {
        assert!(row[0] > 0.8 && row[0] < 1.0);
        // f = r^{N-2} Lambda_1 with N = 3
        assert!((row[2] - row[0] * row[1]).abs() <= 1e-12 * row[2].abs().max(1.0));
    }
    let sign_changes = rows.windows(2).filter(|w| w[0][3].signum() != w[1][3].signum()).count();
    assert_eq!(sign_changes, 1);
}

#[test]
fn svg_outputs_are_plots() {
    for args in [
        vec!["lambda1", "--N", "4", "--k", "3", "--rho", "0.4", "--grid", "32", "--format", "svg"],
        vec!["sweep", "--N", "3", "--k", "4", "--format", "svg"],
    ] {
        let out = annulus(&args);
        assert!(out.status.success());
        let text = stdout(&out);
        assert!(text.starts_with("<svg"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert!(text.contains("<polyline"));
    }
}

#[test]
fn sweep_does_not_depend_on_the_thread_count() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_annulus"))
            .args(["sweep", "--N", "4", "--k", "6"])
            .env("ANNULUS_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let text = stdout(&one);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().next().unwrap() == "k,rho_k,lower_bound");
    assert_eq!(run("0").status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let bad_rho = annulus(&["minimize", "--rho", "1.5"]);
    assert_eq!(bad_rho.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_rho.stderr).contains("rho must lie in (0,1)"));
    assert_eq!(annulus(&["minimize", "--rho", "0"]).status.code(), Some(2));
    assert_eq!(annulus(&["minimize", "--bogus"]).status.code(), Some(2));
    assert_eq!(annulus(&["robin", "--rho", "0.5"]).status.code(), Some(2));
    assert_eq!(annulus(&["threshold", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(annulus(&["--help"]).status.code(), Some(0));
    assert_eq!(annulus(&["--version"]).status.code(), Some(0));
    let capped = annulus(&["robin", "--N", "3", "--rho", "0.5", "--r", "0.999", "--max-terms", "5"]);
    assert_eq!(capped.status.code(), Some(3));
    let missing = Path::new("/nonexistent-dir/out.json");
    let io = annulus(&["threshold", "--out", missing.to_str().unwrap()]);
    assert_eq!(io.status.code(), Some(1));
}

#[test]
fn green_and_psi_commands() {
    let out = annulus(&["green", "--N", "3", "--rho", "0.3", "--x", "0.6,0,0", "--y", "0,-0.6,0"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["result"]["value"].as_f64().unwrap() > 0.0);

    let out = annulus(&["psi", "--N", "5", "--k", "3", "--rho", "0.3", "--r", "0.6", "--d", "0.8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["result"].is_object() || doc["result"].is_array());
}
