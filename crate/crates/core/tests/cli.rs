//! End-to-end runs of the `phasefree` binary.

use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use phasefree::cli::{format_sig, CSV_HEADER};
use phasefree::entanglement::average_entanglement;

fn phasefree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasefree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn sweep(dir: &Path, name: &str, extra: &[&str]) -> (Output, String) {
    let csv = dir.join(name);
    let mut args = vec!["sweep", "--csv", csv.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = phasefree(&args);
    let text = std::fs::read_to_string(&csv).unwrap_or_default();
    (out, text)
}

#[test]
fn zero_squeezing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = sweep(dir.path(), "z.csv", &["--etas", "0.0", "--betas", "1,5"]);
    assert!(out.status.success());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 3);
    for row in &lines[1..] {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 8);
        assert_eq!(f[2], "0");
        assert_eq!(f[4], "0");
    }
}

#[test]
fn single_cell_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let (out, csv) = sweep(dir.path(), "one.csv", &["--etas", "0.5", "--betas", "1"]);
    assert!(out.status.success());
    let row: Vec<String> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(String::from)
        .collect();
    let report = average_entanglement(0.5, Complex64::new(1.0, 0.0), 1e-10).unwrap();
    assert_eq!(row[3], format_sig(report.e_avg));
    assert_eq!(row[4], format_sig(report.fraction_lost));
    assert_eq!(row[6], report.window_k.to_string());
}

#[test]
fn svg_is_well_formed_with_one_polyline_per_eta() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("plot.svg");
    let (out, _) = sweep(
        dir.path(),
        "s.csv",
        &[
            "--etas",
            "0.1,0.3,0.5",
            "--betas",
            "1:4:1",
            "--svg",
            svg.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(svg).unwrap();
    let doc = roxmltree::Document::parse(&text).expect("well-formed XML");
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("width"), Some("800"));
    assert_eq!(root.attribute("height"), Some("600"));
    let polylines: Vec<_> = root
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .collect();
    assert_eq!(polylines.len(), 3);
    for p in polylines {
        assert_eq!(p.attribute("points").unwrap().split(' ').count(), 4);
    }
    assert!(text.contains(">beta<"));
}

#[test]
fn unwritable_path_fails_with_message() {
    let out = phasefree(&[
        "sweep",
        "--etas",
        "0.1",
        "--betas",
        "1",
        "--csv",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn invalid_grids_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (etas, betas) in [("0.1:0.5", "1"), ("1.5", "1"), ("0.1", "0"), ("x", "1")] {
        let (out, _) = sweep(dir.path(), "bad.csv", &["--etas", etas, "--betas", betas]);
        assert_eq!(out.status.code(), Some(2), "etas={etas} betas={betas}");
    }
    let (out, _) = sweep(
        dir.path(),
        "bad.csv",
        &["--threads", "0", "--etas", "0.1", "--betas", "1"],
    );
    assert_eq!(out.status.code(), Some(2));
}

fn field(stdout: &str, key: &str) -> f64 {
    let line = stdout
        .lines()
        .find(|l| l.starts_with(key))
        .unwrap_or_else(|| panic!("no {key} line in {stdout}"));
    line.split('=')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn point_at_large_beta_retains_entanglement() {
    let out = phasefree(&["point", "--eta", "0.5", "--beta", "10"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(field(&stdout, "fraction_lost") < 0.01);
    assert!(stdout.contains("top contributions"));
    let rows = stdout
        .lines()
        .skip_while(|l| !l.starts_with("top"))
        .skip(1)
        .count();
    assert_eq!(rows, 10);
}

#[test]
fn point_without_squeezing() {
    let out = phasefree(&["point", "--eta", "0", "--beta", "5"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout
        .lines()
        .any(|l| l.starts_with("E_exact        = 0 ebits")));
}

#[test]
fn point_with_oracle_cross_check() {
    let out = phasefree(&[
        "point", "--eta", "0.5", "--beta", "1", "--oracle", "--cutoff", "10",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let line = stdout.lines().find(|l| l.starts_with("oracle:")).unwrap();
    let deviation: f64 = line
        .split("max deviation ")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(deviation < 1e-10, "{line}");

    let out = phasefree(&[
        "point", "--eta", "0.5", "--beta", "1", "--oracle", "--cutoff", "20",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
