use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn account() -> PathBuf {
    root().join("data/global_2020.account")
}

fn economy() -> PathBuf {
    root().join("data/global_2020.economy")
}

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], tolerance: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_circuflow"));
    cmd.args(args).env_remove("CIRCUFLOW_TOLERANCE");
    if let Some(t) = tolerance {
        cmd.env("CIRCUFLOW_TOLERANCE", t);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// The reference account text with one line replaced.
fn edited_account(dir: &TempDir, from: &str, to: &str) -> PathBuf {
    let src = fs::read_to_string(account()).unwrap();
    assert!(src.contains(from));
    let path = dir.path().join("edited.account");
    fs::write(&path, src.replace(from, to)).unwrap();
    path
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn validate_reference_warns_and_exits_zero() {
    let o = run(&["validate", p(&account())]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("pass-with-warning"));
    assert!(out.contains("residual 3.0 Gt (2.9%)"));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn strict_tolerance_from_environment_fails_validation() {
    let o = run_env(&["validate", p(&account())], Some("0.02"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("fail"));
    let o = run_env(&["metrics", p(&account())], Some("0.02"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explicit_file_tolerance_beats_environment() {
    let dir = TempDir::new().unwrap();
    let path = edited_account(&dir, "year = 2020", "year = 2020\nbalance_tolerance = 0.05");
    let o = run_env(&["validate", p(&path)], Some("0.02"));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bad_environment_tolerance_is_rejected() {
    let o = run_env(&["validate", p(&account())], Some("lots"));
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("CIRCUFLOW_TOLERANCE"));
}

#[test]
fn negative_mass_names_field_and_line() {
    let dir = TempDir::new().unwrap();
    let path = edited_account(&dir, "waste_output = 25.0", "waste_output = -25.0");
    let o = run(&["validate", p(&path)]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("waste_output"), "{err}");
    assert!(err.contains("line"), "{err}");
}

#[test]
fn missing_field_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let path = edited_account(&dir, "recycled_input = 9.0", "");
    let o = run(&["metrics", p(&path)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("recycled_input"));
}

#[test]
fn unknown_key_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let path = edited_account(&dir, "year = 2020", "year = 2020\ncolour = \"green\"");
    let o = run(&["validate", p(&path)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn category_mismatch_fails_validation() {
    let dir = TempDir::new().unwrap();
    let path = edited_account(&dir, "energetic_input = 40.0", "energetic_input = 41.0");
    let o = run(&["validate", p(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn missing_file_and_bad_usage_exit_four() {
    assert_eq!(run(&["validate", "/no/such/file"]).status.code(), Some(4));
    assert_eq!(run(&["metrics"]).status.code(), Some(4));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(4));
    let o = run(&["metrics", p(&account()), "--format", "pdf"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn metrics_markdown_and_rounding() {
    let o = run(&["metrics", p(&account()), "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("| metric"));
    for v in ["8.7%", "14.1%", "27.3%", "61.5%"] {
        assert!(out.contains(v), "missing {v}");
    }
    let out = stdout(&run(&[
        "metrics",
        p(&account()),
        "--round",
        "0",
        "--no-footnotes",
    ]));
    for v in ["9%", "14%", "27%", "62%"] {
        assert!(out.contains(v), "missing {v}");
    }
    assert!(!out.contains("[1]"));
}

#[test]
fn kv_output_is_deterministic_and_parseable() {
    let acct = account();
    let args = ["metrics", p(&acct), "--format", "kv"];
    let (a, b) = (stdout(&run(&args)), stdout(&run(&args)));
    assert_eq!(a, b);
    assert!(a.contains("real_rate = 0.2727"));
}

#[test]
fn svg_flag_writes_well_formed_chart() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("metrics.svg");
    let o = run(&["metrics", p(&account()), "--svg", p(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert!(doc
        .descendants()
        .any(|n| n.attribute("id") == Some("denominator-annually-recoverable")));

    let path = dir.path().join("value.svg");
    let o = run(&["valuemap", p(&account()), p(&economy()), "--svg", p(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert!(doc
        .descendants()
        .any(|n| n.attribute("id") == Some("segment-legacy-stocks")));
}

#[test]
fn valuemap_reference_shares() {
    let o = run(&["valuemap", p(&account()), p(&economy())]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for v in ["1.4%", "17.4%", "13.0%", "68.2%", "$58.6T", "$11.2T"] {
        assert!(out.contains(v), "missing {v}");
    }
}

#[test]
fn valuemap_without_sectors_leaves_everything_to_legacy() {
    let dir = TempDir::new().unwrap();
    let econ = write(
        &dir,
        "bare.economy",
        "year = 2020\ngdp = 86.0\ngfcf_rate = 0.26\ncfc_rate = 0.13\n",
    );
    let o = run(&["valuemap", p(&account()), p(&econ)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("87.0%"));
}

#[test]
fn valuemap_zero_gdp_is_a_computation_error() {
    let dir = TempDir::new().unwrap();
    let econ = write(
        &dir,
        "zero.economy",
        "year = 2020\ngdp = 0.0\ngfcf_rate = 0.26\ncfc_rate = 0.13\n",
    );
    let o = run(&["valuemap", p(&account()), p(&econ)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("gdp"));
}

#[test]
fn full_recovery_scenario() {
    let scen = root().join("scenarios/full_recovery.scenario");
    let o = run(&["scenario", p(&account()), p(&economy()), p(&scen)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let real = out
        .lines()
        .find(|l| l.starts_with("real circularity"))
        .unwrap();
    assert!(real.contains("27.3%") && real.contains("100.0%"), "{real}");
    let rev = out
        .lines()
        .find(|l| l.starts_with("reverse-flow GDP share"))
        .unwrap();
    assert!(rev.contains("1.4%") && rev.contains("5.1%"), "{rev}");
}

#[test]
fn empty_scenario_has_zero_deltas() {
    let dir = TempDir::new().unwrap();
    let scen = write(&dir, "none.scenario", "name = \"none\"\n");
    let o = run(&[
        "scenario",
        p(&account()),
        p(&economy()),
        p(&scen),
        "--format",
        "kv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let delta = out.split("[delta]").nth(1).expect("delta table");
    for line in delta.lines().filter(|l| l.contains('=')) {
        let v: f64 = line.split('=').nth(1).unwrap().trim().parse().unwrap();
        assert_eq!(v, 0.0, "{line}");
    }
}

#[test]
fn out_of_range_fraction_is_rejected_with_step() {
    let dir = TempDir::new().unwrap();
    let scen = write(
        &dir,
        "bad.scenario",
        "name = \"bad\"\n\n[[step]]\nop = \"set_recovery_rate\"\nfraction = 1.5\n",
    );
    let o = run(&["scenario", p(&account()), p(&economy()), p(&scen)]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("step 1"), "{err}");
}

#[test]
fn infeasible_scenario_is_a_computation_error() {
    let dir = TempDir::new().unwrap();
    let scen = write(
        &dir,
        "swap.scenario",
        "name = \"swap\"\n\n[[step]]\nop = \"replace_energetic_with_stock\"\nfraction = 1.0\n",
    );
    let o = run(&["scenario", p(&account()), p(&economy()), p(&scen)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn scenario_svg_format_prints_chart() {
    let scen = root().join("scenarios/waste_diversion.scenario");
    let o = run(&[
        "scenario",
        p(&account()),
        p(&economy()),
        p(&scen),
        "--format",
        "svg",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
}
