use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use noneqcp::cli_io::{convert_units, ResultTable, ScenarioFile};

const BIN: &str = env!("CARGO_BIN_EXE_noneqcp");

fn scenario(mode: &str, t_medium: f64, t_field: f64, geometry: &str, time: &str) -> String {
    format!(
        r#"{{
  "medium": {{"model": "drude", "plasma_freq_eV": 8.9, "damping_eV": 0.0357, "temperature_K": {t_medium}}},
  "atom": {{"alpha0_m3": 4.73e-29, "resonance": "2.35e15 Hz"}},
  "field": {{"temperature_K": {t_field}}},
  "geometry": {geometry},
  "time": {time},
  "run": {{"mode": "{mode}", "tolerances": {{"rel": 1e-8}}}}
}}"#
    )
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn noneqcp(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn data_lines(text: &str) -> Vec<String> {
    text.lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

const Z_GRID: &str = r#"{"z_grid": [1e-7, 5e-7, 1e-6]}"#;
const TIME: &str = r#"{"tau_s": 1e-6, "t_i_s": 0}"#;

#[test]
fn eq_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "eq.json", &scenario("eq", 295.0, 295.0, Z_GRID, TIME));
    let out = dir.path().join("eq.csv");
    let o = noneqcp(&["eq", "--scenario", sc.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let t = ResultTable::from_csv(&text).unwrap();
    assert_eq!(t.rows.len(), 3);
    assert_eq!(t.column("z_m").unwrap(), vec![1e-7, 5e-7, 1e-6]);
    assert!(t.column("f_total_N").unwrap().iter().all(|f| *f < 0.0));
    assert_eq!(t.to_csv(), text);
    assert!(t.header_value("build").is_some());
    assert!(t.header_value("hbar_c_eV_nm").is_some());
    for line in data_lines(&text) {
        assert!(line.split(',').all(|c| c.parse::<f64>().is_ok()));
    }
}

#[test]
fn steady_equal_temperatures_matches_eq_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &scenario("eq", 320.0, 320.0, Z_GRID, TIME));
    let b = write(dir.path(), "b.json", &scenario("steady", 320.0, 320.0, Z_GRID, TIME));
    let eq = noneqcp(&["eq", "--scenario", a.to_str().unwrap()]);
    let st = noneqcp(&["steady", "--scenario", b.to_str().unwrap()]);
    assert!(eq.status.success() && st.status.success());
    let eq = data_lines(&String::from_utf8(eq.stdout).unwrap());
    let st = data_lines(&String::from_utf8(st.stdout).unwrap());
    assert_eq!(eq, st);
}

#[test]
fn json_format_parses() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "n.json", &scenario("neq", 400.0, 295.0, r#"{"z_m": 2e-6}"#, TIME));
    let o = noneqcp(&["neq", "--scenario", sc.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["columns"][0], "z_m");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn dyn_table_has_closed_and_integral() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(
        dir.path(),
        "d.json",
        &scenario("dyn", 295.0, 295.0, r#"{"z_m": 1e-6}"#, r#"{"tau_grid": [1e-6, 2e-6], "t_i_s": 0}"#),
    );
    let o = noneqcp(&["dyn", "--scenario", sc.to_str().unwrap()]);
    assert!(o.status.success());
    let t = ResultTable::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 2);
    assert_eq!(t.columns[0], "z_m");
}

#[test]
fn fig2_writes_two_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2.csv");
    let o = noneqcp(&["fig2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let space = ResultTable::from_csv(&fs::read_to_string(dir.path().join("fig2_space.csv")).unwrap()).unwrap();
    let time = ResultTable::from_csv(&fs::read_to_string(dir.path().join("fig2_time.csv")).unwrap()).unwrap();
    assert_eq!(space.rows.len(), 46);
    assert_eq!(space.columns.len(), 5);
    assert_eq!(time.columns, ["tau_s", "mean_N", "envelope_upper_N", "envelope_lower_N"]);
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let sc = write(dir.path(), "e.json", &scenario("eq", 295.0, 295.0, Z_GRID, TIME));
    let a = noneqcp(&["eq", "--scenario", sc.to_str().unwrap()]);
    let b = Command::new(BIN)
        .args(["eq", "--scenario", sc.to_str().unwrap()])
        .env("NONEQCP_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validate_defaults_pass() {
    let o = noneqcp(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn validation_failure_exits_2() {
    // far outside the eddy-current regime the closed form misses the integral
    let dir = tempfile::tempdir().unwrap();
    let sc = write(
        dir.path(),
        "v.json",
        &scenario("validate", 295.0, 295.0, r#"{"z_m": 2e-8}"#, r#"{"tau_s": 2e-12, "t_i_s": 0}"#),
    );
    let o = noneqcp(&["validate", "--scenario", sc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(noneqcp(&["bogus"]).status.code(), Some(1));
    assert_eq!(noneqcp(&["eq"]).status.code(), Some(1));
    let missing = dir.path().join("none.json");
    assert_eq!(noneqcp(&["eq", "--scenario", missing.to_str().unwrap()]).status.code(), Some(1));
    let bare = scenario("eq", 295.0, 295.0, Z_GRID, TIME).replace("2.35e15 Hz", "2.35e15");
    let sc = write(dir.path(), "bare.json", &bare);
    assert_eq!(noneqcp(&["eq", "--scenario", sc.to_str().unwrap()]).status.code(), Some(1));
    let both = scenario("eq", 295.0, 295.0, r#"{"z_m": 1e-6, "z_grid": [1e-6]}"#, TIME);
    let sc = write(dir.path(), "both.json", &both);
    assert_eq!(noneqcp(&["eq", "--scenario", sc.to_str().unwrap()]).status.code(), Some(1));
    let sc = write(dir.path(), "ok.json", &scenario("eq", 295.0, 295.0, Z_GRID, TIME));
    assert_eq!(noneqcp(&["eq", "--scenario", sc.to_str().unwrap(), "--tol", "2"]).status.code(), Some(1));
    assert_eq!(noneqcp(&["--help"]).status.code(), Some(0));
}

#[test]
fn unit_conversions_from_file() {
    let text = scenario("eq", 295.0, 295.0, r#"{"z_m": 1e-6}"#, TIME);
    let r = convert_units(&ScenarioFile::from_json(&text).unwrap()).unwrap();
    assert!((r.base.atom.resonance - 1.547).abs() < 1e-3);
    assert!((r.base.atom.alpha0 / 6.15e-9 - 1.0).abs() < 1e-2);
    let kt = noneqcp::units::temperature_to_natural(295.0);
    assert!((kt - 2.542e-2).abs() < 1e-5);
    let back = ScenarioFile::from_scenario(&r.base);
    let again = convert_units(&back).unwrap();
    for (a, b) in [
        (r.base.z, again.base.z),
        (r.base.atom.alpha0, again.base.atom.alpha0),
        (r.base.atom.resonance, again.base.atom.resonance),
    ] {
        assert!((a - b).abs() <= 1e-15 * a.abs());
    }
}
