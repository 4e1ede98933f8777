use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lightlike::report::Report;
use lightlike::scenario::bundled;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lightlike"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(format!("{name}.scn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Write `text` as a scenario file inside `dir`.
fn scenario(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json_report(args: &[&str]) -> Report {
    let mut all = vec!["analyze"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--format", "json"]);
    let o = run(&all);
    Report::from_json(&stdout(&o)).unwrap_or_else(|e| panic!("{e}\n{}", stderr(&o)))
}

#[test]
fn every_bundled_scenario_passes() {
    for (name, _) in bundled::ALL {
        let o = run(&["analyze", data(name).to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}\n{}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("result     pass"), "{name}");
    }
}

#[test]
fn minimal_ascreen_text_report() {
    let o = run(&["analyze", data("minimal_ascreen").to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("sigma[2] = -0.250000000000"), "{out}");
    for line in ["qgcr", "ascreen", "minimal", "metric_connection"] {
        let found = out
            .lines()
            .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["ok", line, "true"]);
        assert!(found, "{line} is not a passing verdict in\n{out}");
    }
}

#[test]
fn loose_tolerance_keeps_verdicts() {
    for (name, _) in bundled::ALL {
        let path = data(name);
        let p = path.to_str().unwrap();
        let tight = json_report(&[p]);
        let loose = json_report(&[p, "--tol", "1e-3"]);
        assert_eq!(tight.verdicts, loose.verdicts, "{name}");
        assert_eq!(loose.scenario.tolerances.algebraic, 1e-3);
        assert_eq!(loose.scenario.tolerances.derived, 1e-3);
    }
}

#[test]
fn json_report_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&[
        "analyze",
        data("coscreen_sasakian").to_str().unwrap(),
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let r = Report::from_json(&text).unwrap();
    assert_eq!(r.to_json() + "\n", text);
    assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    assert_eq!(r.points.len(), 5);
}

#[test]
fn reports_are_deterministic() {
    let p = data("ascreen_rank_four");
    let a = json_report(&[p.to_str().unwrap(), "--samples", "6", "--seed", "9"]);
    let b = json_report(&[p.to_str().unwrap(), "--samples", "6", "--seed", "9"]);
    assert_eq!(a, b);
    assert_eq!(a.scenario.seed, 9);
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled::PLANE.replace("totally_geodesic = true", "totally_geodesic = false");
    let p = scenario(&dir, "plane.scn", &text);
    let o = run(&["analyze", &p]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("totally_geodesic: expected false, got true"));
}

#[test]
fn malformed_file_exits_two_with_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = scenario(
        &dir,
        "bad.scn",
        "name = \"x\"\n[ambient]\nbuiltin = \"cosymplectic\"\nm = 1\nq = 0\n[immersion\n",
    );
    let o = run(&["analyze", &p]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 6"), "{}", stderr(&o));

    let text = bundled::PLANE.replace("y1 = \"v\"", "y1 = \"v +* u\"");
    let p = scenario(&dir, "expr.scn", &text);
    let o = run(&["analyze", &p]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 11"), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_two() {
    let o = run(&["analyze", "/definitely/not/here.scn"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("cannot read"));
}

#[test]
fn domain_error_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let text = bundled::PLANE.replace("x1 = \"u\"", "x1 = \"sqrt(u - 5)\"");
    let p = scenario(&dir, "dom.scn", &text);
    let o = run(&["analyze", &p]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert!(stderr(&o).contains("square root of a negative number"));
}

#[test]
fn changing_radical_rank_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    // the induced metric on this surface degenerates completely at u = 1
    let text = bundled::NULL_RULED_SURFACE
        .replace(
            "bounds = [[1.5, 3.0], [-3.0, 3.0]]",
            "points = [[2.0, 0.3], [1.0, 0.3]]",
        )
        .replace("count = 5\n", "")
        .replace("seed = 11\n", "");
    let p = scenario(&dir, "rank.scn", &text);
    let o = run(&["analyze", &p]);
    assert_eq!(code(&o), 5, "{}", stderr(&o));
}

#[test]
fn degenerate_screen_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // declared screen fields that do not span a nondegenerate plane
    let text = r#"
name = "degenerate"
[ambient]
builtin = "cosymplectic"
m = 1
q = 0
[immersion]
params = ["u", "v"]
map = { x1 = "u", y1 = "v", z = "0" }
[frames]
screen = ["dx1", "dx1"]
[samples]
points = [[0.1, 0.2]]
"#;
    let p = scenario(&dir, "degen.scn", text);
    let o = run(&["analyze", &p]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("degenerate"));
}

#[test]
fn reproductions_pass() {
    for id in ["4-3", "4-5", "5-2"] {
        let o = run(&["reproduce", id]);
        assert_eq!(code(&o), 0, "{id}\n{}", stdout(&o));
    }
    let o = run(&["reproduce", "4-5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["example"], "4-5");
    assert_eq!(code(&run(&["reproduce", "9-9"])), 2);
}

#[test]
fn structure_check_reports_identities() {
    let o = run(&[
        "check-structure",
        data("coscreen_cosymplectic").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&[
        "check-structure",
        data("minimal_ascreen").to_str().unwrap(),
        "--samples",
        "20",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"], 20);
    // the indefinite Sasakian model breaks the symmetrized identity
    let o = run(&[
        "check-structure",
        data("coscreen_sasakian").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL nearly_mu_sasakian"));
}
