use std::fs;
use std::process::{Command, Output};

fn fanlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanlab"))
        .args(args)
        .env("FANLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn density_pow23() {
    let o = fanlab(&["density", "--lemma", "pow23", "--x", "0.5", "--z", "0.25", "--eps", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""exponents":{"m":20,"n":12}"#));
}

#[test]
fn density_gabi_exact() {
    let o = fanlab(&["density", "--lemma", "gabi", "--x", "1", "--z", "0.5", "--eps", "1e-9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""exponents":{"h":2,"k":2}"#));
}

#[test]
fn density_usage_and_search_failures() {
    assert_eq!(fanlab(&["density", "--lemma", "pow23", "--x", "0.5"]).status.code(), Some(1));
    let o = fanlab(&["density", "--lemma", "pow23", "--x", "0.5", "--z", "0.3", "--eps", "1e-9", "--bound", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mahavier_rows_and_errors() {
    let o = fanlab(&["mahavier", "--relation", "H", "--start", "1", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], "1,0.5,0.0625,1-1");
    assert_eq!(fanlab(&["mahavier", "--relation", "H", "--start", "1", "--depth", "30"]).status.code(), Some(3));
    assert_eq!(fanlab(&["mahavier", "--relation", "H", "--start", "7", "--depth", "2"]).status.code(), Some(1));
}

#[test]
fn transitive_point_single_target() {
    let dir = tempfile::tempdir().unwrap();
    let targets = dir.path().join("t.json");
    fs::write(&targets, r#"{"targets": [{"word": [2], "box": [[0.24, 0.26]], "eps": 0.01}]}"#).unwrap();
    let report = dir.path().join("hits.csv");
    let o = fanlab(&[
        "transitive-point",
        "--targets",
        targets.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "target_id,hit_step,hit_distance");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("0,"));
    assert!(o.stdout.is_empty());
}

#[test]
fn orbit_with_zero_steps_misses() {
    let dir = tempfile::tempdir().unwrap();
    let targets = dir.path().join("t.json");
    fs::write(&targets, r#"{"targets": [{"word": [1], "box": [[0.2, 0.3]]}]}"#).unwrap();
    let o = fanlab(&["orbit", "--t", "0.3", "--steps", "0", "--targets", targets.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o), "target_id,hit_step,hit_distance\n0,,\n");
}

#[test]
fn sigma_chain_feasible_and_infeasible() {
    let o = fanlab(&["sigma-chain", "--auto", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
    let dir = tempfile::tempdir().unwrap();
    let targets = dir.path().join("t.json");
    fs::write(&targets, r#"{"targets": [{"box": [[1.5, 2.0]]}]}"#).unwrap();
    let o = fanlab(&["sigma-chain", "--targets", targets.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["cantor", "lelek", "relation"] {
        let a = dir.path().join(format!("{kind}-a.svg"));
        let b = dir.path().join(format!("{kind}-b.svg"));
        for p in [&a, &b] {
            let o = fanlab(&["render", "--kind", kind, "--out", p.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{kind}");
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{kind}");
    }
    let svg = fs::read_to_string(dir.path().join("cantor-a.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 64);
    assert!(svg.contains(r#"viewBox="0 -1 1 1""#));
    let relation = fs::read_to_string(dir.path().join("relation-a.svg")).unwrap();
    assert!(relation.matches("<polyline").count() >= 2);
}

#[test]
fn render_reports_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("x.svg");
    let o = fanlab(&["render", "--kind", "cantor", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_suites() {
    let o = fanlab(&["verify", "--suite", "density"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
    assert_eq!(fanlab(&["verify", "--suite", "bogus"]).status.code(), Some(1));
    assert_eq!(fanlab(&["--help"]).status.code(), Some(0));
}
