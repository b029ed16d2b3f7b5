use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use critpair::io::{read_critical_points, read_roots, write_roots, CritRow};
use critpair::polyroots::{critical_points, RootedPolynomial, DEFAULT_TOL};
use critpair::Complex64 as C;

fn critpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critpair")).args(args).output().unwrap()
}

fn run_config(dir: &Path, json: &str) -> Output {
    let cfg = dir.join("config.json");
    fs::write(&cfg, json).unwrap();
    critpair(&["run", cfg.to_str().unwrap()])
}

fn count(svg: &str, class: &str) -> usize {
    svg.matches(&format!(r#"class="{class}""#)).count()
}

const NO_OUTLIERS: &str = r#"{
    "experiment": "no_outliers",
    "measure": {"kind": "uniform_circle", "center": [0, 0], "radius": 1},
    "n_values": [100], "trials": 5, "base_seed": 1, "output_dir": "out", "plot": true
}"#;

const PAIRING: &str = r#"{
    "experiment": "pairing",
    "measure": {"kind": "uniform_circle", "center": [0, 0], "radius": 1},
    "n_values": [101], "xi": {"rule": "fixed", "points": [[1.5, 0]]},
    "trials": 10, "base_seed": 7, "output_dir": "out", "plot": true
}"#;

#[test]
fn no_outlier_run_writes_figure() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_config(tmp.path(), NO_OUTLIERS);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("out");
    let svg = fs::read_to_string(dir.join("trial_0.svg")).unwrap();
    assert_eq!(count(&svg, "root"), 100);
    assert_eq!(count(&svg, "critical"), 99);
    assert_eq!(count(&svg, "support"), 1);
    assert_eq!(count(&svg, "pairing"), 0);
    let results = fs::read_to_string(dir.join("results.csv")).unwrap();
    assert!(results.starts_with("n,trial,status,outside_count\n"));
    assert_eq!(results.lines().count(), 6);
}

#[test]
fn pairing_run_and_replot() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run_config(tmp.path(), PAIRING);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("out");
    let svg = fs::read_to_string(dir.join("trial_0.svg")).unwrap();
    assert_eq!(count(&svg, "pairing"), 1);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["experiment"], "pairing");
    assert_eq!(summary["passed"], true);

    let replot = tmp.path().join("replot");
    let out = critpair(&[
        "plot",
        dir.join("trial_0.json").to_str().unwrap(),
        "--out",
        replot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(replot.join("trial_0.svg")).unwrap(), svg);
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let gap = PAIRING.replace("[[1.5, 0]]", "[[1.2, 0]]");
    let out = run_config(tmp.path(), &gap);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gap hypothesis"));

    for bad in [
        PAIRING.replace("\"plot\": true", "\"plot\": true, \"extra\": 0"),
        PAIRING.replace("\"trials\": 10", "\"trials\": 0"),
        PAIRING.replace("\"radius\": 1", "\"radius\": -1"),
        "{".to_string(),
    ] {
        assert_eq!(run_config(tmp.path(), &bad).status.code(), Some(2), "{bad}");
    }
    assert!(!tmp.path().join("out").exists());
    assert_eq!(
        critpair(&["run", tmp.path().join("missing.json").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(critpair(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failing_campaign_exits_3() {
    // roots drawn from two atoms leave an isolated critical point at (2k - n)/n
    let cfg = r#"{
        "experiment": "no_outliers",
        "measure": {"kind": "atomic", "atoms": [{"point": [-1, 0], "weight": 0.5}, {"point": [1, 0], "weight": 0.5}]},
        "n_values": [3], "epsilon": 0.05, "trials": 20, "base_seed": 3, "output_dir": "out"
    }"#;
    let tmp = tempfile::tempdir().unwrap();
    let out = run_config(tmp.path(), cfg);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("out/results.csv").exists());
}

#[test]
fn critpts_round_trip_and_oracle() {
    let tmp = tempfile::tempdir().unwrap();
    let roots: Vec<C> = (0..25)
        .map(|k| C::from_polar(1.0 + 0.01 * k as f64, 0.37 * k as f64 + 0.1))
        .collect();
    let path = tmp.path().join("roots.csv");
    write_roots(&path, &roots).unwrap();
    assert_eq!(read_roots(&path).unwrap(), roots);

    let out = critpair(&["critpts", path.to_str().unwrap(), "--oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("oracle max matched distance"));

    let written = read_critical_points(&tmp.path().join("roots.critpts.csv")).unwrap();
    let direct: Vec<CritRow> = critical_points(&RootedPolynomial::from_roots(roots).unwrap(), DEFAULT_TOL)
        .unwrap()
        .points
        .iter()
        .map(CritRow::from)
        .collect();
    assert_eq!(written, direct);
    assert_eq!(written.iter().map(|r| r.multiplicity).sum::<usize>(), 24);
}

#[test]
fn critpts_bad_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("empty.csv", "re,im\n"),
        ("junk.csv", "re,im\n1,zz\n"),
        ("short.csv", "re,im\n1\n"),
    ] {
        let p = tmp.path().join(name);
        fs::write(&p, text).unwrap();
        assert_eq!(critpair(&["critpts", p.to_str().unwrap()]).status.code(), Some(2), "{name}");
    }
}

#[test]
fn plot_of_critical_points_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let roots: Vec<C> = (0..8).map(|k| C::from_polar(1.0, 0.785 * k as f64)).collect();
    let path = tmp.path().join("r.csv");
    write_roots(&path, &roots).unwrap();
    assert_eq!(critpair(&["critpts", path.to_str().unwrap()]).status.code(), Some(0));
    let crit = tmp.path().join("r.critpts.csv");
    let out = critpair(&["plot", crit.to_str().unwrap(), "--roots", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(tmp.path().join("r.critpts.svg")).unwrap();
    assert_eq!(count(&svg, "root"), 8);
    assert_eq!(count(&svg, "critical"), 7);
}
