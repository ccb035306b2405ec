use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn schedule(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schedules")
        .join(name)
}

fn hypzero(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypzero"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn data_rows(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn poly_matches_series() {
    let tmp = tempfile::tempdir().unwrap();
    let s = schedule("gauss_2_3.toml");
    let out = hypzero(
        tmp.path(),
        &[
            "poly",
            "--schedule",
            s.to_str().unwrap(),
            "--n",
            "2,0",
            "--out",
            "o",
        ],
    );
    ok(&out);
    let two = fs::read_to_string(tmp.path().join("o/poly_n2.txt")).unwrap();
    assert_eq!(data_rows(&two), ["0 1/1 0/1", "1 -4/3 0/1", "2 1/2 0/1"]);
    let zero = fs::read_to_string(tmp.path().join("o/poly_n0.txt")).unwrap();
    assert_eq!(data_rows(&zero), ["0 1/1 0/1"]);
    assert!(tmp.path().join("o/manifest_poly.json").exists());
}

#[test]
fn bad_denominator_names_index() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(
        tmp.path().join("bad.toml"),
        "A = 2\nB = 1\nalphas = [\"-1\", \"1\"]\ncs = [\"0\", \"0\"]\nbetas = [\"-1\"]\nds = [\"0\"]\n",
    )
    .unwrap();
    let out = hypzero(tmp.path(), &["poly", "--schedule", "bad.toml", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b_1"));
}

#[test]
fn missing_files_exit_4() {
    let tmp = tempfile::tempdir().unwrap();
    let out = hypzero(tmp.path(), &["poly", "--schedule", "absent.toml"]);
    assert_eq!(out.status.code(), Some(4));
    let out = hypzero(tmp.path(), &["plot", "--roots-file", "absent.txt"]);
    assert_eq!(out.status.code(), Some(4));
    let s = schedule("lemniscate_k1.toml");
    let out = hypzero(
        tmp.path(),
        &["verify", "--schedule", s.to_str().unwrap(), "--n", "7"],
    );
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn invalid_config_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("run.toml"), "precison = 256\n").unwrap();
    let out = hypzero(tmp.path(), &["--config", "run.toml", "poly"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hypzero(tmp.path(), &["poly", "--box", "0,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hypzero(tmp.path(), &["poly", "--n", "x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_dir = tmp.path().join("cfg");
    fs::create_dir(&cfg_dir).unwrap();
    fs::copy(schedule("gauss_2_3.toml"), cfg_dir.join("s.toml")).unwrap();
    fs::write(
        cfg_dir.join("run.toml"),
        "schedule = \"s.toml\"\nout = \"results\"\nn = [1]\nprecision = 128\n",
    )
    .unwrap();

    // Relative paths in the file resolve against its directory, not the cwd.
    let out = hypzero(tmp.path(), &["--config", "cfg/run.toml", "poly", "--n", "2"]);
    ok(&out);
    let results = cfg_dir.join("results");
    assert!(results.join("poly_n2.txt").exists());
    assert!(!results.join("poly_n1.txt").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(results.join("manifest_poly.json")).unwrap()).unwrap();
    assert_eq!(manifest["params"]["precision"], 128);
    assert_eq!(manifest["params"]["n"], serde_json::json!([2]));
}

#[test]
fn pipeline_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let s = schedule("lemniscate_k1.toml");
    let common = [
        "--schedule",
        s.to_str().unwrap(),
        "--out",
        "run",
        "--n",
        "10,20,30",
        "--precision",
        "256",
        "--resolution",
        "80",
        "--null-samples",
        "2000",
    ];
    for cmd in ["roots", "curve", "levels", "regions", "verify", "plot"] {
        let mut args = vec![cmd];
        args.extend_from_slice(&common);
        ok(&hypzero(tmp.path(), &args));
    }
    let run = tmp.path().join("run");
    for f in [
        "roots_n30.txt",
        "branch_points.txt",
        "levels/curve_000.csv",
        "regions.txt",
        "k_cells.txt",
        "report_distance.json",
        "report_convergence.json",
        "report_conjecture2.json",
        "figure_n30.svg",
    ] {
        assert!(run.join(f).exists(), "{f} missing");
    }

    let conv: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("report_convergence.json")).unwrap()).unwrap();
    assert_eq!(conv["endpoints_decrease"], true);
    let dist: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("report_distance.json")).unwrap()).unwrap();
    let first = dist["restricted"][0]["max"].as_f64().unwrap();
    let last = dist["restricted"][2]["max"].as_f64().unwrap();
    assert!(last < first, "{first} -> {last}");

    let before = fs::read(run.join("roots_n30.txt")).unwrap();
    let svg_before = fs::read(run.join("figure_n30.svg")).unwrap();
    let mut args = vec!["roots"];
    args.extend_from_slice(&common);
    ok(&hypzero(tmp.path(), &args));
    let mut args = vec!["plot"];
    args.extend_from_slice(&common);
    ok(&hypzero(tmp.path(), &args));
    assert_eq!(before, fs::read(run.join("roots_n30.txt")).unwrap());
    assert_eq!(svg_before, fs::read(run.join("figure_n30.svg")).unwrap());
}

#[test]
fn empty_root_file_gives_curve_only_figure() {
    let tmp = tempfile::tempdir().unwrap();
    let s = schedule("lemniscate_k1.toml");
    ok(&hypzero(
        tmp.path(),
        &[
            "levels",
            "--schedule",
            s.to_str().unwrap(),
            "--out",
            "run",
            "--seed-point",
            "1.2,0",
        ],
    ));
    fs::write(tmp.path().join("empty.txt"), "").unwrap();
    ok(&hypzero(
        tmp.path(),
        &[
            "plot",
            "--out",
            "run",
            "--roots-file",
            "empty.txt",
            "--output",
            "fig.svg",
        ],
    ));
    let svg = fs::read_to_string(tmp.path().join("fig.svg")).unwrap();
    assert!(svg.contains("<polygon") || svg.contains("<polyline"));
    assert!(!svg.contains(r#"r="2""#));
}

#[test]
fn saddle_seed_traces_all_branches() {
    let tmp = tempfile::tempdir().unwrap();
    let s = schedule("lemniscate_k1.toml");
    ok(&hypzero(
        tmp.path(),
        &[
            "levels",
            "--schedule",
            s.to_str().unwrap(),
            "--out",
            "run",
            "--seed-point",
            "0.5,0",
        ],
    ));
    let n = fs::read_dir(tmp.path().join("run/levels")).unwrap().count();
    assert!(n >= 1);
}
