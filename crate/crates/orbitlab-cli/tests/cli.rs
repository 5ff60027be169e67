//! End-to-end driver tests: exit codes, diagnostics, golden output rows.

use std::path::Path;
use std::process::{Command, Output};

fn run_with_config(subcommand: &str, dir: &Path, config: &str, extra: &[&str]) -> Output {
    let path = dir.join("config.json");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_orbitlab"))
        .arg(subcommand)
        .arg("--config")
        .arg(&path)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn degrees_golden_rows_for_cremona() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "degrees",
        dir.path(),
        r#"{"map": {"kind": "homogeneous", "n": 2,
            "coords": ["x1*x2", "x0*x2", "x0*x1"]}, "horizon": 4}"#,
        &[],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "n,deg,deg_root,ratio");
    assert!(rows[1].starts_with("0,1,"));
    assert!(rows[2].starts_with("1,2,"));
    assert!(rows[3].starts_with("2,1,"));
    assert!(rows[4].starts_with("3,2,"));
    assert!(rows[5].starts_with("4,1,"));
}

#[test]
fn power_map_degrees_double() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "degrees",
        dir.path(),
        r#"{"map": {"kind": "homogeneous", "n": 1, "coords": ["x0^2", "x1^2"]},
            "horizon": 3}"#,
        &[],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let degs: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('n'))
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(degs, vec!["1", "2", "4", "8"]);
}

#[test]
fn malformed_polynomial_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "degrees",
        dir.path(),
        r#"{"map": {"kind": "homogeneous", "n": 1, "coords": ["x0^2", "x1^^2"]}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("coordinate 1"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn malformed_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("degrees", dir.path(), "{not json", &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_map_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("degrees", dir.path(), r#"{"horizon": 4}"#, &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn term_cap_exit_is_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "degrees",
        dir.path(),
        r#"{"map": {"kind": "homogeneous", "n": 2,
            "coords": ["x0^2 + x1*x2", "x1^2 + x0*x2", "x2^2 + x0*x1"]},
            "horizon": 12, "term_cap": 50}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    // the prefix is still written, with a truncation comment
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("truncated"));
    assert!(text.lines().any(|l| l.starts_with("1,2,")));
}

#[test]
fn env_var_overrides_term_cap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    std::fs::write(
        &path,
        r#"{"map": {"kind": "homogeneous", "n": 2,
            "coords": ["x0^2 + x1*x2", "x1^2 + x0*x2", "x2^2 + x0*x1"]},
            "horizon": 6, "term_cap": 50}"#,
    )
    .unwrap();
    // a generous env cap overrides the tiny config cap
    let out = Command::new(env!("CARGO_BIN_EXE_orbitlab"))
        .args(["degrees", "--config"])
        .arg(&path)
        .env("ORBITLAB_TERM_CAP", "200000")
        .output()
        .unwrap();
    assert!(out.status.success(), "{:?}", out);
}

#[test]
fn dyndeg_unsupported_index_for_homogeneous() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "dyndeg",
        dir.path(),
        r#"{"map": {"kind": "homogeneous", "n": 2,
            "coords": ["x1*x2", "x0*x2", "x0*x1"]}, "index": 2}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unsupported"), "{err}");
}

#[test]
fn dyndeg_identity_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "dyndeg",
        dir.path(),
        r#"{"map": {"kind": "monomial", "matrix": [[1,0],[0,1]]}}"#,
        &[],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for i in 0..=2 {
        assert!(
            text.lines()
                .any(|l| l.starts_with(&format!("{i},1.00000000000e0,1.00000000000e0"))),
            "{text}"
        );
    }
}

#[test]
fn alpha_periodic_orbit_reports_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "alpha",
        dir.path(),
        r#"{"map": {"kind": "homogeneous", "n": 2,
            "coords": ["x1*x2", "x0*x2", "x0*x1"]},
            "horizon": 30, "seed_point": [1, 2, 3]}"#,
        &[],
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text
        .lines()
        .find(|l| l.starts_with("1.00000000000e0"))
        .unwrap_or_else(|| panic!("{text}"));
    assert!(row.contains("periodic(2, 0)"), "{row}");
}

#[test]
fn verify_passes_on_small_batch() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "verify",
        dir.path(),
        r#"{"matrices": {"count": 20, "dim": 3, "entry_bound": 2},
            "m_max": 3, "tol": 1e-9, "rng_seed": 99}"#,
        &[],
    );
    assert!(out.status.success(), "{:?}", out);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["law_matrices"], 20);
    assert_eq!(json["law_violations"].as_array().unwrap().len(), 0);
}

#[test]
fn zdo_non_birational_reports_not_applicable() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "zdo",
        dir.path(),
        r#"{"map": {"kind": "monomial", "matrix": [[2,0],[0,2]]}}"#,
        &[],
    );
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["verdict"], "criterion-not-applicable");
    assert_eq!(json["birational"], false);
}

#[test]
fn seed_flag_overrides_config_seed() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"map": {"kind": "monomial", "matrix": [[1,1],[1,0]]},
        "horizon": 40, "sampler": {"count": 4, "coord_bound": 7},
        "rng_seed": 1}"#;
    let with_cfg_seed = run_with_config("search", dir.path(), config, &[]);
    let with_flag = run_with_config("search", dir.path(), config, &["--seed", "2"]);
    assert!(with_cfg_seed.status.success() && with_flag.status.success());
    let a = String::from_utf8(with_cfg_seed.stdout).unwrap();
    let b = String::from_utf8(with_flag.stdout).unwrap();
    assert!(a.contains("# rng_seed: 1"));
    assert!(b.contains("# rng_seed: 2"));
    assert_ne!(a, b);
}

#[test]
fn interpolate_detects_linear_obstruction() {
    // orbit of the coordinate swap stays on the hyperplane x0 + x1 = const
    // pencil? no: the swap orbit {[1:2:0], [2:1:0]} lies on x2 = 0
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "interpolate",
        dir.path(),
        r#"{"map": {"kind": "homogeneous", "n": 2,
            "coords": ["x1", "x0", "x2"]},
            "horizon": 10, "d_max": 1, "seed_point": [1, 2, 0]}"#,
        &[],
    );
    assert!(out.status.success(), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    // 2 distinct points on a line: kernel contains x2, dim >= 1
    let row = text.lines().find(|l| l.starts_with("1,")).unwrap();
    let kernel: usize = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!(kernel >= 1, "{row}");
}
