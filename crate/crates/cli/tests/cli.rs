use std::path::Path;
use std::process::{Command, Output};

use kahler_lab::geodesic::GeodesicSheet;
use serde_json::Value;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kahler-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn geodesic_translate_has_unit_f_slope() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["geodesic", "--u0", "fs", "--u1", "fs-shift:1"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = json(&dir.path().join("report.json"));
    assert!((f(&r["traces"]["F"]["least_squares_slope"]) + 1.0).abs() < 1e-3);
    assert_eq!(r["config"]["u1"], "fs-shift:1");
    assert!(r["version"].as_str().unwrap().starts_with("kahler-lab "));
    let csv = std::fs::read_to_string(dir.path().join("traces.csv")).unwrap();
    assert!(csv.starts_with("# kahler-lab "));
    assert!(csv.contains("t,value,label\n"));
}

#[test]
fn geodesic_between_equal_endpoints_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["geodesic", "--u1", "fs", "--grid-points", "257"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("sheet.txt")).unwrap();
    let sheet = GeodesicSheet::from_text(&text).unwrap();
    for i in 1..sheet.n_t() {
        let d = sheet
            .row(i)
            .iter()
            .zip(sheet.row(0))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(d < 1e-12, "row {i} differs by {d}");
    }
}

#[test]
fn nonconvex_endpoint_gives_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "sgrid -14 14 5 0 2\n0\n1\n0\n3\n4\n").unwrap();
    let o = run(&["geodesic", "--u1", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let d: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(d["kind"], "invariant");
    assert_eq!(d["invariant"]["name"], "discrete convexity");
    assert_eq!(json(&dir.path().join("diagnostic.json")), d);
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["geodesic", "--bogus", "1"], dir.path()).status.code(),
        Some(2)
    );
    let cfg = dir.path().join("c.txt");
    std::fs::write(&cfg, "# comment\nnope = 1\n").unwrap();
    let o = run(&["geodesic", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.txt");
    std::fs::write(&cfg, "grid-points = 257\nt-points = 9\n").unwrap();
    let o = run(
        &[
            "geodesic",
            "--config",
            cfg.to_str().unwrap(),
            "--t-points",
            "17",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let r = json(&dir.path().join("report.json"));
    assert_eq!(r["config"]["grid-points"], "257");
    assert_eq!(r["config"]["t-points"], "17");
    assert_eq!(r["config"]["s-min"], "-14");
}

#[test]
fn ke_untwisted_and_cone() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["ke"], dir.path()).status.code(), Some(0));
    let r = json(&dir.path().join("report.json"));
    assert!((f(&r["a"]) - 2.0).abs() < 1e-6);
    assert!(f(&r["residual_sup"]) <= 1e-8);

    let cone = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["ke", "--twist", "cone:0.5,0.5"], cone.path())
            .status
            .code(),
        Some(0)
    );
    let r = json(&cone.path().join("report.json"));
    assert!((f(&r["a"]) - 0.5).abs() < 1e-6);
    assert!(f(&r["closed_form"]["sup_error"]) < 1e-6);
}

#[test]
fn ke_rejects_tiny_grid() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["ke", "--grid-points", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let d: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(d["kind"], "invalid-grid");
}

#[test]
fn bm_verify_translate_identity_and_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["bm-verify"], dir.path()).status.code(), Some(0));
    let r = json(&dir.path().join("flow.json"));
    assert!((f(&r["flow"]["h"]) - 1.0).abs() < 1e-3);

    let same = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["bm-verify", "--sol1", "fs"], same.path())
            .status
            .code(),
        Some(0)
    );
    assert!(f(&json(&same.path().join("flow.json"))["flow"]["h"]).abs() < 1e-9);

    let bad = tempfile::tempdir().unwrap();
    let o = run(&["bm-verify", "--sol1", "perturbed:0.1"], bad.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn ke_solution_file_feeds_bm_verify() {
    let dir = tempfile::tempdir().unwrap();
    let ke_dir = dir.path().join("ke");
    let o = run(
        &[
            "ke",
            "--s-min",
            "-14",
            "--s-max",
            "14",
            "--grid-points",
            "1025",
            "--residual-tol",
            "1e-3",
        ],
        &ke_dir,
    );
    assert_eq!(o.status.code(), Some(0));
    let sol = ke_dir.join("solution.txt");
    let bm = dir.path().join("bm");
    let o = run(
        &[
            "bm-verify",
            "--sol0",
            sol.to_str().unwrap(),
            "--sol1",
            "fs-shift:0.5",
        ],
        &bm,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!((f(&json(&bm.join("flow.json"))["flow"]["h"]) - 0.5).abs() < 1e-3);
}

#[test]
fn kernel_sweep_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["kernel-check"], dir.path()).status.code(), Some(0));
    let r = json(&dir.path().join("kernel.json"));
    let cs: Vec<f64> = r["sweeps"][0]["c_delta"]
        .as_array()
        .unwrap()
        .iter()
        .map(f)
        .collect();
    assert_eq!(cs.len(), 5);
    assert!(cs.windows(2).all(|w| w[1] < w[0]));
    let o = run(&["kernel-check", "--quad-n", "8"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn prekopa_table() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["prekopa"], dir.path()).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("prekopa.csv")).unwrap();
    let row = csv
        .lines()
        .find(|l| l.starts_with("separable-quadratic,"))
        .unwrap();
    assert!(row.contains(",StrictlyConvex,"), "{row}");
    let neg = csv
        .lines()
        .find(|l| l.starts_with("stretched-gaussian,"))
        .unwrap();
    assert!(neg.starts_with("stretched-gaussian,false,"), "{neg}");
}

#[test]
fn bm_slices_sheared_cube_and_failed_expectation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bm-slices", "--families", "sheared-cube"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = json(&dir.path().join("bm_slices.json"));
    let cube = &r["families"]["sheared-cube"];
    assert_eq!(cube["verdict"]["kind"], "Affine");
    let v: Vec<f64> = cube["translation"]["v"]
        .as_array()
        .unwrap()
        .iter()
        .map(f)
        .collect();
    for (a, b) in v.iter().zip([0.3, -0.2, 0.5]) {
        assert!((a - b).abs() < 1e-10);
    }

    let file = dir.path().join("dented.txt");
    std::fs::write(
        &file,
        "body 0\n0 0\n1 0\n1 1\n0 1\nbody 1\n0 0\n0.5 0\n0.5 0.5\n0 0.5\nbody 2\n0 0\n1 0\n1 1\n0 1\n",
    )
    .unwrap();
    let spec = format!("file:{}", file.display());
    let o = run(&["bm-slices", "--families", &spec], dir.path());
    assert_eq!(o.status.code(), Some(3));
}
