use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn semicurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semicurv"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_builtins() {
    for sel in [
        ["--algebra", "so3"],
        ["--semidirect", "euclidean"],
        ["--algebra", "torus:vol"],
    ] {
        let o = semicurv(&["validate", sel[0], sel[1]]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o), "pass\n");
    }
}

#[test]
fn validate_rejects_a_non_jacobi_spec() {
    let dir = tempfile::tempdir().unwrap();
    // [e1,e2] = e3 with [e2,e3] = e3 and nothing else breaks Jacobi
    let spec = write(
        dir.path(),
        "bad.toml",
        "dim = 3\nstructure = [[1, 2, 3, 1.0], [2, 3, 3, 1.0], [1, 3, 1, 1.0]]\n",
    );
    let o = semicurv(&["validate", "--spec", &spec]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("fail jacobi"), "{}", stderr(&o));
}

#[test]
fn validate_semidirect_spec() {
    let dir = tempfile::tempdir().unwrap();
    let good = "name = \"affine\"\naction = [[1, 1, 1, 1.0]]\n[g]\ndim = 1\n[h]\ndim = 1\n";
    let o = semicurv(&["validate", "--spec", &write(dir.path(), "ok.toml", good)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // so(3) acting on an abelian R² through a non-homomorphism
    let bad = "action = [[1, 1, 2, 1.0], [2, 1, 1, 1.0]]\n\
               [g]\ndim = 3\nstructure = [[1, 2, 3, 1], [2, 3, 1, 1], [3, 1, 2, 1]]\n[h]\ndim = 2\n";
    let o = semicurv(&["validate", "--spec", &write(dir.path(), "bad.toml", bad)]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("fail homomorphism"), "{}", stderr(&o));
    // `action` placed under [h] belongs to that table and is rejected
    let misplaced = "[g]\ndim = 1\n[h]\ndim = 1\naction = [[1, 1, 1, 1.0]]\n";
    let o = semicurv(&["validate", "--spec", &write(dir.path(), "m.toml", misplaced)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn degenerate_plane_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let planes = write(
        dir.path(),
        "p.toml",
        "[[plane]]\nx = { g = [1, 0, 0], h = [0, 1, 0] }\ny = { g = [2, 0, 0], h = [0, 2, 0] }\n",
    );
    let o = semicurv(&["curvature", "--semidirect", "magnetic:so3", "--plane-file", &planes]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("degenerate plane"), "{}", stderr(&o));
}

#[test]
fn curvature_known_values() {
    let dir = tempfile::tempdir().unwrap();
    let planes = write(dir.path(), "p.toml", "[[plane]]\nx = [1, 0, 0]\ny = [0, 1, 0]\n");
    let o = semicurv(&["curvature", "--algebra", "so3", "--plane-file", &planes]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("plane_id,numerator,denominator,sectional,sign,"));
    assert!(lines.next().unwrap().starts_with("0,0.25,1.0,0.25,+,"));

    let planes = write(
        dir.path(),
        "q.toml",
        "[[plane]]\nx = { g = [1, 0, 0], h = [1, 0, 0] }\ny = [0, 1, 0, 0, 1, 0]\n",
    );
    let o = semicurv(&[
        "curvature",
        "--semidirect",
        "conjugation:so3",
        "--plane-file",
        &planes,
        "--format",
        "jsonl",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert!((v["numerator"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["sign"], "+");
}

#[test]
fn curvature_on_torus_fields() {
    let dir = tempfile::tempdir().unwrap();
    // x = (sin y, 0), y = (0, cos x): both divergence free
    let planes = write(
        dir.path(),
        "p.toml",
        "[[plane]]\nx = [[\"sin\", 0, 1, 1.0, 1]]\ny = [[\"cos\", 1, 0, 1.0, 2]]\n",
    );
    for formula in ["generic", "oracle", "arnold"] {
        let o = semicurv(&[
            "curvature",
            "--algebra",
            "torus:vol",
            "--plane-file",
            &planes,
            "--formula",
            formula,
        ]);
        assert_eq!(o.status.code(), Some(0), "{formula}: {}", stderr(&o));
    }
    let bad = write(
        dir.path(),
        "b.toml",
        "[[plane]]\nx = [[\"sin\", 1, 0, 1.0, 1]]\ny = [[\"cos\", 1, 0, 1.0, 2]]\n",
    );
    let o = semicurv(&["curvature", "--algebra", "torus:vol", "--plane-file", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("divergence"), "{}", stderr(&o));
}

#[test]
fn passive_scalar_planes_with_functions_are_all_flat() {
    let o = semicurv(&[
        "scan",
        "--semidirect",
        "torus:passive-scalar",
        "--seed",
        "3",
        "--count",
        "30",
        "--kind",
        "contains-h",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().all(|r| r.split(',').nth(4) == Some("0")));
    assert!(stderr(&o).contains("negative 0 zero 30 positive 0"));
}

#[test]
fn scan_reports_and_counts() {
    let o = semicurv(&["scan", "--algebra", "so3:1,2,3", "--seed", "7", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "plane_id,numerator,denominator,sectional,sign\n");

    let o = semicurv(&[
        "scan",
        "--semidirect",
        "conjugation:so3",
        "--seed",
        "7",
        "--count",
        "25",
        "--format",
        "jsonl",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 26);
    for (i, l) in lines[..25].iter().enumerate() {
        assert_eq!(l["plane_id"], i);
    }
    let s = &lines[25]["summary"];
    let total = s["negative"].as_u64().unwrap() + s["zero"].as_u64().unwrap() + s["positive"].as_u64().unwrap();
    assert_eq!(total, 25);

    let csv = semicurv(&[
        "scan",
        "--semidirect",
        "conjugation:so3",
        "--seed",
        "7",
        "--count",
        "25",
    ]);
    let csv = stdout(&csv);
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let keys: Vec<&String> = lines[0].as_object().unwrap().keys().collect();
    assert_eq!(header, keys);
}

#[test]
fn config_errors_exit_3() {
    for args in [
        vec!["scan", "--algebra", "so3", "--count", "3"],
        vec!["scan", "--algebra", "so4", "--seed", "1", "--count", "3"],
        vec![
            "scan",
            "--algebra",
            "so3",
            "--semidirect",
            "euclidean",
            "--seed",
            "1",
            "--count",
            "3",
        ],
        vec![
            "scan",
            "--algebra",
            "so3",
            "--seed",
            "1",
            "--count",
            "3",
            "--kind",
            "mixed",
        ],
        vec!["geodesic", "--algebra", "so3", "--steps", "3", "--seed", "1"],
        vec![
            "geodesic",
            "--algebra",
            "so3",
            "--dt",
            "0.1",
            "--steps",
            "3",
            "--u",
            "1,2",
        ],
        vec!["scan", "--algebra", "so3", "--seed", "x"],
        vec!["frobnicate"],
    ] {
        let o = semicurv(&args);
        assert_eq!(o.status.code(), Some(3), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn midpoint_failure_exits_2() {
    let o = semicurv(&[
        "geodesic",
        "--algebra",
        "so3:1,2,3",
        "--dt",
        "1.0",
        "--steps",
        "5",
        "--u",
        "3,-2,5",
        "--scheme",
        "implicit_midpoint",
        "--midpoint-max-iter",
        "2",
        "--midpoint-tol",
        "1e-15",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("did not converge"));
}

#[test]
fn geodesic_output() {
    let o = semicurv(&[
        "geodesic",
        "--semidirect",
        "euclidean",
        "--dt",
        "0.01",
        "--steps",
        "4",
        "--u",
        "1,0,0",
        "--alpha",
        "0,1,0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,u1,u2,u3,alpha1,alpha2,alpha3,energy");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0.0,1.0,0.0,0.0,0.0,1.0,0.0,2.0"));

    let o = semicurv(&[
        "geodesic",
        "--algebra",
        "torus:vol",
        "--dt",
        "0.01",
        "--steps",
        "2",
        "--seed",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "t,u_modes,energy,status");
    assert!(text.lines().skip(1).all(|l| l.ends_with(",experimental")));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "init.toml", "u = [1.0, -0.5, 2.0]\n");
    let cfg = write(
        dir.path(),
        "run.toml",
        "task = \"geodesic\"\n[target]\nalgebra = \"so3:1,2,3\"\n[geodesic]\ndt = 0.1\nsteps = 3\n\
         initial_file = \"init.toml\"\n[output]\npath = \"traj.csv\"\n",
    );
    let o = semicurv(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written = fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    assert_eq!(written.lines().count(), 5);
    assert!(written.lines().nth(1).unwrap().starts_with("0.0,1.0,-0.5,2.0,"));

    let o = semicurv(&[
        "geodesic",
        "--config",
        &cfg,
        "--steps",
        "1",
        "--output",
        dir.path().join("b.csv").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(dir.path().join("b.csv")).unwrap().lines().count(), 3);

    let o = semicurv(&["scan", "--config", &cfg, "--seed", "1", "--count", "2"]);
    assert_eq!(o.status.code(), Some(3));

    let unknown = write(dir.path(), "u.toml", "task = \"scan\"\n[scan]\nsede = 3\n");
    assert_eq!(semicurv(&["run", "--config", &unknown]).status.code(), Some(3));
}

#[test]
fn rerun_and_parallel_scans_are_identical() {
    let base = [
        "scan",
        "--semidirect",
        "conjugation:so3",
        "--seed",
        "7",
        "--count",
        "100",
    ];
    let a = semicurv(&base);
    let b = semicurv(&base);
    let mut par = base.to_vec();
    par.extend(["--jobs", "3"]);
    let c = semicurv(&par);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn shipped_configs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let heisenberg = semicurv(&[
        "run",
        "--config",
        dir.join("curvature_heisenberg.toml").to_str().unwrap(),
    ]);
    assert_eq!(heisenberg.status.code(), Some(0), "{}", stderr(&heisenberg));
    let text = stdout(&heisenberg);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].starts_with("0,-0.75,1.0,-0.75,-,"));
    assert!(rows[1].starts_with("1,0.25,1.0,0.25,+,"));

    for name in ["scan_mhd_mixed.toml", "geodesic_euler_top.toml"] {
        let o = semicurv(&["run", "--config", dir.join(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
    }
    let o = semicurv(&["validate", "--spec", dir.join("affine_line.toml").to_str().unwrap()]);
    assert_eq!(stdout(&o), "pass\n");
}
