use std::path::Path;
use std::process::{Command, Output};

fn lindblad_pc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lindblad-pc"))
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

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn classify_builtins() {
    let o = lindblad_pc(&["classify", "--builtin", "v3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("functional: yes") && out.contains("integral: yes"));
    assert!(out.contains("M: full (dim 9)"));

    let out = stdout(&lindblad_pc(&["classify", "--builtin", "cascade3"]));
    assert!(out.contains("functional: no") && out.contains("integral: no"));
    assert!(
        out.contains("M: dim 8; admissible states satisfy ρ_33 = 0"),
        "{out}"
    );

    let out = stdout(&lindblad_pc(&["classify", "--builtin", "cascade4"]));
    assert!(
        out.contains("M: dim 15; admissible states satisfy ρ_44 = 0"),
        "{out}"
    );
}

#[test]
fn cascade3_solve_matches_xi() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c3.csv");
    let o = lindblad_pc(&[
        "solve",
        "--builtin",
        "cascade3",
        "--rho0",
        "diag:0,1,0",
        "--t-max",
        "20",
        "--steps",
        "400",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["t", "p_1", "p_2", "p_3", "purity", "entropy"]);
    assert_eq!(rows.len(), 401);
    for pair in rows.windows(2) {
        assert!(pair[1][0] > pair[0][0]);
    }
    for row in &rows {
        let t = row[0];
        let xi = (-(2.0 * t + (2.0 * t).sin()) / 4.0).exp();
        assert!((row[2] - xi).abs() < 1e-10);
        assert!((row[4] - (2.0 * xi * xi - 2.0 * xi + 1.0)).abs() < 1e-10);
    }
}

#[test]
fn cascade3_excited_state_is_rejected() {
    let o = lindblad_pc(&["solve", "--builtin", "cascade3", "--rho0", "diag:0,0,1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("ρ_33 = 1.000000 ≠ 0"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn lambda3_diagonal_state_rows_are_constant() {
    let o = lindblad_pc(&[
        "solve",
        "--builtin",
        "lambda3",
        "--params",
        "f1=sin(t)^2,f2=exp(-t)",
        "--rho0",
        "diag:0.5,0,0.5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines().skip(1);
    let first: Vec<&str> = lines.next().unwrap().split(',').skip(1).collect();
    let mut n = 1;
    for line in lines {
        let cells: Vec<&str> = line.split(',').skip(1).collect();
        assert_eq!(cells, first);
        n += 1;
    }
    assert_eq!(n, 401);
}

#[test]
fn verify_exit_codes() {
    let o = lindblad_pc(&["verify", "--builtin", "v3", "--rho0", "diag:0.5,0,0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = lindblad_pc(&[
        "verify",
        "--builtin",
        "cascade4",
        "--rho0",
        "diag:0,0.333333,0.666667,0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = lindblad_pc(&[
        "verify",
        "--builtin",
        "cascade3",
        "--rho0",
        "diag:0,0,1",
        "--force",
    ]);
    assert_eq!(o.status.code(), Some(5));
    let out = stdout(&o);
    let distance: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("max trace distance: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(distance > 1e-3);
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(
        lindblad_pc(&["solve", "--builtin", "v3", "--rho0", "diag:x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lindblad_pc(&["classify", "--builtin", "lambda3", "--params", "f1=sin(t"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dimension": 2}"#).unwrap();
    let o = lindblad_pc(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid model file"));
}

#[test]
fn emitted_models_classify_identically() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["v3", "cascade3", "lambda3", "cascade4"] {
        let path = dir.path().join(format!("{name}.json"));
        let a = lindblad_pc(&[
            "classify",
            "--builtin",
            name,
            "--json",
            "--emit-model",
            path.to_str().unwrap(),
        ]);
        assert_eq!(a.status.code(), Some(0));
        let b = lindblad_pc(&["classify", path.to_str().unwrap(), "--json"]);
        assert_eq!(b.status.code(), Some(0), "{}", stderr(&b));
        assert_eq!(stdout(&a), stdout(&b), "{name}");
    }
}

#[test]
fn model_file_initial_state_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    std::fs::write(
        &path,
        r#"{
            "dimension": 3,
            "hamiltonian": {"diagonal": [-1, 0, 1]},
            "jumps": [
                {"from": 3, "to": 2, "rate": "sin(w*t)^2"},
                {"from": 2, "to": 1, "rate": "cos(w*t)^2"}
            ],
            "params": {"w": 2},
            "initial_state": {"diagonal": [0, 1, 0]}
        }"#,
    )
    .unwrap();
    let o = lindblad_pc(&[
        "solve",
        path.to_str().unwrap(),
        "--steps",
        "40",
        "--t-max",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let last: Vec<f64> = out
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    let (t, w) = (4.0f64, 2.0f64);
    let xi = (-(2.0 * w * t + (2.0 * w * t).sin()) / (4.0 * w)).exp();
    assert!((last[2] - xi).abs() < 1e-10);
}
