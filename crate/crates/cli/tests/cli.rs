use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn thicket(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thicket"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write_generated(dir: &Path, file: &str, args: &[&str]) -> String {
    let path = dir.join(file);
    let path_text = path.to_str().unwrap().to_string();
    let mut all = vec!["generate"];
    all.extend(args);
    all.extend(["--out", &path_text]);
    let out = thicket(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path_text
}

#[test]
fn params_on_named_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_generated(dir.path(), "grid3.txt", &["graph", "grid", "3"]);
    let v = stdout_json(&thicket(&["params", &grid]));
    assert_eq!(
        (v["tau"].as_u64(), v["nu"].as_u64(), v["omega"].as_u64()),
        (Some(3), Some(3), Some(3))
    );

    let clique = write_generated(dir.path(), "k5.txt", &["graph", "clique", "5"]);
    let v = stdout_json(&thicket(&["params", &clique]));
    assert_eq!(
        (v["tau"].as_u64(), v["nu"].as_u64(), v["omega"].as_u64()),
        (Some(3), Some(3), Some(4))
    );

    let star = write_generated(dir.path(), "star6.txt", &["graph", "star", "6"]);
    let v = stdout_json(&thicket(&["params", &star]));
    assert_eq!((v["tau"].as_u64(), v["d"].as_u64()), (Some(1), Some(6)));

    assert_eq!(code(&thicket(&["params", &grid, "--assert-tau", "3"])), 0);
    assert_eq!(code(&thicket(&["params", &grid, "--assert-tau", "2"])), 1);
}

#[test]
fn emitted_certificates_verify() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_generated(dir.path(), "grid3.txt", &["graph", "grid", "3"]);
    let v = stdout_json(&thicket(&["params", &grid]));
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 2);
    for (i, cert) in certs.iter().enumerate() {
        let path = dir.path().join(format!("cert{i}.json"));
        fs::write(&path, cert.to_string()).unwrap();
        let out = thicket(&["verify-cert", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout_json(&out)["valid"], Value::Bool(true));
    }

    // A vine on K_4 whose tree link is missing an edge condition.
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"kind":"vine","graph":{"inline":"4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3"},"decomposition":{"labels":[[0],[1],[2],[3]],"links":[[0,1],[1,2],[2,3]]}}"#,
    )
    .unwrap();
    let out = thicket(&["verify-cert", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["valid"], Value::Bool(false));

    let graph_file = dir.path().join("p.txt");
    fs::write(&graph_file, "3 2\n0 1\n1 2\n").unwrap();
    let by_file = dir.path().join("by_file.json");
    fs::write(
        &by_file,
        r#"{"kind":"thicket","graph":{"file":"p.txt"},"thicket":{"sets":[[1]]}}"#,
    )
    .unwrap();
    assert_eq!(
        code(&thicket(&["verify-cert", by_file.to_str().unwrap()])),
        0
    );
}

#[test]
fn gaps_reports() {
    let dir = tempfile::tempdir().unwrap();
    let r3 = write_generated(dir.path(), "r3.json", &["game", "thicket", "grid", "3"]);
    let v = stdout_json(&thicket(&["gaps", &r3]));
    assert_eq!(v["ratio_pc"], "3/1");

    let half = write_generated(dir.path(), "half4.json", &["game", "clique-half", "4"]);
    let v = stdout_json(&thicket(&["gaps", &half]));
    assert_eq!(v["gap_primal"], "3/2");
    assert_eq!(v["kappa_f"], v["rho_f"]);

    assert_eq!(code(&thicket(&["gaps", &half, "--assert-tau", "2"])), 0);
    // κ/ρ = 3/2 exceeds a claimed τ of 1.
    assert_eq!(code(&thicket(&["gaps", &half, "--assert-tau", "1"])), 1);

    let csv = thicket(&["gaps", &half, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("field,value\n"));
    assert!(text.contains("gap_primal,3/2\n"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let split = dir.path().join("split.json");
    fs::write(&split, r#"{"graph":{"inline":"3 2\n0 1\n1 2"},"coalitions":[{"members":[0,2],"value":1}],"tag":""}"#).unwrap();
    let out = thicket(&["gaps", split.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("{0,2}"));

    let unknown = dir.path().join("unknown.json");
    fs::write(
        &unknown,
        r#"{"graph":{"inline":"1 0"},"coalitions":[],"colour":"red"}"#,
    )
    .unwrap();
    assert_eq!(code(&thicket(&["gaps", unknown.to_str().unwrap()])), 2);

    let broken = dir.path().join("broken.txt");
    fs::write(&broken, "3 1\n0 7\n").unwrap();
    assert_eq!(code(&thicket(&["params", broken.to_str().unwrap()])), 2);
    assert_eq!(code(&thicket(&["params", "/nonexistent/graph.txt"])), 2);
    assert_eq!(code(&thicket(&["reproduce", "no-such-experiment"])), 2);
    assert_eq!(code(&thicket(&["generate", "graph", "wheel", "5"])), 2);
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write_generated(dir.path(), "grid3.txt", &["graph", "grid", "3"]);
    assert_eq!(code(&thicket(&["params", &grid, "--budget-nodes", "3"])), 3);
    let big = write_generated(dir.path(), "grid4.txt", &["graph", "grid", "4"]);
    assert_eq!(code(&thicket(&["params", &big])), 3);
}

#[test]
fn allocations() {
    let dir = tempfile::tempdir().unwrap();
    let half = write_generated(dir.path(), "half4.json", &["game", "clique-half", "4"]);
    let v = stdout_json(&thicket(&["allocate", &half]));
    assert_eq!(v["method"], "vine");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["holds"] == Value::Bool(true)));

    let vine = dir.path().join("halves.json");
    fs::write(&vine, r#"{"labels":[[0,1],[2,3]],"links":[[0,1]]}"#).unwrap();
    let out = thicket(&["allocate", &half, "--vine", vine.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["width"], 2);

    let bad_vine = dir.path().join("bad.json");
    fs::write(&bad_vine, r#"{"labels":[[0,1]],"links":[]}"#).unwrap();
    assert_eq!(
        code(&thicket(&[
            "allocate",
            &half,
            "--vine",
            bad_vine.to_str().unwrap()
        ])),
        2
    );

    let v = stdout_json(&thicket(&["allocate", &half, "--method", "sqrt"]));
    assert_eq!(v["allocation"]["cost"], "2/1");
}

#[test]
fn reproduce_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = thicket(&[
            "reproduce",
            "dual-grid",
            "--format",
            "csv",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text
        .lines()
        .next()
        .unwrap()
        .starts_with("experiment,instance,"));
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("3/2"));

    let one = thicket(&["reproduce", "trees", "--seed", "7"]);
    let two = thicket(&["reproduce", "trees", "--seed", "7"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["rows"].as_array().unwrap().len(), 100);
    let other = thicket(&["reproduce", "trees", "--seed", "8"]);
    assert_ne!(one.stdout, other.stdout);
}

#[test]
fn reproduce_marks_budget_rows_and_continues() {
    let out = thicket(&["reproduce", "dual-grid", "--budget-nodes", "1"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["status"] == "budget"));
    assert_eq!(code(&out), 3);
}
