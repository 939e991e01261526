use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susygraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn report_json_on_triangle() {
    let path = data("c3.txt");
    let out = run(&["report", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["algebra", "cycles", "grading", "graph", "kernel", "meta", "pairing", "polar", "spectra"]
    );
    assert_eq!(v["kernel"]["dim_ker_d_star"], 1);
    assert_eq!(v["meta"]["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn check_on_single_edge() {
    let path = data("k2.txt");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("  pass\n").count(), 18);
    assert!(text.ends_with("verdict: PASS\n"));
}

#[test]
fn subcommands_pass_on_bundled_graphs() {
    for file in ["c3.txt", "k2.txt", "tree.txt", "sym_c3.txt", "disconnected.txt"] {
        let path = data(file);
        for cmd in ["report", "check", "spectrum", "kernel", "cycles"] {
            let out = run(&[cmd, path.to_str().unwrap(), "--format", "json"]);
            assert_eq!(out.status.code(), Some(0), "{cmd} {file}");
        }
    }
}

#[test]
fn mode_override_symmetrizes() {
    let path = data("c3.txt");
    let out = run(&[
        "cycles",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--mode-override",
        "symmetric",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["graph"]["mode"], "symmetric");
    assert_eq!(v["cycles"]["cycle_count"], 4);
}

#[test]
fn seed_changes_only_self_tests() {
    let path = data("c3.txt");
    let a = stdout(&run(&[
        "report",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--seed",
        "1",
    ]));
    let b = stdout(&run(&[
        "report",
        path.to_str().unwrap(),
        "--format",
        "json",
        "--seed",
        "2",
    ]));
    let (mut a, mut b): (serde_json::Value, serde_json::Value) =
        (serde_json::from_str(&a).unwrap(), serde_json::from_str(&b).unwrap());
    for v in [&mut a, &mut b] {
        let meta = v["meta"].as_object_mut().unwrap();
        meta.remove("seed");
        meta.remove("self_tests");
    }
    assert_eq!(a, b);
}

#[test]
fn impossible_tolerance_fails_with_report() {
    let path = data("c3.txt");
    let out = run(&[
        "spectrum",
        path.to_str().unwrap(),
        "--tol",
        "1e-300",
        "--vector-tol",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).ends_with("verdict: FAIL\n"));
}

#[test]
fn input_errors_exit_two() {
    let out = run(&["report", "missing.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());

    let dir = std::env::temp_dir().join(format!("susygraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, body) in [
        ("dup.txt", "n=2\n0 1\n0 1\n"),
        ("loop.txt", "n=2\n1 1\n"),
        ("word.txt", "n=2\n0 x\n"),
        ("asym.txt", "n=2\nmode=symmetric\n0 1\n"),
    ] {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        let out = run(&["kernel", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(name));
    }
    std::fs::remove_dir_all(&dir).unwrap();

    let path = data("c3.txt");
    assert_eq!(
        run(&["report", path.to_str().unwrap(), "--tol", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["report", path.to_str().unwrap(), "--format", "yaml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
