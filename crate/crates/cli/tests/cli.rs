use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn alcove(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alcove"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = alcove(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("alcove-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn a2_standard_character() {
    let text = stdout(&["char", "--type", "A2", "--weight", "1,0"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[3], "dimension: 3");
    for w in ["1,0 : 1", "-1,1 : 1", "0,-1 : 1"] {
        assert!(lines.contains(&w), "{text}");
    }
}

#[test]
fn trivial_character() {
    assert_eq!(
        stdout(&["char", "--type", "A1", "--weight", "0"]),
        "0 : 1\ndimension: 1\n"
    );
}

#[test]
fn g2_adjoint_crystal_as_dot() {
    let dot = stdout(&["crystal", "--type", "G2", "--weight", "0,1", "--format", "dot"]);
    assert!(dot.starts_with("digraph"));
    let nodes = dot
        .lines()
        .filter(|l| l.contains("label=") && !l.contains("->"))
        .count();
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    assert_eq!(nodes, 14);
    // root strings of the adjoint representation: 2 + 3 + 3 edges along the
    // short simple root, 1 + 1 + 2 + 1 + 1 along the long one
    assert_eq!(edges, 14, "{dot}");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["crystal", "--type", "B2", "--weight", "1,1", "--format", "json"][..],
        &["char", "--type", "C3", "--weight", "1,0,1"],
        &["lr", "--type", "G2", "--weight", "1,0", "--weight2", "0,1"],
    ] {
        assert_eq!(alcove(args).stdout, alcove(args).stdout);
    }
}

#[test]
fn chain_listing() {
    let text = stdout(&["chain", "--type", "A2", "--weight", "1,0"]);
    assert_eq!(text.lines().count(), 2);
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "chain", "--type", "A2", "--weight", "1,0", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json[1]["root"], serde_json::json!([1, 1]));
    assert_eq!(json[1]["position"], 2);

    // another order of the simple roots breaks the ties differently
    let reversed = stdout(&["chain", "--type", "A2", "--weight", "1,1", "--order", "2,1"]);
    let natural = stdout(&["chain", "--type", "A2", "--weight", "1,1"]);
    assert_ne!(reversed, natural);
    assert_eq!(reversed.lines().count(), natural.lines().count());
}

#[test]
fn tensor_and_branch_dimensions() {
    let lr = stdout(&["lr", "--type", "A2", "--weight", "1,0", "--weight2", "1,0"]);
    assert!(lr.ends_with("dimension: 9\n"));
    assert!(lr.contains("2,0 : 1") && lr.contains("0,1 : 1"));
    let branch = stdout(&["branch", "--type", "A2", "--weight", "1,1", "--levi", "1"]);
    assert!(branch.ends_with("dimension: 8\n"));
    let none = stdout(&["branch", "--type", "A2", "--weight", "1,1", "--levi", ""]);
    assert_eq!(none, stdout(&["char", "--type", "A2", "--weight", "1,1"]));
}

#[test]
fn path_formats() {
    let csv = stdout(&["path", "--type", "A1", "--weight", "1", "--subset", "1"]);
    assert_eq!(csv, "index,w1\n0,0/1\n1,1/2\n2,0/1\n3,1/2\n4,1/1\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "path", "--type", "A1", "--weight", "1", "--subset", "1", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(json["coxeterNumber"], 2);
    assert_eq!(json["subset"], serde_json::json!([1]));
    assert_eq!(json["points"].as_array().unwrap().len(), 5);
}

#[test]
fn audit_passes() {
    let out = alcove(&["audit", "--type", "B2", "--weight", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 10);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
}

#[test]
fn output_file_and_cartan_file() {
    let matrix = scratch("g2.txt");
    fs::write(&matrix, "2 -1\n-3 2\n").unwrap();
    let target = scratch("char.txt");
    let out = alcove(&[
        "char",
        "--cartan",
        matrix.to_str().unwrap(),
        "--weight",
        "1,0",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = fs::read_to_string(&target).unwrap();
    // with this matrix the first simple root is long, so omega_1 is adjoint
    assert!(written.ends_with("dimension: 14\n"), "{written}");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| alcove(args).status.code();
    assert_eq!(code(&["char", "--type", "A2", "--weight", "1,0"]), Some(0));
    // usage problems
    assert_eq!(code(&["char", "--type", "A2", "--weight", "1"]), Some(2));
    assert_eq!(code(&["char", "--type", "A2", "--weight", "-1,0"]), Some(2));
    assert_eq!(code(&["char", "--weight", "1,0"]), Some(2));
    assert_eq!(code(&["char", "--type", "Z2", "--weight", "1,0"]), Some(2));
    assert_eq!(
        code(&["char", "--type", "A2", "--weight", "1,0", "--order", "2,2"]),
        Some(2)
    );
    assert_eq!(
        code(&["path", "--type", "A2", "--weight", "1,0", "--subset", "2"]),
        Some(2)
    );
    assert_eq!(
        code(&["path", "--type", "A2", "--weight", "1,0", "--subset", "9"]),
        Some(2)
    );
    assert_eq!(
        code(&["crystal", "--type", "A1", "--weight", "1", "--format", "csv"]),
        Some(2)
    );
    // size cap
    assert_eq!(
        code(&["crystal", "--type", "G2", "--weight", "1,1", "--cap", "5"]),
        Some(3)
    );
    // unwritable output
    assert_eq!(
        code(&[
            "char",
            "--type",
            "A1",
            "--weight",
            "1",
            "--output",
            "/nonexistent/dir/out.txt"
        ]),
        Some(4)
    );
    let err = alcove(&["char", "--type", "A2", "--weight", "1"]);
    assert!(!String::from_utf8(err.stderr).unwrap().is_empty());
}
