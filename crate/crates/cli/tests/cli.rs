use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn opedit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opedit")).args(args).output().unwrap()
}

fn opedit_with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_opedit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn g(i: u8) -> String {
    fixture(&format!("g{i}.json")).display().to_string()
}

#[test]
fn opacity_report_and_exit_code() {
    let o = opedit(&["verify-opacity", &g(1), &g(2)]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("G1: not opaque, witness `γ α`"), "{text}");
    assert!(text.contains("G1||G2: not opaque, witness `β γ α`"), "{text}");
}

#[test]
fn synthesize_then_step_the_selected_path() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let o = opedit(&["synthesize", &g(1), &g(2), "--max-erasures", "1", "-o", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let input = "event γ ! erz:γ@γ\nevent β ! stop@β\nevent α ! ins:γ@α,erz:α@α\n";
    let o = opedit_with_input(&["step", m.to_str().unwrap()], input);
    assert_eq!(o.status.code(), Some(0));
    let emits: Vec<String> = stdout(&o).lines().filter_map(|l| l.strip_prefix("emit ").map(String::from)).collect();
    assert_eq!(emits, ["ε", "β", "γ"]);
    assert!(stdout(&o).lines().next().unwrap().starts_with("state (("));

    let o = opedit_with_input(&["step", m.to_str().unwrap()], "event α\nevent γ\n");
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("error event `α` is not enabled"), "{text}");
    assert!(text.contains("emit γ"), "{text}");

    let dot = opedit(&["export-dot", m.to_str().unwrap()]);
    assert!(stdout(&dot).contains("// removed states: 22"));
}

#[test]
fn verbose_synthesis_logs_passes() {
    let o = opedit(&["synthesize", &g(1), &g(2), "--max-erasures", "1", "--verbose"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("iteration 1: removed"), "{err}");
    assert!(err.contains("plant states: 71"), "{err}");
}

#[test]
fn check_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = opedit(&["check", "--suite", "lemmas", "--seed", "9", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        (stdout(&o), std::fs::read(path).unwrap())
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a, b);
    assert!(a.0.starts_with("PASS observer-sync 200/200"));
}

#[test]
fn exit_codes() {
    assert_eq!(opedit(&["verify-opacity", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(opedit(&["check", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(opedit(&["transform", &g(1), "--augment-remark2"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let secret = dir.path().join("secret.json");
    std::fs::write(
        &secret,
        r#"{"name":"x","events":[{"name":"a"}],"states":[{"name":"p","initial":true,"secret":true}],"transitions":[]}"#,
    )
    .unwrap();
    let o = opedit(&["synthesize", secret.to_str().unwrap(), "--max-erasures", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("unenforceable"));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"x","events":[],"states":[{"name":"p","initial":true}],"transitions":[["p","y","p"]]}"#,
    )
    .unwrap();
    let o = opedit(&["export-dot", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("unknown event `y`"));
}

#[test]
fn modular_transform_with_augmentation() {
    let plain = stdout(&opedit(&["transform", &g(1), &g(2), "--modular"]));
    let augmented = stdout(&opedit(&["transform", &g(1), &g(2), "--modular", "--augment-remark2"]));
    let count = |s: &str| s.matches("\"ins:β@γ\"").count();
    assert!(count(&augmented) > count(&plain));
}

#[test]
fn abstraction_bundle_and_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let o = opedit(&["abstract", &g(1), "-o", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let abstracted = std::fs::read_to_string(dir.path().join("g1.abstracted.json")).unwrap();
    assert!(abstracted.contains("[q1,q2]"));

    let plant = dir.path().join("plant.json");
    opedit(&["transform", &g(1), &g(2), "--modular", "-o", plant.to_str().unwrap()]);
    let k = stdout(&opedit(&["spec-k", "--max-erasures", "1", "--plant", plant.to_str().unwrap()]));
    for x in ["x1", "x2", "x3"] {
        assert!(k.contains(&format!("\"{x}\"")));
    }
    assert!(!k.contains("\"x4\""));

    let t = stdout(&opedit(&["tpo", &g(1), "--dot"]));
    assert!(t.contains("shape=diamond"));
    assert_eq!(opedit(&["tpo", &g(1), "--prune", "0"]).status.code(), Some(3));
}
