use std::path::PathBuf;
use std::process::{Command, Output};

fn eap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eap"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn sample(name: &str) -> String {
    format!("tests/sample.eap.json#{name}")
}

#[test]
fn left_merge_traces_are_sorted() {
    let o = eap(&["traces", "(P.Q) |L (R.V)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "PQRV\nPRQV\nPRVQ\n");
}

#[test]
fn traces_read_acp_files_and_processes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.acp");
    std::fs::write(&path, "tau{c}((a+b).c)\n").unwrap();
    let o = eap(&["traces", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "a\nb\n");

    let o = eap(&["traces", &sample("Q")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "R\nS\n");
    assert_eq!(stdout(&eap(&["traces", &sample("P")])), "PQ\n");
}

#[test]
fn measure_reports_both_measures() {
    let o = eap(&["measure", &sample("A")]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("m^par        1\n"), "{out}");
    assert!(out.contains("m_par        1\n"), "{out}");
    assert!(out.contains("k <= 1/3"), "{out}");
}

#[test]
fn acp_laws_pass_for_seed_seven() {
    let o = eap(&["check-laws", "--suite", "acp", "--seed", "7", "--cases", "1000"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn compose_output_parses_back() {
    let o = eap(&["compose", "--op", "seq", "--gap", "1/2", &sample("A"), &sample("B")]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = eap::dsl::parse_document(&stdout(&o)).unwrap();
    let eap::model::Object::Action(r) = doc.lookup("result").unwrap() else {
        panic!("result is an action")
    };
    assert_eq!(r.len(), 5);
}

#[test]
fn strong_composition_reads_a_pairing_file() {
    let dir = tempfile::tempdir().unwrap();
    let p: PathBuf = dir.path().join("pairing.json");
    std::fs::write(
        &p,
        r#"{"pairs": [{"left": "x", "right": "x", "events": [["e0", "e0"]]}]}"#,
    )
    .unwrap();
    let o = eap(&[
        "compose",
        "--op",
        "strong",
        "--level",
        "process",
        "--pairing",
        p.to_str().unwrap(),
        &sample("L"),
        &sample("M"),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"result\""));
}

#[test]
fn dot_draws_incompatibility_dashed() {
    let out = stdout(&eap(&["dot", &sample("B")]));
    assert!(out.starts_with("digraph"));
    assert!(out.contains("[label=\"d@1/2\"]"));
    assert!(out.contains("style=dashed"));
}

#[test]
fn output_is_deterministic() {
    let args = ["compose", "--op", "parallel", &sample("A"), &sample("A")];
    assert_eq!(eap(&args).stdout, eap(&args).stdout);
}

#[test]
fn exit_statuses() {
    assert_eq!(eap(&["traces", "a +"]).status.code(), Some(1));
    assert_eq!(eap(&["measure", "no-reference"]).status.code(), Some(2));
    assert_eq!(eap(&["bogus"]).status.code(), Some(2));
    assert_eq!(eap(&["measure", &sample("missing")]).status.code(), Some(1));
    let o = eap(&["compose", "--op", "strong", &sample("A"), &sample("A")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn capacity_errors_exit_three() {
    let wide: Vec<String> = (0..16).map(|i| format!("a{i}")).collect();
    let expr = wide.join(" || ");
    let o = eap(&["traces", &expr]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn parse_reports_schema_paths() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.eap.json");
    std::fs::write(
        &p,
        r#"{"actions": {"A": {"events": {"e0": {"name": "a", "time": 1}}}}}"#,
    )
    .unwrap();
    let o = eap(&["parse", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("actions.A.events.e0.time"));
    let o = eap(&["parse", "tests/sample.eap.json"]);
    assert!(stdout(&o).starts_with("document ok\n"));
}
