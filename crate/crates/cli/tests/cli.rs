use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hodgecalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodgecalc")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn demos_match_their_expectations() {
    for name in ["p1", "p1xp1", "elliptic", "j3"] {
        let o = hodgecalc(&["demo", name]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stdout));
    }
    let o = hodgecalc(&["demo", "j3"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("fail (expected fail)"), "{text}");
}

#[test]
fn demo_list_names_the_corpus() {
    let o = hodgecalc(&["demo", "list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "p1\np1xp1\nelliptic\nj3\n");
}

#[test]
fn unknown_demo_is_an_input_error() {
    let o = hodgecalc(&["demo", "k3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("p1xp1"));
}

#[test]
fn verify_reports_mismatch_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.fixture", r#"{"format_version": 1, "checks": [{"op": "epsilon_cocycle", "args": {"bound": 4}, "expect": "pass"}]}"#);
    let bad = write(dir.path(), "bad.fixture", r#"{"format_version": 1, "checks": [{"op": "godement_defect", "args": {"bound": 2}, "expect": "fail"}]}"#);
    assert_eq!(code(&hodgecalc(&["verify", &good])), 0);
    let o = hodgecalc(&["--json", "verify", &good, &bad]);
    assert_eq!(code(&o), 1);
    let reports = stdout_json(&o);
    assert_eq!(reports[0]["outcomes"][0]["matched"], Value::Bool(true));
    assert_eq!(reports[1]["outcomes"][0]["matched"], Value::Bool(false));
}

#[test]
fn empty_check_list_passes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "empty.fixture", r#"{"format_version": 1}"#);
    assert_eq!(code(&hodgecalc(&["verify", &f])), 0);
}

#[test]
fn malformed_and_unresolved_files_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.fixture", "{\n  \"format_version\": 1,\n  \"checks\": [\n");
    let o = hodgecalc(&["verify", &broken]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let dangling = write(
        dir.path(),
        "dangling.fixture",
        r#"{"format_version": 1, "checks": [{"op": "check_pure", "args": {"structure": "missing"}, "expect": "pass"}]}"#,
    );
    let o = hodgecalc(&["verify", &dangling]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing"));

    let unknown_op = write(dir.path(), "op.fixture", r#"{"format_version": 1, "checks": [{"op": "frobnicate", "expect": "pass"}]}"#);
    assert_eq!(code(&hodgecalc(&["verify", &unknown_op])), 2);
    assert_eq!(code(&hodgecalc(&["verify", "/nonexistent/x.fixture"])), 2);
}

#[test]
fn weightfil_of_j3() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "j3.json", r#"[["0","0","0"],["1","0","0"],["0","1","0"]]"#);
    let o = hodgecalc(&["--json", "weightfil", &m, "--center", "0"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["graded_dims"], serde_json::json!({"-2": 1, "0": 1, "2": 1}));
    assert_eq!(v["oracle_agrees"], Value::Bool(true));

    let o = hodgecalc(&["weightfil", &m, "--center", "-3"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("-5:1 -3:1 -1:1"));

    let not_nilpotent = write(dir.path(), "id.json", r#"[["1","0"],["0","1"]]"#);
    assert_eq!(code(&hodgecalc(&["weightfil", &not_nilpotent, "--center", "0"])), 2);
}

fn cone_from_demo(name: &str) -> String {
    let text = include_str!("../../core/fixtures/p1xp1.fixture");
    let v: Value = serde_json::from_str(text).unwrap();
    serde_json::to_string(&v["structures"][name]).unwrap()
}

#[test]
fn reduce_jordan_tensor_cone() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "cone.json", &cone_from_demo("C"));
    for h in ["-1", "1"] {
        let o = hodgecalc(&["--json", "reduce", &c, "--h", h, "--seed", "3", "--samples", "2"]);
        assert_eq!(code(&o), 0, "h = {h}: {}", String::from_utf8_lossy(&o.stderr));
        let v = stdout_json(&o);
        assert_eq!(v["alarm"], Value::Bool(false));
        assert_eq!(v["structure"]["dim"], 2);
    }
    // the reduced cone is itself a valid input
    let o = hodgecalc(&["--json", "reduce", &c, "--h", "1"]);
    let reduced = write(dir.path(), "reduced.json", &serde_json::to_string(&stdout_json(&o)["structure"]).unwrap());
    assert_eq!(code(&hodgecalc(&["reduce", &reduced, "--h", "1"])), 0);

    let neg = write(dir.path(), "neg.json", &cone_from_demo("C_neg"));
    assert_eq!(code(&hodgecalc(&["reduce", &neg, "--h", "1"])), 2);
}

#[test]
fn signs_table() {
    let o = hodgecalc(&["--json", "signs", "--box", "3"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["godement"].as_array().unwrap().len(), 256);
    assert_eq!(v["godement_matches_il_sign"], Value::Bool(true));
    assert_eq!(v["cocycle"]["violations"].as_array().unwrap().len(), 0);
    let o = hodgecalc(&["signs", "--box", "2"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("81 tuple(s), 0 differ"));
}
