use std::path::{Path, PathBuf};
use std::process::Command;

use gspline::{LabeledGraph, Spline};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gspline"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn missing_file_is_input_error() {
    let r = run(&["basis", "missing.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("missing.json"));
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "bad.json",
        r#"{"ring": "Q[x]", "vertices": 2, "edges": [{"u": 1, "v": 2, "label": "x+*2"}]}"#,
    );
    let r = run(&["basis", &g]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("edge 1"), "{}", r.stderr);
    assert!(r.stderr.contains("column 3"), "{}", r.stderr);
    let schema = write(dir.path(), "schema.json", r#"{"ring": "Z", "edges": []}"#);
    assert_eq!(run(&["basis", &schema]).code, 2);
    let ring = write(
        dir.path(),
        "ring.json",
        r#"{"ring": "GF(6)[x]", "vertices": 1, "edges": []}"#,
    );
    assert_eq!(run(&["basis", &ring]).code, 2);
}

#[test]
fn bad_flags_and_help() {
    assert_eq!(run(&["flowup", &data("c4.json")]).code, 2);
    assert_eq!(run(&["basis", &data("c4.json"), "--format", "xml"]).code, 2);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("selftest"));
}

#[test]
fn domain_errors_exit_one() {
    let r = run(&["cycle", &data("poly7.json"), "--index", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("not a cycle"));
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "zero.json",
        r#"{"ring": "Z", "vertices": 3, "edges": [{"u": 1, "v": 3, "label": "0"}, {"u": 2, "v": 3, "label": "4"}]}"#,
    );
    let r = run(&["flowup", &g, "--index", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("no flow-up class"));
    assert_eq!(run(&["flowup", &data("c4.json"), "--index", "9"]).code, 1);
}

#[test]
fn flowup_json_round_trips() {
    let r = run(&[
        "flowup",
        &data("poly7.json"),
        "--index",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, 0);
    let g = LabeledGraph::from_json(&std::fs::read_to_string(data("poly7.json")).unwrap()).unwrap();
    let f = Spline::from_json(g.ring(), &r.stdout).unwrap();
    assert!(g.is_spline(&f).unwrap());
    assert_eq!(f.leading_index(), Some(3));
}

#[test]
fn human_flowup_renders_bottom_to_top() {
    let r = run(&["flowup", &data("c4.json"), "--index", "2"]);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "F^(2)");
    assert!(lines[1].starts_with("f_4 | 17"));
    assert!(lines[4].starts_with("f_1 | 0"));
    assert_eq!(lines[5], "leading entry: 8");
}

#[test]
fn env_overrides_flags() {
    let r = run_env(&["qelem", &data("c8.json")], &[("GSPLINE_FORMAT", "json")]);
    let doc: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["q_g"], "3628800");
    let r = run_env(
        &["trails", &data("c8.json"), "--vertex", "8"],
        &[("GSPLINE_PATH_LIMIT", "1")],
    );
    assert_eq!(r.code, 1);
}

#[test]
fn trails_listing() {
    let r = run(&["trails", &data("c4.json"), "--vertex", "2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("l: [8] gcd=8 target=1"));
    assert!(r.stdout.contains("l: [9,6,5] gcd=1 target=1"));
}

#[test]
fn cycle_compare_and_decompose() {
    let r = run(&[
        "cycle",
        &data("c8.json"),
        "--index",
        "4",
        "--compare",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["agree"], true);
    assert_eq!(
        doc["comparison"][1]["values"],
        serde_json::json!(["0", "0", "0", "8", "0", "5", "0", "17"])
    );

    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        r#"{"values": ["1", "1", "1", "9", "1", "6", "1", "18"]}"#,
    );
    let r = run(&["decompose", &data("c8.json"), &f, "--format", "json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(
        doc["coefficients"],
        serde_json::json!(["1", "0", "0", "1", "0", "0", "0", "0"])
    );
}

#[test]
fn oracle_and_selftest() {
    let r = run(&[
        "oracle",
        &data("c4.json"),
        "--check",
        "min-leading",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(doc["all_agree"], true);
    assert_eq!(doc["reports"][3]["oracle"], "18");
    let r = run(&["selftest", "--count", "10", "--seed", "5"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(
        r.stdout,
        run(&["selftest", "--count", "10", "--seed", "5"]).stdout
    );
}
