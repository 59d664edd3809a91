use std::path::PathBuf;
use std::process::{Command, Output};

const CASE1: &str = "* 1 1 0 -1 / 2 * 1 1 0 / 1 2 * 1 0 / 2 1 1 * 1 / 2 2 2 1 *";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasicone")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn case1_rows(dir: &tempfile::TempDir) -> PathBuf {
    write(dir, "case1.txt", &(CASE1.replace(" / ", "\n") + "\n"))
}

#[test]
fn defect_of_case1() {
    let dir = tempfile::tempdir().unwrap();
    let p = case1_rows(&dir);
    let o = run(&["defect", "--matrix", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "2");
    let o = run(&["--format", "structured", "defect", "--matrix", p.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["defect"], 2);
}

#[test]
fn normalize_keeps_the_file_format() {
    let dir = tempfile::tempdir().unwrap();
    let rows = case1_rows(&dir);
    let o = run(&["normalize", "--matrix", rows.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    // case 1 is already canonical
    assert_eq!(stdout(&o).as_bytes(), std::fs::read(&rows).unwrap().as_slice());
    let again = write(&dir, "again.txt", &stdout(&o));
    assert_eq!(stdout(&run(&["normalize", "--matrix", again.to_str().unwrap()])), stdout(&o));

    let json_in = quasicone_core::QuasiconeMatrix::parse_rows(CASE1).unwrap().to_json();
    let jp = write(&dir, "case1.json", &json_in);
    let o = run(&["normalize", "--matrix", jp.to_str().unwrap()]);
    assert_eq!(stdout(&o), json_in + "\n");
}

#[test]
fn apply_replays_case1() {
    let dir = tempfile::tempdir().unwrap();
    let p = case1_rows(&dir);
    let o = run(&["--format", "structured", "apply", "--matrix", p.to_str().unwrap(), "--strategy", "-1, +3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["defect_before"], 2);
    assert_eq!(v["defect"], 0);
    assert_eq!(v["succeeded"], true);
}

#[test]
fn engine_errors_name_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let p = case1_rows(&dir);
    // +1, +2, +1 has a root repeated in a non-adjacent position
    let o = run(&["apply", "--matrix", p.to_str().unwrap(), "--strategy", "+1, +2, +1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stderr(&o).contains("step 2:"), "{}", stderr(&o));
}

#[test]
fn usage_errors_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let p = case1_rows(&dir);
    let p = p.to_str().unwrap();
    let cases: [(&[&str], &str); 5] = [
        (&["apply", "--matrix", p, "--strategy", "+x"], "--strategy"),
        (&["apply", "--matrix", p, "--strategy", "+1", "--start-weight", "q"], "--start-weight"),
        (&["search", "--rank", "2", "--tiers", "nope"], "--tiers"),
        (&["enumerate", "--rank", "9"], "--rank"),
        (&["defect", "--matrix", "/nonexistent/m.txt"], "--matrix"),
    ];
    for (args, flag) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn verify_manual_lists_every_case_per_model() {
    let o = run(&["verify-paper", "--case", "manual"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let models = text.lines().filter(|l| l.starts_with("model ")).count();
    let cases = text.lines().filter(|l| l.trim_start().starts_with("case ")).count();
    assert_eq!(models, 3);
    assert_eq!(cases, 8 * models);
    assert!(text.contains("case 1: PASS"));
}

#[test]
fn search_report_round_trips_into_enumerate_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["search", "--rank", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let e = run(&["--format", "structured", "enumerate", "--rank", "2"]);
    let list: serde_json::Value = serde_json::from_str(&stdout(&e)).unwrap();
    assert_eq!(report["total_considered"], list["count"]);
    assert_eq!(report["residual"].as_array().unwrap().len(), 0);
}
