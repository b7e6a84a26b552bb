use std::io::Write;
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_aclattice"));
    c.env_remove("AC_LATTICE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn normalize() {
    assert_eq!(stdout(&["normalize", "--n", "3", "{{2,3},{1}}"]), "{{1},{2,3}}\n");
    assert_eq!(code(&["normalize", "--n", "3", "{{1},{1,2}}"]), 2);
    assert_eq!(stdout(&["normalize", "--n", "3", "--from-family", "{{1},{1,2}}"]), "{{1,2}}\n");
    assert_eq!(stdout(&["normalize", "--n", "2", "{ }"]), "{}\n");
    assert_eq!(stdout(&["normalize", "--n", "2", "{{}}"]), "{{}}\n");
}

#[test]
fn parse_errors_exit_1_with_position() {
    let out = run(&["normalize", "--n", "3", "{{1},{4}}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte"));
    assert_eq!(code(&["normalize", "--n", "3", "{{1}"]), 1);
    assert_eq!(code(&["normalize", "--n", "65", "{}"]), 1);
    assert_eq!(code(&["op", "frobnicate", "--n", "3", "{}"]), 1);
    assert_eq!(code(&["interval", "size", "--n", "3", "--bottom", "{}", "--top", "{}", "--method", "pivot:x"]), 1);
}

#[test]
fn stdin_operand() {
    let mut child = bin()
        .args(["normalize", "--n", "3", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"{{2,3},{1}}\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{{1},{2,3}}\n");
}

#[test]
fn lattice_ops() {
    assert_eq!(stdout(&["op", "meet", "--n", "3", "{{1,2}}", "{{1,3}}"]), "{{1}}\n");
    assert_eq!(stdout(&["op", "join", "--n", "3", "{{1}}", "{{1,2}}"]), "{{1,2}}\n");
    assert_eq!(stdout(&["op", "check", "--n", "3", "{{1}}"]), "{{2,3}}\n");
    assert_eq!(stdout(&["op", "prod", "--n", "3", "{{1}}", "{{2},{3}}"]), "{{1,2},{1,3}}\n");
    assert_eq!(stdout(&["op", "leq", "--n", "3", "{{1}}", "{{1,2}}"]), "true\n");
    assert_eq!(stdout(&["op", "leq", "--n", "3", "{{1,2}}", "{{1}}"]), "false\n");
    let out = run(&["op", "prod", "--n", "3", "{{1}}", "{{1,2}}"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disjoint"));
    assert_eq!(code(&["op", "meet", "--n", "3", "{{1}}"]), 1);
}

const WORKED: [&str; 6] = ["--n", "3", "--bottom", "{{1}}", "--top", "{{1,2,3}}"];

fn interval(action: &str, extra: &[&str]) -> Vec<String> {
    let mut v = vec!["interval".to_string(), action.to_string()];
    v.extend(WORKED.iter().map(|s| s.to_string()));
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn stdout_owned(args: Vec<String>) -> String {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    stdout(&refs)
}

#[test]
fn interval_size_by_every_method() {
    for m in ["brute", "even", "odd", "auto", "pivot:2", "multi:2"] {
        assert_eq!(stdout_owned(interval("size", &["--method", m])), "14\n", "method {m}");
    }
    // α ≰ β: size 0 and success, poset is a precondition error
    let empty = ["--n", "2", "--bottom", "{{1,2}}", "--top", "{{1}}"];
    let mut size = vec!["interval", "size"];
    size.extend(empty);
    assert_eq!(stdout(&size), "0\n");
    let mut poset = vec!["interval", "poset"];
    poset.extend(empty);
    assert_eq!(code(&poset), 2);
}

#[test]
fn interval_poset_and_decompose() {
    assert_eq!(
        stdout_owned(interval("poset", &[])),
        "level 1: {2},{3}\nlevel 2: {1,2},{1,3},{2,3}\nlevel 3: {1,2,3}\n"
    );
    assert_eq!(
        stdout_owned(interval("decompose", &["--chi", "{{1},{2,3}}"])),
        "1:{{2},{3}} 2:{{2,3}} 3:{}\n"
    );
    let args = interval("decompose", &["--chi", "{{2}}"]);
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(code(&refs), 2);
}

#[test]
fn dedekind_methods() {
    assert_eq!(stdout(&["dedekind", "--n", "3", "--method", "brute"]), "20\n");
    assert_eq!(stdout(&["dedekind", "--n", "5", "--method", "levels"]), "7581\n");
    assert_eq!(stdout(&["dedekind", "--n", "6", "--method", "product", "--split", "3,3"]), "7828354\n");
    assert_eq!(stdout(&["dedekind", "--n", "6", "--method", "product"]), "7828354\n");
    assert_eq!(stdout(&["dedekind", "--n", "4", "--method", "pivot:2"]), "168\n");
    assert_eq!(stdout(&["dedekind", "--n", "0"]), "2\n");
    assert_eq!(code(&["dedekind", "--n", "6", "--method", "brute"]), 2);
    assert_eq!(code(&["dedekind", "--n", "6", "--method", "product", "--split", "2,3"]), 1);
}

#[test]
fn partitions_print_blocks() {
    let csv = stdout(&["partition", "product", "--n", "2", "--split", "1,1", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "key,bottom,top,size");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[5], "{{1}}|{{2}},\"{{1},{2}}\",\"{{1,2}}\",2");
    let text = stdout(&["partition", "nondominating", "--n", "1", "--alpha", "{{1}}"]);
    assert!(text.contains("[{}, {{}}]") && text.contains("[{{1}}, {{1}}]"), "{text}");
    assert!(text.contains("complete: true  disjoint: true  checked: exhaustively"), "{text}");
    let text = stdout(&[
        "partition", "interval", "--n", "3", "--bottom", "{{1}}", "--top", "{{1,2,3}}", "--gamma", "{{1},{2,3}}",
    ]);
    assert!(text.contains("total: 14"), "{text}");
}

#[test]
fn verify_suites() {
    let start = Instant::now();
    let all = stdout(&["verify", "--suite", "all", "--n", "2"]);
    assert!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());
    assert!(all.lines().all(|l| l.starts_with("PASS")), "{all}");
    let parts = stdout(&["verify", "--suite", "partitions", "--n", "4"]);
    assert!(parts.lines().count() >= 5 && parts.lines().all(|l| l.starts_with("PASS")));
    let a = stdout(&["verify", "--suite", "updown", "--n", "4", "--seed", "7"]);
    let b = stdout(&["verify", "--suite", "updown", "--n", "4", "--seed", "7"]);
    assert_eq!(a, b);
    assert_eq!(code(&["verify", "--suite", "nope"]), 1);
    assert_eq!(code(&["verify", "--n", "6"]), 1);
}

#[test]
fn bench_reports_identical_counts() {
    let csv = stdout(&["bench", "--n", "5", "--methods", "brute,levels"]);
    let rows: Vec<Vec<String>> = csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[2] == "7581"));
    let csv = stdout(&["bench", "--n", "1", "--methods", "brute,levels,product", "--repeats", "2"]);
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("3")));
    let csv = stdout(&["bench", "--n", "6", "--methods", "levels,product"]);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(2) == Some("7828354")));
}

#[test]
fn threads_flag_and_env() {
    let one = stdout(&["--threads", "1", "dedekind", "--n", "6"]);
    let env = bin().env("AC_LATTICE_THREADS", "3").args(["dedekind", "--n", "6"]).output().unwrap();
    assert_eq!(one, String::from_utf8(env.stdout).unwrap());
    assert_eq!(code(&["--threads", "0", "dedekind", "--n", "3"]), 1);
}
