use std::path::Path;
use std::process::{Command, Output};

use geoseq::io::parse_sequence_str;

fn geoseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn fib_prints_values_and_identities() {
    let o = geoseq(&["--format", "csv", "fib", "--n", "6", "--check-identities"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("n,f_n\n"));
    assert!(text.contains("6,13\n"));

    let o = geoseq(&["--format", "json", "fib", "--n", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("573147844013817084101"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(geoseq(&["fib"]).status.code(), Some(1));
    assert_eq!(geoseq(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        geoseq(&["--format", "xml", "fib", "--n", "3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(geoseq(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\"domain\": \"geometric\", \"values\": [1.0, \"x\"]}").unwrap();
    let o = geoseq(&["analyze", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let o = geoseq(&["analyze", "--in", path(&dir.path().join("missing.csv"))]);
    assert_eq!(o.status.code(), Some(2));

    let f = dir.path().join("neg.csv");
    std::fs::write(&f, "value\n1.0\n-2.0\n").unwrap();
    assert_eq!(
        geoseq(&["paranorm", "--in", path(&f)]).status.code(),
        Some(2)
    );
}

#[test]
fn unrepresentable_output_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("big.json");
    std::fs::write(&f, "{\"domain\": \"log\", \"values\": [900.0, 0.0, 0.0]}").unwrap();
    let o = geoseq(&["transform", "--in", path(&f), "--domain", "geo"]);
    assert_eq!(o.status.code(), Some(4));
    let o = geoseq(&["transform", "--in", path(&f), "--domain", "log"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn transform_writes_a_readable_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.csv");
    std::fs::write(&input, "log_value\n1\n4\n9\n25\n").unwrap();
    let out = dir.path().join("y.json");
    let o = geoseq(&["transform", "--in", path(&input), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let y = parse_sequence_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(y.values.len(), 4);
    // 1, 4, 9, 25 are the squares f_1², …, f_4², so rows 1.. vanish.
    assert!(
        y.values[1..].iter().all(|v| v.abs() < 1e-12),
        "{:?}",
        y.values
    );
}

#[test]
fn analyze_constant_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c.json");
    let values = vec!["0.5"; 120].join(", ");
    std::fs::write(
        &input,
        format!("{{\"domain\": \"log\", \"values\": [{values}]}}"),
    )
    .unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"lambda": {"kind": "half"}, "variant": "limit"}"#).unwrap();
    let o = geoseq(&[
        "--format",
        "json",
        "analyze",
        "--in",
        path(&input),
        "--config",
        path(&cfg),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "converging");

    // The transform of a constant c tends to -c.
    let o = geoseq(&[
        "--format",
        "json",
        "stat",
        "--in",
        path(&input),
        "--config",
        path(&cfg),
        "--epsilon",
        "1.1",
        "--ell",
        "0.6065306597126334",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "converging");
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"lamda": {"kind": "half"}}"#).unwrap();
    assert_eq!(
        geoseq(&["verify", "--config", path(&cfg)]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_small_run_passes() {
    let o = geoseq(&["--format", "csv", "verify", "--seed", "7", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("spec,trial,check,status"));
    assert!(!text.contains(",fail,"));
}
