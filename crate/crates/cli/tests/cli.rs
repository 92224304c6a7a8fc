use std::io::Write;
use std::process::{Command, Output};

use residue_futaki::exprio::parse_job_value;
use serde_json::Value as Json;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_residue-futaki"))
        .args(args)
        .env_remove("RESIDUE_FUTAKI_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn job_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn zeta_of_the_projective_plane_is_zero() {
    let o = run(&["zeta", "--weights", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn wps_futaki_example() {
    let o = run(&["wps-futaki", "--weights", "1,1,2", "--params", "0,1,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "-16/9\n");
}

#[test]
fn ke_check_reports_a_witness() {
    let o = run(&["ke-check", "--weights", "1,2,3", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("OBSTRUCTED"));
    assert!(lines.next().unwrap().starts_with("witness: a = ("));
}

#[test]
fn ke_check_on_the_projective_plane() {
    let o = run(&["ke-check", "--weights", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("UNOBSTRUCTED\n"));
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "ke-check", "--weights", "2,3,5", "--seed", "11"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn degenerate_residue_prints_the_representation() {
    let o = run(&[
        "residue",
        "--field",
        "z1^2 - z2^2",
        "--field",
        "z1*z2",
        "--numerator",
        "(2*z1+1)^3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "12");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("z1^3 = "));
    assert!(lines[2].starts_with("z2^3 = "));
}

#[test]
fn nondegenerate_residue_prints_only_the_value() {
    let o = run(&[
        "residue",
        "--vars",
        "x,y",
        "--field",
        "2*x",
        "--field",
        "3*y + x^2",
        "--numerator",
        "1",
    ]);
    assert_eq!(stdout(&o), "1/6\n");
}

#[test]
fn futaki_gives_a_per_chart_breakdown() {
    let o = run(&[
        "futaki",
        "--chart",
        "1:-z1,-2*z2",
        "--chart",
        "1:z1,-z2",
        "--chart",
        "1:2*z1,z2",
        "--phi",
        "c2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "3\nchart 0: 1\nchart 1: 1\nchart 2: 1\nprefactor: 1\n");
}

#[test]
fn chern_numbers() {
    let o = run(&["chern", "--weights", "1,2,3", "--params", "0,1,3", "--phi", "c1^2"]);
    assert_eq!(stdout(&o), "6\n");
    let o = run(&["chern", "--weights", "symbolic", "--params", "symbolic", "--phi", "c2"]);
    assert_eq!(stdout(&o), "(w0*w1 + w0*w2 + w1*w2)/(w0*w1*w2)\n");
}

#[test]
fn zeta_coefficient() {
    let o = run(&["zeta", "--weights", "symbolic", "--coeff", "a0^2*a1*a2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("-3*w0^3*w1^3*w2^2 + "));
}

#[test]
fn structured_output_round_trips() {
    for args in [
        vec!["--json", "wps-futaki", "--weights", "1,1,2", "--params", "0,1,3"],
        vec![
            "--json",
            "--max-exponent",
            "5",
            "residue",
            "--field",
            "z1^2",
            "--field",
            "z2",
            "--numerator",
            "z1",
        ],
        vec!["--json", "ke-check", "--weights", "1,2,3", "--seed", "7"],
        vec!["--json", "zeta", "--weights", "2,3,5", "--coeff", "a0^4"],
        vec![
            "--json",
            "chern",
            "--weights",
            "symbolic",
            "--params",
            "1/2,1,3",
            "--phi",
            "c1^2",
        ],
        vec!["--json", "futaki", "--chart", "2:z1,-z2", "--chart", "2:-z1,z2"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let doc: Json = serde_json::from_slice(&o.stdout).unwrap();
        assert!(doc.get("result").is_some());
        let job = parse_job_value(&doc).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        let mut again = job.to_document();
        again["result"] = doc["result"].clone();
        assert_eq!(again, doc, "{args:?}");
    }
}

#[test]
fn job_files_match_inline_flags() {
    let f = job_file(r#"{"kind": "wps-futaki", "weights": [1, 1, 2], "params": ["0", "1", "3"]}"#);
    let o = run(&["wps-futaki", "--job", f.path().to_str().unwrap()]);
    assert_eq!(stdout(&o), "-16/9\n");
}

#[test]
fn job_kind_must_match_the_subcommand() {
    let f = job_file(r#"{"kind": "zeta", "weights": [1, 1, 1]}"#);
    let o = run(&["wps-futaki", "--job", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn job_and_inline_flags_are_exclusive() {
    let f = job_file(r#"{"kind": "zeta", "weights": [1, 1, 1]}"#);
    let o = run(&["zeta", "--job", f.path().to_str().unwrap(), "--weights", "1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_and_validation_errors_exit_2() {
    for args in [
        vec!["wps-futaki", "--weights", "2,4,1", "--params", "0,1,2"],
        vec!["wps-futaki", "--weights", "1,1,2", "--params", "0,0,1"],
        vec!["zeta", "--weights", "1,1"],
        vec!["residue", "--field", "z1^^2", "--field", "z2", "--numerator", "1"],
        vec!["chern", "--weights", "1,1,1", "--params", "0,1,2", "--phi", "c1^3"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stdout(&o).is_empty(), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn syntax_errors_carry_a_position() {
    let o = run(&["residue", "--field", "z1^^2", "--field", "z2", "--numerator", "1"]);
    assert!(stderr(&o).contains("column 4"), "{}", stderr(&o));
}

#[test]
fn exhausted_caps_exit_3() {
    let o = run(&[
        "--max-exponent",
        "1",
        "--max-rep-degree",
        "0",
        "residue",
        "--field",
        "z1^2",
        "--field",
        "z2^2",
        "--numerator",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn thread_count_is_read_from_the_environment() {
    let bin = env!("CARGO_BIN_EXE_residue-futaki");
    let args = ["chern", "--weights", "2,3,5", "--params", "0,1,3", "--phi", "c1^2"];
    let one = Command::new(bin)
        .args(args)
        .env("RESIDUE_FUTAKI_THREADS", "1")
        .output()
        .unwrap();
    let auto = Command::new(bin)
        .args(args)
        .env("RESIDUE_FUTAKI_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(one.stdout, auto.stdout);
    let bad = Command::new(bin)
        .args(args)
        .env("RESIDUE_FUTAKI_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
