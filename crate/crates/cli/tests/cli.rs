use std::process::Command;

use suq11_cli::report::{Report, Status};

fn suq11(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_suq11"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn bad_dimension_exits_two() {
    let (code, stdout, stderr) = suq11(&["verify-algebra", "--dim", "5"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("dimension"));
}

#[test]
fn unknown_kind_exits_two() {
    let (code, _, _) = suq11(&["casimir-table", "--kind", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn single_kind_grid() {
    let (code, stdout, _) = suq11(&[
        "verify-algebra",
        "--kind",
        "qhp",
        "--q",
        "0.7",
        "--k0",
        "1",
        "--k0",
        "2",
        "--no-timing",
    ]);
    assert_eq!(code, 0);
    let r: Report = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r.records.len(), 2);
    assert!(r.records.iter().all(|x| x.status == Status::Pass));
    assert!(r.wall_time.is_none());
    assert_eq!(r.compute_hash(), r.payload_sha256);
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let (code, stdout, _) = suq11(&[
        "casimir-table",
        "--kind",
        "parabose",
        "--q",
        "0.9",
        "--l",
        "1",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("id,command,kind"));
    // one row per parity sector
    assert_eq!(lines.count(), 2);
}

#[test]
fn half_integer_liouville_is_unsupported() {
    let (code, stdout, _) = suq11(&[
        "verify-unity",
        "--kind",
        "q_liouville",
        "--q",
        "0.9",
        "--k0",
        "1.5",
        "--no-timing",
    ]);
    assert_eq!(code, 0);
    let r: Report = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r.records.len(), 1);
    assert_eq!(r.records[0].status, Status::Unsupported);
    assert!(r.records[0].diagnostic.is_some());
}
