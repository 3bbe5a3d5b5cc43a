//! End-to-end checks of the command-line surface and its file formats.

use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_sperner"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

#[test]
fn bound_reports_table_cell() {
    let r = run(&["bound", "--n", "10", "--k", "4"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("lower=10 source=MAIN(1)"));
    assert!(r.stdout.contains("upper=11"));
    assert!(r.stdout.contains("nlb=7"));
    assert!(r.stdout.contains("floor=16"));
}

#[test]
fn bound_reports_exact_cell_and_json() {
    let r = run(&["bound", "--n", "12", "--k", "4"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("exact=55"));
    let r = run(&["bound", "--n", "12", "--k", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(r.stdout.trim()).unwrap();
    assert_eq!(v["exact"], "55");
    assert_eq!(v["lower"], "55");
}

#[test]
fn bound_rejects_invalid_parameters() {
    let r = run(&["bound", "--n", "3", "--k", "5"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("n >= k"));
}

#[test]
fn construct_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    let r = run(&[
        "construct", "--n", "10", "--k", "4", "--method", "main", "--u", "1",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("partitions=10"));
    let r = run(&["verify", path.to_str().unwrap(), "--detecting"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("sperner=pass"));
    assert!(r.stdout.contains("detecting=pass"));
}

#[test]
fn construct_family_and_alt_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let r = run(&[
        "construct", "--n", "27", "--k", "11", "--method", "family3k6",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("partitions=40"));

    // ck even: the variant construction must refuse.
    let r = run(&[
        "construct", "--n", "10", "--k", "4", "--method", "alt",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("c*k odd"), "stderr: {}", r.stderr);
}

#[test]
fn construct_product_matches_table_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let r = run(&[
        "construct", "--n", "29", "--k", "5", "--method", "product", "--m", "5",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("partitions=16830"), "stdout: {}", r.stdout);
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
}

#[test]
fn verify_rejects_corruption_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    run(&[
        "construct", "--n", "10", "--k", "4", "--method", "main", "--u", "1",
        "--out", path.to_str().unwrap(),
    ]);
    // Corrupt: copy a class from partition 0 into partition 1.
    let text = std::fs::read_to_string(&path).unwrap();
    let mut sys: serde_json::Value = serde_json::from_str(&text).unwrap();
    let class = sys["partitions"][0][0].clone();
    let moved: Vec<u64> = class.as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    let all: Vec<u64> = (0..10).collect();
    let rest: Vec<u64> = all.iter().copied().filter(|e| !moved.contains(e)).collect();
    sys["partitions"][1] = serde_json::json!([
        moved,
        vec![rest[0], rest[1]],
        vec![rest[2], rest[3]],
        rest[4..].to_vec(),
    ]);
    std::fs::write(&path, sys.to_string()).unwrap();
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.contains("witness"), "stdout: {}", r.stdout);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 4, \"k\": }").unwrap();
    let r = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(r.code, 4);
    assert!(r.stderr.contains("line"), "stderr: {}", r.stderr);
}

#[test]
fn brute_small_case_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let r = run(&["brute", "--n", "7", "--k", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    let value: u64 = r
        .stdout
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("sp(7,3)=")
        .parse()
        .unwrap();
    assert!(value == 5 || value == 6, "SP(7,3) must land in the published range");
    let r = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(r.code, 0);

    let r = run(&["brute", "--n", "12", "--k", "3"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("cap"));
}

#[test]
fn table_matches_checked_in_golden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let r = run(&["table", "--csv", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let produced = std::fs::read(&path).unwrap();
    let golden = std::fs::read(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/table1_golden.csv"
    ))
    .unwrap();
    assert_eq!(
        produced, golden,
        "table output drifted from the checked-in golden file"
    );
}

#[test]
fn figure_rows_and_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let r = run(&["figure", "--k", "5", "--n-max", "100", "--csv", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 89); // n = 12..=100
    for row in rows {
        let f: Vec<u128> = row.split(',').map(|x| x.parse().unwrap()).collect();
        let (nlb, lo, hi, mms) = (f[1], f[2], f[3], f[4]);
        assert!(nlb <= lo && lo <= hi && hi <= mms, "interval broken: {row}");
    }

    // Single-row edge case, and the plot wrapper.
    let single = dir.path().join("single.csv");
    let svg = dir.path().join("fig.svg");
    let r = run(&[
        "figure", "--k", "5", "--n-max", "12",
        "--csv", single.to_str().unwrap(),
        "--plot", svg.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    let text = std::fs::read_to_string(&single).unwrap();
    assert_eq!(text.lines().count(), 2);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));

    // Larger k keeps the same shape.
    let k10 = dir.path().join("k10.csv");
    let r = run(&["figure", "--k", "10", "--n-max", "40", "--csv", k10.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert_eq!(std::fs::read_to_string(&k10).unwrap().lines().count(), 20);
}
