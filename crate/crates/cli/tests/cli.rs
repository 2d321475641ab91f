use std::fs;
use std::process::{Command, Output};

fn jigsaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jigsaw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const HEADER: &str = "n,p1,p2,c,trial,seed,percolated,rounds,max_cluster,red_edges,blue_edges,runtime_ms";

#[test]
fn generated_graph_runs_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let out = jigsaw(&["gen", "--n", "30", "--p1", "0.5", "--p2", "0.5", "--seed", "4", "--out", p]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let header: Vec<usize> = text.lines().next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(header[0], 30);
    assert_eq!(text.lines().count(), 1 + header[1] + header[2]);

    let out = jigsaw(&["run", "--input", p]);
    assert!(out.status.success());
    let s = stdout(&out);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "30");
    assert_eq!(row[9], header[1].to_string());
}

#[test]
fn sweep_files_match_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for workers in ["1", "2", "4"] {
        let path = dir.path().join(format!("w{workers}.csv"));
        let out = jigsaw(&[
            "sweep", "--n", "800", "--c", "0.5,1,4", "--trials", "6", "--seed", "17", "--workers", workers,
            "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        files.push(fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
    let text = String::from_utf8(files.remove(0)).unwrap();
    assert_eq!(text.lines().next(), Some(HEADER));
    assert_eq!(text.lines().count(), 1 + 18 + 3);
    assert_eq!(text.lines().filter(|l| l.contains(",summary,")).count(), 3);
}

#[test]
fn json_lines_carry_the_csv_fields() {
    let out = jigsaw(&["run", "--n", "100", "--c", "3", "--trials", "2", "--format", "json"]);
    assert!(out.status.success());
    for line in stdout(&out).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in HEADER.split(',') {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["c"], 3.0);
    }
}

#[test]
fn empty_sweep_is_header_only() {
    let out = jigsaw(&["sweep", "--n", "100", "--trials", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), format!("{HEADER}\n"));
}

#[test]
fn parameter_errors_exit_with_two() {
    for args in [
        vec!["run", "--n", "10", "--p1", "1.5", "--p2", "0.1"],
        vec!["run", "--n", "10"],
        vec!["sweep", "--n", "100", "--c", "1", "--format", "xml"],
        vec!["construct", "--n", "8", "--p1", "0.1", "--p2", "0.1"],
        vec!["absorb", "--n", "9", "--p1", "0.5", "--p2", "0.5"],
        vec!["enumerate", "--k", "9"],
        vec!["bottleneck", "--n", "1000", "--c", "2", "--trials", "3"],
        vec!["verify", "--suite", "nope"],
        vec!["run", "--no-such-flag"],
    ] {
        let out = jigsaw(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let out = jigsaw(&["sweep", "--n", "50", "--c", "1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_suites_report_and_set_exit_codes() {
    let out = jigsaw(&["verify", "--suite", "identities"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().all(|l| l.starts_with("PASS ")));

    let out = jigsaw(&["verify", "--suite", "bottleneck"]);
    assert_eq!(out.status.code(), Some(0));

    // The partition inequality fails on small configurations, so the
    // counting suite reports a failure.
    let out = jigsaw(&["verify", "--suite", "counting"]);
    assert_eq!(out.status.code(), Some(1));
    let s = stdout(&out);
    assert!(s.contains("FAIL ineq31"));
    assert!(s.contains("PASS cayley"));
}

#[test]
fn absorb_enumerate_construct_bottleneck() {
    let out = jigsaw(&["absorb", "--n", "5", "--p1", "1", "--p2", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["percolates"], true);
    assert_eq!(v["found"]["steps"], 1);

    let out = jigsaw(&["absorb", "--n", "4", "--p1", "1", "--p2", "1", "--v1", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["trace"]["percolated"], true);

    let out = jigsaw(&["enumerate", "--k", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exact_count"], 9);
    let out = jigsaw(&["enumerate", "--k", "2", "--l", "1", "--r", "1", "--bound", "ineq31"]);
    assert!(stdout(&out).contains("\"bound\":\"ineq31\""));

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let out = jigsaw(&[
        "construct", "--n", "1000", "--c", "2", "--epsilon", "1", "--seed", "3", "--audit", "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.contains("audit_query_once: true"));
    assert!(text.lines().any(|l| l.starts_with("k1: ")));

    let out = jigsaw(&["bottleneck", "--n", "1000", "--c", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let gap = (v["predicted"].as_f64().unwrap() - v["two_ln_n"].as_f64().unwrap()).abs();
    assert!(gap < 1e-3);
    let out = jigsaw(&["bottleneck", "--n", "2000", "--c", "0.5", "--trials", "20"]);
    assert!(out.status.success());
}
