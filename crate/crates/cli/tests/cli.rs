use std::io::{BufRead, BufReader};
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_subseq-dtw"));
    // keep the caller's environment from leaking into the flags
    for (k, _) in std::env::vars() {
        if k.starts_with("SUBSEQ_DTW_") {
            cmd.env_remove(k);
        }
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    serde_json::from_str(&stdout_ok(&all)).unwrap()
}

fn without_wall(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_ms");
    v
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn report_matches_golden_file() {
    let out = stdout_ok(&["search", "--m", "5000", "--n", "64", "--r", "0.25n", "--threads", "1", "--output", "json"]);
    let at = out.find("\"wall_ms\":").unwrap();
    let masked = format!("{}\"wall_ms\":0}}", &out[..at]);
    let golden = include_str!("golden/search_m5000_n64.json").trim_end();
    assert_eq!(masked, golden);
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in ["index", "distance_squared", "n", "r", "fragments", "threads", "dtw_evals", "wall_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn planted_query_is_found_at_777() {
    let dir = tempfile::tempdir().unwrap();
    let (s, q) = (path(dir.path(), "s.bin"), path(dir.path(), "q.txt"));
    stdout_ok(&[
        "generate",
        "--m",
        "20000",
        "--n",
        "128",
        "--out",
        &s,
        "--query-out",
        &q,
        "--plant-at",
        "777",
        "--noise",
        "0.01",
    ]);
    let v = json(&["search", "--series", &s, "--query", &q, "--threads", "2"]);
    assert_eq!(v["index"], 777);
    assert!(v["distance_squared"].as_f64().unwrap() < 0.01);
    let f4 = json(&["search", "--series", &s, "--query", &q, "--threads", "2", "--fragments", "4"]);
    assert_eq!(f4["index"], v["index"]);
    assert_eq!(f4["distance_squared"], v["distance_squared"]);
    assert_eq!(f4["fragments"], 4);
}

#[test]
fn formats_give_identical_results() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for ext in ["bin", "csv", "txt"] {
        let (s, q) = (path(dir.path(), &format!("s.{ext}")), path(dir.path(), &format!("q.{ext}")));
        stdout_ok(&["generate", "--m", "3000", "--n", "32", "--seed", "5", "--out", &s, "--query-out", &q]);
        reports.push(without_wall(json(&["search", "--series", &s, "--query", &q, "--threads", "1"])));
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
    let explicit = path(dir.path(), "s.data");
    let q = path(dir.path(), "q.data");
    stdout_ok(&[
        "generate",
        "--m",
        "3000",
        "--n",
        "32",
        "--seed",
        "5",
        "--format",
        "raw-f64-le",
        "--out",
        &explicit,
        "--query-out",
        &q,
    ]);
    let v = without_wall(json(&[
        "search",
        "--series",
        &explicit,
        "--format",
        "raw-f64-le",
        "--query",
        &q,
        "--threads",
        "1",
    ]));
    assert_eq!(v["index"], reports[0]["index"]);
}

#[test]
fn fraction_and_absolute_radius_agree() {
    let a = without_wall(json(&["search", "--m", "4000", "--n", "40", "--r", "0.3n", "--threads", "1"]));
    let b = without_wall(json(&["search", "--m", "4000", "--n", "40", "--r", "12", "--threads", "1"]));
    assert_eq!(a, b);
    assert_eq!(a["r"], 12);
}

#[test]
fn environment_overrides_defaults() {
    let out = bin()
        .args(["search", "--output", "json"])
        .env("SUBSEQ_DTW_M", "3000")
        .env("SUBSEQ_DTW_N", "32")
        .env("SUBSEQ_DTW_R", "4")
        .env("SUBSEQ_DTW_THREADS", "1")
        .env("SUBSEQ_DTW_SEED", "9")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        (v["m"].as_u64(), v["n"].as_u64(), v["r"].as_u64(), v["seed"].as_u64()),
        (Some(3000), Some(32), Some(4), Some(9))
    );
    // flags still win over the environment
    let out = bin()
        .args(["search", "--output", "json", "--m", "2000", "--n", "16"])
        .env("SUBSEQ_DTW_M", "3000")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["m"], 2000);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["search", "--m", "10", "--n", "20"]), 2);
    assert_eq!(code(&["verify", "--m", "10", "--n", "20"]), 2);
    assert_eq!(code(&["search", "--r", "bogus"]), 2);
    assert_eq!(code(&["search", "--threads", "0", "--m", "1000", "--n", "16"]), 2);
    assert_eq!(code(&["search", "--series", "/nonexistent/file.txt"]), 2);
    assert_eq!(code(&["search", "--m", "1000", "--n", "16", "--memory-budget", "100"]), 2);
    assert_eq!(code(&["search", "--m", "100", "--n", "16", "--fragments", "200"]), 2);
    assert_eq!(
        code(&[
            "worker",
            "--m",
            "1000",
            "--n",
            "16",
            "--fragments",
            "2",
            "--worker",
            "0",
            "--coordinator",
            "127.0.0.1:1",
            "--timeout",
            "0.3"
        ]),
        3
    );
}

#[test]
fn malformed_series_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let s = path(dir.path(), "bad.csv");
    std::fs::write(&s, "1,2,3\n4,x,6\n").unwrap();
    let out = run(&["search", "--series", &s, "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 2") && err.contains("column 2"), "{err}");
}

#[test]
fn verify_agrees_and_detects_faults() {
    let args = ["verify", "--m", "4000", "--n", "64", "--fragments", "2", "--threads", "2"];
    assert_eq!(run(&args).status.code(), Some(0));
    let mut faulty = args.to_vec();
    faulty.extend(["--inject-fault", "--output", "json"]);
    let out = run(&faulty);
    assert_eq!(out.status.code(), Some(4));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["agree"], false);
    assert_eq!(v["paths"][2]["agrees"], false);
}

#[test]
fn bench_csv() {
    let out = stdout_ok(&[
        "bench",
        "--m",
        "5000",
        "--n",
        "64",
        "--sweep-threads",
        "1,2",
        "--sweep-r",
        "0.1n,0.5n,1n",
        "--repeat",
        "1",
    ]);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "n",
            "r",
            "threads",
            "wall_ms",
            "speedup",
            "efficiency",
            "dtw_evals",
            "pruning_ratio",
            "index",
            "distance_squared"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    let field = |row: &csv::StringRecord, i: usize| row[i].parse::<f64>().unwrap();
    let mut evals = Vec::new();
    for row in &rows {
        if &row[2] == "1" {
            assert_eq!(field(row, 4), 1.0);
            assert_eq!(field(row, 5), 1.0);
            evals.push(field(row, 6));
        }
    }
    assert_eq!(evals.len(), 3);
    assert!(evals.windows(2).all(|w| w[0] <= w[1]), "{evals:?}");

    let again = stdout_ok(&[
        "bench",
        "--m",
        "5000",
        "--n",
        "64",
        "--sweep-threads",
        "1,2",
        "--sweep-r",
        "0.1n,0.5n,1n",
        "--repeat",
        "1",
    ]);
    let evals_of = |text: &str| -> Vec<String> {
        csv::Reader::from_reader(text.as_bytes()).records().map(|r| r.unwrap()[6].to_string()).collect()
    };
    assert_eq!(evals_of(&out), evals_of(&again));
}

#[test]
fn partition_manifest() {
    let out = stdout_ok(&["partition", "--m", "300", "--n", "16", "--fragments", "3"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# m=300 n=16 fragments=3");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[2], "0\t1\t110\t0\t110");
    assert_eq!(lines[4], "2\t191\t110\t1520\t110");
}

#[test]
fn separate_worker_processes() {
    let mut coord = bin()
        .args(["coordinate", "--coordinator", "127.0.0.1:0", "--fragments", "3", "--timeout", "20", "--output", "json"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(coord.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().strip_prefix("listening on ").unwrap().to_string();
    let common = ["--m", "6000", "--n", "48", "--threads", "1", "--fragments", "3", "--coordinator", &addr];
    let workers: Vec<_> = (0..3)
        .map(|k| {
            let id = k.to_string();
            bin()
                .arg("worker")
                .args(common)
                .args(["--worker", &id, "--output", "json"])
                .stdout(Stdio::piped())
                .spawn()
                .unwrap()
        })
        .collect();
    let reports: Vec<Value> = workers
        .into_iter()
        .map(|w| {
            let out = w.wait_with_output().unwrap();
            assert!(out.status.success());
            serde_json::from_slice(&out.stdout).unwrap()
        })
        .collect();
    let served: Value = serde_json::from_slice(&coord.wait_with_output().unwrap().stdout).unwrap();
    let single = json(&["search", "--m", "6000", "--n", "48", "--threads", "1"]);
    for r in &reports {
        assert_eq!(r["index"], single["index"]);
        assert_eq!(r["distance_squared"], single["distance_squared"]);
    }
    assert_eq!(served["index"], single["index"]);
    assert_eq!(served["workers"], 3);
}
