use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn sqlminer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqlminer"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn example_discover(extra: &[&str]) -> Output {
    let (log, rel) = (data("example_log.csv"), data("example_relations.csv"));
    let mut args = vec!["discover", "--log", &log, "--relations", &rel];
    args.extend_from_slice(extra);
    sqlminer(&args)
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn discover_reports_response_a_b() {
    let csv = stdout(&example_discover(&[]));
    assert!(csv
        .lines()
        .any(|l| l == "Response,a,b,,,4,3,0.750000,0.750000,0.562500"));
}

#[test]
fn threshold_out_of_range_is_a_usage_error() {
    let log = data("example_log.csv");
    let out = sqlminer(&[
        "discover",
        "--log",
        &log,
        "--templates",
        "Response",
        "--min-support",
        "1.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = sqlminer(&["discover", "--log", &log, "--min-confidence", "-0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_template_and_flags_are_usage_errors() {
    let log = data("example_log.csv");
    assert_eq!(
        sqlminer(&["discover", "--log", &log, "--templates", "Existence"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sqlminer(&["discover", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        sqlminer(&["discover", "--log", &log, "--format", "xml"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sqlminer(&["discover", "--log", &log, "--jobs", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn role_template_without_relations_is_a_usage_error() {
    let log = data("example_log.csv");
    let out = sqlminer(&[
        "discover",
        "--log",
        &log,
        "--templates",
        "RoleBasedResponse",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--relations"));
    // without --templates the role templates are simply skipped
    let csv = stdout(&sqlminer(&["discover", "--log", &log]));
    assert!(!csv.contains("RoleBased"));
}

#[test]
fn malformed_log_is_a_data_error_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = tmp(&dir, "bad.csv");
    fs::write(&bad, "event_id,trace_id,activity,timestamp,resource\ne1,t1,a,2020-01-01,i1\ne2,t1,b,yesterday,i1\n").unwrap();
    let out = sqlminer(&["discover", "--log", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let missing = tmp(&dir, "absent.csv");
    assert_eq!(
        sqlminer(&["discover", "--log", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn audit_passed_rows_equal_default_output() {
    let plain = stdout(&example_discover(&[]));
    let audit = stdout(&example_discover(&["--audit"]));
    let mut lines = audit.lines();
    let header = lines.next().unwrap();
    assert!(header.ends_with(",passed"));
    let mut kept = vec![header.trim_end_matches(",passed").to_string()];
    let mut total = 0;
    for l in lines {
        total += 1;
        if let Some(row) = l.strip_suffix(",true") {
            kept.push(row.to_string());
        } else {
            assert!(l.ends_with(",false"));
        }
    }
    assert_eq!(kept.join("\n") + "\n", plain);
    assert_eq!(total, 224);
}

#[test]
fn json_has_explicit_nulls() {
    let text = stdout(&example_discover(&["--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v.as_array().unwrap();
    let resp = rows
        .iter()
        .find(|r| r["template"] == "Response" && r["task_a"] == "a" && r["task_b"] == "b")
        .unwrap();
    assert!(resp["identity"].is_null() && resp["group"].is_null());
    assert_eq!(resp["confidence"].to_string(), "0.562500");
    assert!(rows.iter().all(|r| r.as_object().unwrap().len() == 10));
}

#[test]
fn zero_results_still_succeed() {
    let csv = stdout(&example_discover(&[
        "--min-support",
        "1",
        "--min-confidence",
        "1",
    ]));
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn output_does_not_depend_on_jobs() {
    let one = stdout(&example_discover(&["--jobs", "1", "--audit"]));
    let many = stdout(&example_discover(&["--jobs", "3", "--audit"]));
    assert_eq!(one, many);
}

#[test]
fn out_file_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (out, rep) = (tmp(&dir, "r.csv"), tmp(&dir, "run.json"));
    let printed = stdout(&example_discover(&[
        "--out",
        out.to_str().unwrap(),
        "--report",
        rep.to_str().unwrap(),
    ]));
    assert!(printed.is_empty());
    let results = fs::read_to_string(&out).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["counts"]["traces"], 4);
    assert_eq!(report["counts"]["events"], 12);
    assert_eq!(report["counts"]["candidates"], 224);
    assert_eq!(
        report["counts"]["results"].as_u64().unwrap() as usize,
        results.lines().count() - 1
    );
    let digests = report["inputs"].as_object().unwrap();
    assert_eq!(digests.len(), 2);
    // sha256 of the log file, checked against an independent tool when present
    if let Ok(o) = Command::new("sha256sum")
        .arg(data("example_log.csv"))
        .output()
    {
        let want = String::from_utf8(o.stdout).unwrap();
        let want = want.split_whitespace().next().unwrap();
        assert!(digests.values().any(|v| v == want));
    }
    assert!(!results.contains("duration"));
}

#[test]
fn remapped_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = tmp(&dir, "remap.csv");
    let text = fs::read_to_string(data("example_log.csv"))
        .unwrap()
        .replacen(
            "event_id,trace_id,activity,timestamp,resource",
            "id,case,task,time,who",
            1,
        );
    fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    let args = [
        "discover",
        "--log",
        p,
        "--templates",
        "Response",
        "--col-event-id",
        "id",
        "--col-trace-id",
        "case",
        "--col-activity",
        "task",
        "--col-timestamp",
        "time",
        "--col-resource",
        "who",
    ];
    assert!(stdout(&sqlminer(&args)).contains("Response,a,b,,,4,3,"));
    assert_eq!(sqlminer(&["discover", "--log", p]).status.code(), Some(1));
}

#[test]
fn validate_example_and_listing_deltas() {
    let (log, rel) = (data("example_log.csv"), data("example_relations.csv"));
    let text = stdout(&sqlminer(&[
        "validate",
        "--log",
        &log,
        "--relations",
        &rel,
        "--listing-deltas",
    ]));
    assert!(
        text.ends_with("224 candidates over 1 log(s): 0 mismatches\n"),
        "{text}"
    );
    assert!(text.contains("listing-delta NotSuccession (corrected): 9 of 12"));
    assert!(text.contains("listing-delta Response (corrected): 0 of 12"));
    let verbatim = stdout(&sqlminer(&[
        "validate",
        "--log",
        &log,
        "--relations",
        &rel,
        "--listing-deltas",
        "--mode",
        "verbatim",
    ]));
    assert!(!verbatim.contains("listing-delta RespondedExistence (verbatim): 0 of"));
}

#[test]
fn validate_names_candidates_hit_by_a_damaged_index() {
    let (log, rel) = (data("example_log.csv"), data("example_relations.csv"));
    let out = sqlminer(&[
        "validate",
        "--log",
        &log,
        "--relations",
        &rel,
        "--inject-fault",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("mismatch Response(a, b): engine"), "{text}");
}

#[test]
fn validate_sweep_of_100_seeds() {
    let text = stdout(&sqlminer(&["validate", "--sweep", "100", "--seed", "1000"]));
    assert!(text.contains("over 100 log(s): 0 mismatches"));
}

#[test]
fn generate_is_deterministic() {
    let a = stdout(&sqlminer(&[
        "generate",
        "--seed",
        "5",
        "--plant",
        "ChainResponse:a:b",
        "--rate",
        "0.7",
    ]));
    let b = stdout(&sqlminer(&[
        "generate",
        "--seed",
        "5",
        "--plant",
        "ChainResponse:a:b",
        "--rate",
        "0.7",
    ]));
    let c = stdout(&sqlminer(&[
        "generate",
        "--seed",
        "6",
        "--plant",
        "ChainResponse:a:b",
        "--rate",
        "0.7",
    ]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("event_id,trace_id,activity,timestamp,resource\n"));
}

#[test]
fn contradictory_plants_are_usage_errors() {
    let chain = [
        "generate",
        "--min-len",
        "1",
        "--max-len",
        "1",
        "--plant",
        "ChainResponse:a:b",
        "--rate",
        "1.0",
    ];
    assert_eq!(sqlminer(&chain).status.code(), Some(2));
    assert_eq!(
        sqlminer(&["generate", "--plant", "Response:a"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sqlminer(&["generate", "--plant", "Response:a:z"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sqlminer(&["generate", "--plant", "Response:a:b", "--rate", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        sqlminer(&["generate", "--traces", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn generated_bookkeeping_matches_discovery() {
    let dir = tempfile::tempdir().unwrap();
    let (log, book) = (tmp(&dir, "g.csv"), tmp(&dir, "g.json"));
    stdout(&sqlminer(&[
        "generate",
        "--seed",
        "3",
        "--traces",
        "200",
        "--plant",
        "Precedence:c:d",
        "--rate",
        "0.5",
        "--coverage",
        "0.6",
        "--out",
        log.to_str().unwrap(),
        "--bookkeeping",
        book.to_str().unwrap(),
    ]));
    let b: serde_json::Value = serde_json::from_str(&fs::read_to_string(&book).unwrap()).unwrap();
    let csv = stdout(&sqlminer(&[
        "discover",
        "--log",
        log.to_str().unwrap(),
        "--templates",
        "Precedence",
        "--audit",
    ]));
    let row = csv
        .lines()
        .find(|l| l.starts_with("Precedence,c,d,"))
        .unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[5], b["planted"]["activations"].to_string());
    assert_eq!(cols[6], b["planted"]["fulfilments"].to_string());
}

#[test]
fn emit_sql_single_and_all() {
    let golden =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/verbatim/response.sql");
    let sql = stdout(&sqlminer(&["emit-sql", "--template", "Response"]));
    assert_eq!(sql, fs::read_to_string(golden).unwrap());
    let all = stdout(&sqlminer(&["emit-sql", "--all", "--mode", "corrected"]));
    let headers: Vec<&str> = all
        .lines()
        .filter(|l| l.starts_with("-- ") && !l.starts_with("-- corrected"))
        .collect();
    assert_eq!(headers.len(), 14);
    assert_eq!(all.matches("-- corrected:").count(), 5);
    let union = stdout(&sqlminer(&["emit-sql", "--all", "--union"]));
    assert_eq!(
        union.split_whitespace().filter(|w| *w == "UNION").count(),
        13
    );
    let one = stdout(&sqlminer(&[
        "emit-sql",
        "--template",
        "Precedence",
        "--union",
    ]));
    assert!(!one.contains("UNION"));
}

#[test]
fn emit_sql_schema_and_thresholds() {
    let sql = stdout(&sqlminer(&[
        "emit-sql",
        "--template",
        "Precedence",
        "--table",
        "events",
        "--col-task",
        "act",
        "--min-support",
        "0.85",
        "--min-confidence",
        "0.25",
    ]));
    assert!(sql.contains("FROM events"));
    assert!(!sql.contains("FROM Log"));
    assert!(sql.contains("> 0.85") && sql.contains("> 0.25"));
    let bad = sqlminer(&["emit-sql", "--template", "Precedence", "--table", "x;drop"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(
        sqlminer(&["emit-sql", "--template", "Response", "--mode", "fixed"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sqlminer(&["emit-sql"]).status.code(), Some(2));
}

#[test]
fn stats_counts() {
    let log = data("example_log.csv");
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&sqlminer(&["stats", "--log", &log]))).unwrap();
    assert_eq!(v["traces"], 4);
    assert_eq!(v["events"], 12);
    assert_eq!(v["activities"], 4);
    assert_eq!(v["resources"], 5);
    assert_eq!(v["activity_counts"]["c"], 4);
    let csv = stdout(&sqlminer(&["stats", "--log", &log, "--format", "csv"]));
    assert!(csv.contains("max_trace_length,4\n"));
}
