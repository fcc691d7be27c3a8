//! End-to-end tests of the `klrpoly` binary: output shapes, exit-code
//! policy, format round trips, cache persistence, and determinism across
//! worker counts. Each test spawns the real executable.

use std::process::{Command, Output};

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_klrpoly"));
    // Keep the ambient environment from smuggling a cache file in.
    cmd.env_remove("KLRPOLY_CACHE");
    cmd
}

fn run(args: &[&str]) -> (i32, String, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = binary().args(args).output().expect("binary runs");
    (
        status.code().expect("exit code"),
        String::from_utf8(stdout).expect("utf-8 stdout"),
        String::from_utf8(stderr).expect("utf-8 stderr"),
    )
}

#[test]
fn compute_prints_polynomials() {
    let (code, out, _) = run(&["compute", "--rtilde", "e", "3412"]);
    assert_eq!((code, out.as_str()), (0, "q^4 + q^2\n"));

    let (code, out, _) = run(&["compute", "--rtilde", "312", "312"]);
    assert_eq!((code, out.as_str()), (0, "1\n"));

    // R~ is the default kind.
    let (code, out, _) = run(&["compute", "e", "21"]);
    assert_eq!((code, out.as_str()), (0, "q\n"));

    let (code, out, _) = run(&["compute", "--rpoly", "e", "21"]);
    assert_eq!((code, out.as_str()), (0, "q - 1\n"));

    // Incomparable pairs give the zero polynomial, not an error.
    let (code, out, _) = run(&["compute", "21435", "e"]);
    assert_eq!((code, out.as_str()), (0, "0\n"));
}

#[test]
fn compute_json_round_trips() {
    let (code, out, _) = run(&["compute", "--rtilde", "e", "3412", "--format", "json"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["format"], "klrpoly.v1");
    assert_eq!(value["kind"], "rtilde");
    assert_eq!(value["u"], "1234");
    assert_eq!(value["v"], "3412");
    assert_eq!(value["polynomial"], "q^4 + q^2");
    assert_eq!(value["coefficients"][2], "1");
    // Parsing and re-rendering reproduces the emitted bytes.
    assert_eq!(serde_json::to_string(&value).unwrap() + "\n", out);
}

#[test]
fn usage_errors_exit_two_without_computing() {
    let (code, _, err) = run(&["compute", "--rtilde", "3112", "e"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("error:"), "{err}");

    let (code, _, _) = run(&["verify", "nonsense", "--n", "4"]);
    assert_eq!(code, 2);

    let (code, _, _) = run(&["compute", "--rtilde", "--rpoly", "e", "21"]);
    assert_eq!(code, 2, "mutually exclusive kinds");

    let (code, _, _) = run(&["compute", "e", "21", "--format", "csv"]);
    assert_eq!(code, 2, "csv is table-only");

    let (code, _, _) = run(&["verify", "main", "--n", "4", "--workers", "0"]);
    assert_eq!(code, 2, "zero workers");

    let (code, _, err) = run(&["subwords", "--n", "4", "--sigma", "312"]);
    assert_eq!(code, 2, "rank mismatch: {err}");

    let (code, _, _) = run(&["compute", "e", "e"]);
    assert_eq!(code, 2, "rank of two identities is ambiguous");
}

#[test]
fn capacity_errors_exit_three_until_forced() {
    let (code, _, err) = run(&["verify", "main", "--n", "9"]);
    assert_eq!(code, 3, "{err}");

    let (code, _, _) = run(&["compute", "e", "10,2,3,4,5,6,7,8,9,1"]);
    assert_eq!(code, 3, "single computations stop at rank 9");

    let (code, _, _) = run(&["interval", "123456798"]);
    assert_eq!(code, 3, "interval enumeration stops at rank 8");

    let (code, _, err) = run(&["verify", "trec", "--n", "9"]);
    assert_eq!(code, 3, "{err}");

    let (code, out, err) = run(&["verify", "trec", "--n", "9", "--force"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("PASS"));
    assert!(err.contains("force"), "warning expected: {err}");

    let (code, out, _) = run(&["compute", "e", "10,2,3,4,5,6,7,8,9,1", "--force"]);
    assert_eq!(code, 0);
    assert!(!out.trim().is_empty());
}

#[test]
fn verify_text_report_shape() {
    let (code, out, _) = run(&["verify", "main", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("claim: main"), "{out}");
    assert!(out.contains("sigma swept: 14"), "{out}");
    assert!(out.contains("cases: 15"), "{out}");
    assert!(out.contains("mismatches: 0"), "{out}");
    assert!(out.trim_end().ends_with("PASS"), "{out}");
}

#[test]
fn verify_json_report_round_trips() {
    let (code, out, _) = run(&["verify", "corollary", "--n", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["claim"], "corollary");
    assert_eq!(value["passing"], true);
    assert_eq!(value["cases"], 15);
    assert_eq!(value["mismatches"].as_array().unwrap().len(), 0);
    assert_eq!(serde_json::to_string(&value).unwrap() + "\n", out);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let single = run(&["verify", "main", "--n", "6", "--workers", "1"]);
    let several = run(&["verify", "main", "--n", "6", "--workers", "4"]);
    assert_eq!(single, several);

    let single = run(&[
        "conjecture",
        "--n",
        "4",
        "--workers",
        "1",
        "--format",
        "json",
    ]);
    let several = run(&[
        "conjecture",
        "--n",
        "4",
        "--workers",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(single, several);
}

#[test]
fn cache_persists_between_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("rpoly.cache");
    let cache_str = cache.to_str().unwrap();

    let (code, first, err) = run(&["compute", "e", "34512", "--cache", cache_str]);
    assert_eq!(code, 0, "{err}");
    assert!(!err.contains("loaded"), "no cache to load yet: {err}");

    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.starts_with("RPOLYCACHE v1\n"), "magic line: {text}");
    assert!(text.lines().count() > 1, "records were persisted");

    let (code, second, err) = run(&["compute", "e", "34512", "--cache", cache_str]);
    assert_eq!(code, 0);
    assert!(err.contains("loaded"), "second run loads the cache: {err}");
    assert_eq!(first, second);

    // The environment variable is a fallback for the flag.
    let out = binary()
        .args(["compute", "e", "34512"])
        .env("KLRPOLY_CACHE", cache_str)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("loaded"));
}

#[test]
fn conjecture_writes_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let certs = dir.path().join("certs.txt");
    let (code, out, err) = run(&["conjecture", "--n", "3", "--certs", certs.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("pairs: 9"), "{out}");
    assert!(out.contains("failures: 0"), "{out}");

    let text = std::fs::read_to_string(&certs).unwrap();
    assert_eq!(text.lines().count(), 9);
    for line in text.lines() {
        let tokens: Vec<&str> = line.split(' ').collect();
        assert_eq!(tokens.len(), 4, "line shape: {line}");
        assert!(tokens[2].starts_with("g="), "{line}");
        assert!(
            tokens[3].starts_with("h=[") && tokens[3].ends_with(']'),
            "{line}"
        );
    }
    assert!(text.lines().any(|l| l == "123 312 g=2 h=[]"), "{text}");
}

#[test]
fn table_streams_versioned_csv() {
    let (code, out, _) = run(&["table", "--n", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# klrpoly table v1");
    assert_eq!(lines[1], "sigma,length,d,h,g,rtilde");
    assert_eq!(lines.len(), 2 + 15, "one row per subword occurrence");
    assert_eq!(lines[2], "1234,0,0,4,0,q^4 + q^2");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let (code, out, _) = run(&["table", "--n", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("wrote 15 rows"), "{out}");
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("# klrpoly table v1\n"));

    let (code, _, _) = run(&["table", "--n", "4", "--format", "json"]);
    assert_eq!(code, 2, "table has no json form");
}

#[test]
fn subwords_lists_occurrences_with_statistics() {
    let (code, out, _) = run(&["subwords", "--n", "4", "--sigma", "1324"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2, "the single letter occurs twice: {out}");
    assert_eq!(lines[0], "positions=[1] word=[2] d=0 h=3 g=1");
    assert_eq!(lines[1], "positions=[4] word=[2] d=0 h=3 g=1");

    let (code, out, _) = run(&["subwords", "--n", "4", "--sigma", "e"]);
    assert_eq!(code, 0);
    assert_eq!(out, "positions=[] word=[] d=0 h=4 g=0\n");

    // sigma not below v_n: an empty listing, not an error.
    let (code, out, _) = run(&["subwords", "--n", "4", "--sigma", "4321"]);
    assert_eq!((code, out.as_str()), (0, ""));

    let (code, out, _) = run(&[
        "subwords", "--n", "4", "--sigma", "1324", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["subwords"].as_array().unwrap().len(), 2);
    assert_eq!(value["subwords"][0]["positions"][0], 1);
    assert_eq!(value["subwords"][0]["h"], 3);
    assert_eq!(serde_json::to_string(&value).unwrap() + "\n", out);
}

#[test]
fn interval_lists_sorted_elements() {
    let (code, out, _) = run(&["interval", "312"]);
    assert_eq!(code, 0);
    assert_eq!(out, "123\n132\n213\n312\n");

    let (code, out, _) = run(&["interval", "312", "--format", "json"]);
    assert_eq!(code, 0);
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["size"], 4);
    assert_eq!(value["elements"][3], "312");

    let (code, _, _) = run(&["interval", "e"]);
    assert_eq!(code, 2, "no rank to infer");
}

#[test]
fn help_documents_the_grammar() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for needed in [
        "compute",
        "interval",
        "subwords",
        "verify",
        "table",
        "conjecture",
        "--cache",
        "--workers",
        "--force",
        "--format",
    ] {
        assert!(out.contains(needed), "help lacks {needed}:\n{out}");
    }
}
