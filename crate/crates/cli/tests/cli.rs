use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derangements"))
        .args(args)
        .env("DERANGEMENTS_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn cache_file() -> (tempfile::TempDir, std::path::PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    (dir, path)
}

#[test]
fn count_by_every_method() {
    let (_dir, cache) = cache_file();
    for method in ["factorial", "derangement-basis", "genfunc", "brute"] {
        let out = run(&cache, &["count", "--composition", "4,2", "--method", method]);
        assert_eq!(out.status.code(), Some(0), "{method}");
        assert_eq!(json(&out)["count"], "7", "{method}");
    }
    let out = run(&cache, &["count", "--composition", "4,2", "--method", "brute", "--j", "0"]);
    assert_eq!(json(&out)["count"], "15");
    let out = run(&cache, &["count", "--composition", "4,2", "--mode", "dstar", "--j", "2"]);
    assert_eq!(json(&out)["count"], "2");
    let out = run(&cache, &["count", "--composition", "2,2,2", "--mode", "preimage", "--method", "members"]);
    assert_eq!(json(&out)["count"], "296");
}

#[test]
fn second_call_is_served_from_cache() {
    let (_dir, cache) = cache_file();
    let args = ["count", "--composition", "3,3", "--method", "genfunc"];
    let first = json(&run(&cache, &args));
    let second = json(&run(&cache, &args));
    assert_eq!(first["cached"], false);
    assert_eq!(second["cached"], true);
    assert_eq!(first["count"], second["count"]);
    let bypass = json(&run(&cache, &["--no-cache", "count", "--composition", "3,3", "--method", "genfunc"]));
    assert_eq!(bypass["cached"], false);
    let lines = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(lines.lines().count(), 1);
}

#[test]
fn corrupt_or_unwritable_cache_is_tolerated() {
    let (dir, cache) = cache_file();
    std::fs::write(&cache, "garbage\n{\"key\": 3}\n").unwrap();
    let out = run(&cache, &["count", "--composition", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cached"], false);

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = run(&blocker.join("cache.jsonl"), &["count", "--composition", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], "1");
}

#[test]
fn usage_errors_exit_two() {
    let (_dir, cache) = cache_file();
    for args in [
        vec!["count"],
        vec!["count", "--composition", "4,x"],
        vec!["count", "--composition", "4,2", "--method", "factorial", "--j", "1"],
        vec!["table", "--n-max", "3", "--format", "bfile"],
        vec!["bijection", "--map", "eta", "--k", "2", "--n", "4", "--lambda", "2", "--arg", "{}"],
        vec!["no-such-command"],
    ] {
        let out = run(&cache, &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_all_passes() {
    let (_dir, cache) = cache_file();
    let out = run(&cache, &["verify", "all", "--n-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    let out = run(&cache, &["verify", "correlation", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["correlation"]["summary"]["fail"], 0);
}

#[test]
fn table_formats() {
    let (_dir, cache) = cache_file();
    let out = run(&cache, &["table", "--n-max", "4", "--lambda", "2"]);
    assert_eq!(json(&out)["rows"][4][2], "19");
    let out = run(&cache, &["table", "--n-max", "4", "--lambda", "2", "--kind", "e", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "4,2,38"), "{text}");
    let out = run(&cache, &["table", "--n-max", "2", "--lambda", "0", "--format", "bfile"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0 1\n1 0\n2 1\n3 1\n4 1\n5 1\n");
}

#[test]
fn eta_example_round_trip() {
    let (_dir, cache) = cache_file();
    let fwd = run(
        &cache,
        &["bijection", "--map", "eta", "--k", "4", "--n", "8", "--lambda", "2", "--arg",
          r#"{"colour":2,"perm":{"perm":[5,4,2,3,6,1]}}"#],
    );
    let result = &json(&fwd)["result"];
    assert_eq!(result["display"], "76435281 {5:2}");
    let back = run(
        &cache,
        &["bijection", "--map", "eta-inverse", "--k", "4", "--lambda", "2", "--arg",
          &serde_json::to_string(&serde_json::json!({"perm": result["perm"], "colours": result["colours"]})).unwrap()],
    );
    let back = json(&back);
    assert_eq!(back["result"]["colour"], 2);
    assert_eq!(back["result"]["perm"]["perm"], serde_json::json!([5, 4, 2, 3, 6, 1]));
}

#[test]
fn lamfak_values() {
    let (_dir, cache) = cache_file();
    let out = json(&run(&cache, &["lamfak", "--n", "4", "--lambda", "0"]));
    assert_eq!(out["value"], "9");
    let out = json(&run(&cache, &["lamfak", "--composition", "3,3", "--lambda", "symbolic"]));
    assert_eq!(out["constant"], true);
    assert_eq!(out["value"], serde_json::json!(["324"]));
}
