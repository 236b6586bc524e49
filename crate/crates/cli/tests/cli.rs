use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bsc-verify"));
    c.env_remove("BSC_THREADS").env_remove("BSC_CACHE_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bsc-verify-test-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn listed() -> BTreeSet<String> {
    let out = run(&["--list-checks"]);
    assert!(out.status.success());
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.trim_end_matches(" (exploratory)").to_string())
        .collect()
}

#[test]
fn base_configuration_passes() {
    let cache = scratch("base");
    let out = run(&[
        "--q",
        "3",
        "--D",
        "3",
        "--N",
        "7",
        "--k",
        "2",
        "--checks",
        "all",
        "--cache-dir",
        cache.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = report(&out);
    assert!(r["summary"]["pass"].as_u64().unwrap() >= 40);
    assert_eq!(r["summary"]["fail"], 0);
    assert_eq!(r["config"]["D"], 3);

    let names = listed();
    for c in r["checks"].as_array().unwrap() {
        let name = c["name"].as_str().unwrap();
        assert!(names.contains(name), "{name} missing from the catalog");
        assert!(
            !c["identity"].as_str().unwrap().is_empty(),
            "{name} has no identity"
        );
        assert!(c.get("elapsed_ms").is_none());
    }
    // the second run reuses the cached BFS audit and neighborhood
    assert!(std::fs::read_dir(&cache).unwrap().count() >= 2);
    let again = run(&["--cache-dir", cache.to_str().unwrap()]);
    assert_eq!(again.stdout, out.stdout);
    std::fs::remove_dir_all(cache).ok();
}

#[test]
fn invalid_configurations_exit_two() {
    for args in [
        &["--q", "3", "--D", "3", "--N", "7", "--k", "3"][..],
        &["--q", "2"],
        &["--q", "9"],
        &["--D", "3", "--N", "6"],
        &["--checks", "no-such-check"],
        &["--n-max-words", "0"],
        &["--pair", "explicit"],
        &[
            "--pair",
            "explicit",
            "--x",
            "000;000;000",
            "--y",
            "100;000;000",
        ],
        &[
            "--pair",
            "explicit",
            "--x",
            "0000;0000;0000",
            "--y",
            "1000;0000;0000",
        ],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn catalog_lists_required_checks() {
    let out = String::from_utf8(run(&["--list-checks"]).stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    for want in [
        "thm-bbalanced",
        "prop-omega-eigen",
        "conj-sym-star-sym (exploratory)",
        "strengthened-bsc-6",
    ] {
        assert!(lines.contains(&want), "{want}");
    }
    let unique: BTreeSet<_> = lines.iter().collect();
    assert_eq!(unique.len(), lines.len());
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let sel = "local-triangle,e-gram-closed-form,s-cross-validation,thm-bbalanced";
    let one = run(&[
        "--checks",
        sel,
        "--threads",
        "1",
        "--pair",
        "random",
        "--seed",
        "11",
    ]);
    let four = bin()
        .args(["--checks", sel, "--pair", "random", "--seed", "11"])
        .env("BSC_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let names: Vec<_> = report(&one)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].clone())
        .collect();
    assert_eq!(names.len(), 4);
}

#[test]
fn heavy_checks_are_skipped_without_opt_in() {
    let out = run(&["--checks", "heavy-calibration,conj-sym-star-sym"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "skipped");
        assert!(c["witness"].as_str().unwrap().contains("--heavy"));
    }
    assert_eq!(r["summary"]["skipped"], 2);
}

#[test]
fn explicit_pair_and_export() {
    let dir = scratch("export");
    let (path, model) = (dir.join("report.json"), dir.join("model.json"));
    let out = run(&[
        "--pair",
        "explicit",
        "--x",
        "0000;0000;0000",
        "--y",
        "1000;0100;0000",
        "--checks",
        "s-g-positive,n-commute",
        "--timings",
        "--report",
        path.to_str().unwrap(),
        "--export",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["config"]["pair"], "explicit");
    assert!(r["checks"][0]["elapsed_ms"].is_u64());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert!(m.is_object());
    std::fs::remove_dir_all(dir).ok();
}
