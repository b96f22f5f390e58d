use std::fs;
use std::process::Command;

use topograph_cli::{run, EXIT_FAILURE, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("topograph").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn invariant_of_river_form() {
    let (code, out, _) = call(&["invariant", "1", "0", "-7"]);
    assert_eq!(code, 0);
    assert_eq!(out, "RIVER[-7,-6,1]\n");
}

#[test]
fn invariant_of_lake_pair() {
    let (_, out, _) = call(&["invariant", "6", "11", "0"]);
    assert_eq!(out, "LAKEPAIR[[-9,2],[-5,6]]\n");
}

#[test]
fn compare_swapped_lakes() {
    let (code, out, _) = call(&["compare", "5", "0", "0", "0", "0", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "EQUAL\nLAKE[5]\nLAKE[5]\n");
}

#[test]
fn compare_reports_difference() {
    let (_, out, _) = call(&["compare", "1", "0", "1", "1", "0", "2"]);
    assert!(out.starts_with("DIFFERENT\n"), "{out}");
    let (_, out, _) = call(&["compare", "2", "1", "3", "2", "-1", "3"]);
    assert!(out.starts_with("EQUAL\n"), "{out}");
}

#[test]
fn seifert_counterexample_report() {
    let (code, out, _) = call(&["seifert", "3", "5", "-1", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("V0 = [[15,8],[9,5]]"), "{out}");
    assert!(out.contains("V1 = [[15,3],[4,1]]"), "{out}");
    assert!(out.contains("forms: isomorphic"), "{out}");
    assert!(out.contains("distinguishable = false"), "{out}");
    assert!(out.contains("t0=196/3 t1=11"), "{out}");
}

#[test]
fn seifert_mirror_input() {
    let (code, out, _) = call(&["seifert", "3", "-4", "1", "-1"]);
    assert_eq!(code, 0);
    assert!(out.contains("mirror"), "{out}");
    assert!(out.contains("oriented_pair_distinct = true"), "{out}");
}

#[test]
fn seifert_rejects_common_factor() {
    let (code, _, err) = call(&["seifert", "2", "4", "0", "0"]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("coprime"), "{err}");
}

#[test]
fn scan_csv_to_stdout() {
    let (code, out, err) = call(&["scan", "2", "3", "--size", "2"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,n,distinguishable,type,orbit_key");
    assert_eq!(lines.len(), 1 + 25);
    assert!(lines[1].starts_with("-2,-2,"));
}

#[test]
fn scan_pixmap_and_split_panels() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("panel.ppm");
    let out_str = out.to_str().unwrap();
    let (code, _, err) = call(&[
        "scan", "3", "5", "--size", "4", "--format", "ppm", "--out", out_str, "--split",
    ]);
    assert_eq!(code, 0, "{err}");
    let bytes = fs::read(&out).unwrap();
    let header = b"P6\n9 9\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 9 * 9 * 3);
    for panel in ["well", "river", "factorizable"] {
        assert!(
            dir.path().join(format!("panel-{panel}.ppm")).exists(),
            "{panel}"
        );
    }
}

#[test]
fn scan_cache_is_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("orbits.tsv");
    let cache_str = cache.to_str().unwrap();
    let (code, first, err) = call(&[
        "scan", "2", "5", "--size", "5", "--cache", cache_str, "--jobs", "2",
    ]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&cache).unwrap();
    assert!(
        text.starts_with("# orbit-cache p=2 q=5 mode=one-sided\n"),
        "{text}"
    );
    let (code, second, err) = call(&["scan", "2", "5", "--size", "5", "--cache", cache_str]);
    assert_eq!(code, 0);
    assert!(err.contains(": 0 computed"), "{err}");
    assert_eq!(first, second);
    // the same cache cannot serve a two-sided scan
    let (code, _, err) = call(&[
        "scan",
        "2",
        "5",
        "--size",
        "5",
        "--cache",
        cache_str,
        "--two-sided",
    ]);
    assert_eq!(code, EXIT_FAILURE, "{err}");
}

#[test]
fn scan_reports_disagreements() {
    let (code, _, err) = call(&[
        "scan",
        "2",
        "3",
        "--size",
        "3",
        "--format",
        "ascii",
        "--report-disagreements",
    ]);
    assert_eq!(code, 0);
    assert!(
        err.contains("one-sided and two-sided comparisons differ at"),
        "{err}"
    );
}

#[test]
fn render_formats() {
    let (code, out, _) = call(&["render", "2", "1", "3", "--depth", "2", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph topograph {"), "{out}");
    let (code, out, _) = call(&["render", "1", "0", "-7", "--depth", "3"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("topograph of (1, 0, -7)"), "{out}");
    let (code, _, err) = call(&["render", "1", "0", "1", "--depth", "0"]);
    assert_eq!(code, EXIT_FAILURE, "{err}");
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["invariant", "1", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&["invariant", "1", "x", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["scan", "2", "3"]).0, EXIT_USAGE);
    assert_eq!(
        call(&["scan", "2", "3", "--size", "2", "--split"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        call(&["scan", "2", "3", "--size", "2", "--format", "gif"]).0,
        EXIT_USAGE
    );
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("invariant"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_topograph");
    let ok = Command::new(bin)
        .args(["invariant", "0", "7", "0"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "WEIR[7]\n");
    let usage = Command::new(bin).arg("invariant").output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
    assert!(!usage.stderr.is_empty());
    let failed = Command::new(bin)
        .args(["scan", "4", "6", "--size", "1"])
        .output()
        .unwrap();
    assert_eq!(failed.status.code(), Some(EXIT_FAILURE));
}
