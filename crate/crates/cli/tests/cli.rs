//! End-to-end tests of the `cosetal` binary: commands, file formats and
//! exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cosetal(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosetal"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn validate_accepts_catalog_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["z4", "m3", "s3"] {
        let path = fixtures_dir().join(format!("{name}.json"));
        let out = cosetal(&["validate", path.to_str().unwrap()], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert!(stdout(&out).contains("valid monoid"));
    }
}

#[test]
fn validate_rejects_a_broken_table_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"bad","elements":["a","b"],"identity":0,"table":[[1,0],[1,1]]}"#,
    )
    .unwrap();
    let out = cosetal(&["validate", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn unknown_monoid_name_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosetal(&["wact", "nope", "z2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wact_prints_the_three_pairs_over_two_z2() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosetal(&["wact", "two", "z2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("3 compatible pairs"));
}

#[test]
fn cohomology_reports_the_order_two_group() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosetal(&["cohomology", "z2", "z2", "--pair", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("H^2 of order 2"));
}

#[test]
fn classify_writes_a_schema_tagged_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = cosetal(
        &["classify", "two", "z2", "--out", report.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"schema\": \"cosetal-kit/1\""));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("oracle-counts: PASS"));
}

#[test]
fn classify_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    cosetal(
        &["classify", "z2", "z2", "--out", a.to_str().unwrap()],
        dir.path(),
    );
    cosetal(
        &["classify", "z2", "z2", "--out", b.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn oracle_cross_check_passes_on_the_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = cosetal(&["oracle", "two", "z2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("3 iso-class(es)"));
    assert!(!stdout(&out).contains("MISMATCH"));
}

/// Build the z4-as-extension-of-z2-by-z2 fixture on disk: G is the
/// catalog z4 with k = (0, 2) and e collapsing mod 2.
fn write_z4_extension(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(
        &path,
        concat!(
            "{\n",
            "  \"N\": \"z2\",\n",
            "  \"G\": \"z4\",\n",
            "  \"H\": \"z2\",\n",
            "  \"k\": [0, 2],\n",
            "  \"e\": [0, 1, 0, 1],\n",
            "  \"s\": null\n",
            "}\n"
        ),
    )
    .unwrap();
    path
}

#[test]
fn hom_counts_endomorphisms_of_the_z4_extension() {
    let dir = tempfile::tempdir().unwrap();
    let ext = write_z4_extension(dir.path(), "z4ext.json");
    let out = cosetal(
        &["hom", ext.to_str().unwrap(), ext.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("2 morphism(s)"));
}

#[test]
fn baer_sum_of_z4_with_itself_is_the_klein_class() {
    let dir = tempfile::tempdir().unwrap();
    let ext = write_z4_extension(dir.path(), "z4ext.json");
    let result = dir.path().join("sum.json");
    let out = cosetal(
        &[
            "baer",
            ext.to_str().unwrap(),
            ext.to_str().unwrap(),
            "--out",
            result.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // The nontrivial class doubles to zero; the result must be the
    // trivial (Klein-type) extension.
    assert!(stdout(&out).contains("= class 0"));
    let text = std::fs::read_to_string(&result).unwrap();
    assert!(text.contains("\"N\": \"z2\""));
    // The result monoid ships alongside and reloads as Klein.
    let g_file = dir.path().join("baer_z4_z4.json");
    let g = cosetal_core::io::read_monoid_file(&g_file).unwrap();
    assert!(cosetal_core::find_isomorphism(&g, &cosetal_core::fixtures::klein()).is_some());
}

#[test]
fn max_size_flag_lifts_the_oracle_cap() {
    let dir = tempfile::tempdir().unwrap();
    // Klein four as H is within the classify cap but beyond the default
    // oracle cap of three; --max-size raises both. The run stays fast
    // because a group H forces the fine relation.
    let refused = cosetal(&["classify", "klein", "z2"], dir.path());
    assert_eq!(refused.status.code(), Some(1));
    let allowed = cosetal(&["classify", "klein", "z2", "--max-size", "4"], dir.path());
    assert_eq!(
        allowed.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&allowed.stderr)
    );
}
