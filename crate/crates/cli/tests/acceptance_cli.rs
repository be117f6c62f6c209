//! CLI acceptance: repeated runs of every fixture job produce byte-identical
//! artifacts, and the exit codes distinguish success, errors and infeasible
//! verdicts.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bertrand-lab")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Run one job into a fresh directory; return (exit code, artifact bytes
/// sorted by file name).
fn run_job(spec: &Path, dir: &Path, format: &str) -> (i32, Vec<(String, Vec<u8>)>) {
    std::fs::create_dir_all(dir).unwrap();
    let out = dir.join("job");
    let status = Command::new(bin())
        .arg("--spec")
        .arg(spec)
        .arg("--out")
        .arg(&out)
        .arg("--format")
        .arg(format)
        .output()
        .expect("binary runs");
    let mut artifacts = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_file() {
            let bytes = std::fs::read(&path).unwrap();
            // emitted reports must parse back as JSON
            if path.extension().is_some_and(|e| e == "json") {
                serde_json::from_slice::<serde_json::Value>(&bytes)
                    .unwrap_or_else(|e| panic!("{} is not valid JSON: {e}", path.display()));
            }
            artifacts.push((
                path.file_name().unwrap().to_string_lossy().into_owned(),
                bytes,
            ));
        }
    }
    artifacts.sort();
    (status.status.code().unwrap_or(-1), artifacts)
}

#[test]
fn criterion_10_cli_determinism_and_exit_codes() {
    let jobs: &[(&str, &str, i32)] = &[
        ("helix_classify_nn.json", "json", 0),
        ("helix_classify_tt.json", "json", 2),
        ("malformed_expr.json", "json", 1),
        ("circle_mate_planar.json", "both", 0),
        ("ellipse_evolute.json", "both", 0),
        ("framed_integrate_example.json", "both", 0),
        ("framed_classify_nu1_mu.json", "json", 0),
        ("framed_mate_mu_nu1.json", "both", 0),
        ("verify_small.json", "json", 0),
    ];
    let base = tempfile::tempdir().unwrap();
    for (name, format, want_code) in jobs {
        let spec = fixture(name);
        let (code_a, artifacts_a) = run_job(&spec, &base.path().join(format!("{name}.a")), format);
        let (code_b, artifacts_b) = run_job(&spec, &base.path().join(format!("{name}.b")), format);
        assert_eq!(code_a, *want_code, "{name}: exit code");
        assert_eq!(code_b, *want_code, "{name}: exit code on rerun");
        assert_eq!(
            artifacts_a.len(),
            artifacts_b.len(),
            "{name}: artifact count"
        );
        if *want_code != 1 {
            assert!(!artifacts_a.is_empty(), "{name}: no artifacts written");
        }
        for ((name_a, bytes_a), (name_b, bytes_b)) in artifacts_a.iter().zip(&artifacts_b) {
            assert_eq!(name_a, name_b, "{name}: artifact names differ");
            assert_eq!(
                bytes_a, bytes_b,
                "{name}: artifact {name_a} differs between runs"
            );
        }
        println!(
            "PASS criterion 10 [{name}]: exit {code_a}, {} byte-identical artifact(s)",
            artifacts_a.len()
        );
    }
}

#[test]
fn batch_mode_runs_specs_concurrently_with_isolated_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let status = Command::new(bin())
        .arg("--spec")
        .arg(fixture("helix_classify_nn.json"))
        .arg("--spec")
        .arg(fixture("helix_classify_tt.json"))
        .arg("--spec")
        .arg(fixture("circle_mate_planar.json"))
        .arg("--out")
        .arg(&out)
        .arg("--format")
        .arg("json")
        .arg("--jobs")
        .arg("3")
        .output()
        .expect("binary runs");
    // one job is infeasible, none error: batch exit is 2
    assert_eq!(status.status.code(), Some(2));
    for stem in [
        "helix_classify_nn",
        "helix_classify_tt",
        "circle_mate_planar",
    ] {
        let path = out.join(format!("{stem}.report.json"));
        assert!(path.is_file(), "missing {}", path.display());
    }
}

#[test]
fn tolerance_env_var_is_honored() {
    // an absurdly small tolerance scale makes the helix fit fail validation
    // far upstream, so the run must not succeed with exit 0
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("job");
    let status = Command::new(bin())
        .arg("--spec")
        .arg(fixture("helix_classify_nn.json"))
        .arg("--out")
        .arg(&out)
        .env("BERTRAND_LAB_TOL", "1e-12")
        .output()
        .expect("binary runs");
    let code = status.status.code().unwrap();
    assert_ne!(code, 0, "tolerance scale had no effect");
    // and a bogus value is a usage error
    let status = Command::new(bin())
        .arg("--spec")
        .arg(fixture("helix_classify_nn.json"))
        .env("BERTRAND_LAB_TOL", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(status.status.code(), Some(1));
}
