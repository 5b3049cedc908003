use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command as Process, Output};

use invlc::cli::{self, Cache, JobSpec};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn golden_jobs() -> Vec<(String, JobSpec)> {
    let mut jobs: Vec<_> = fs::read_dir(golden_dir())
        .unwrap()
        .filter_map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name()?.to_str()?.strip_suffix(".job.json")?.to_string();
            Some((name, JobSpec::from_json(&fs::read_to_string(&path).unwrap()).unwrap()))
        })
        .collect();
    jobs.sort_by(|a, b| a.0.cmp(&b.0));
    jobs
}

fn pretty_payload(job: &JobSpec) -> String {
    let doc = cli::run(job, &Cache::disabled()).unwrap();
    serde_json::to_string_pretty(&doc.payload).unwrap() + "\n"
}

/// Set `UPDATE_GOLDEN=1` to rewrite the expected payloads.
#[test]
fn golden_payloads() {
    let jobs = golden_jobs();
    assert_eq!(jobs.len(), 7, "one golden job per command");
    for (name, job) in jobs {
        let path = golden_dir().join(format!("{name}.payload.json"));
        let actual = pretty_payload(&job);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            fs::write(&path, &actual).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(actual, expected, "payload of {name} changed");
    }
}

#[test]
fn docs_show_every_golden_example() {
    let docs = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/cli.md")).unwrap();
    for (name, _) in golden_jobs() {
        let job = fs::read_to_string(golden_dir().join(format!("{name}.job.json"))).unwrap();
        let payload = fs::read_to_string(golden_dir().join(format!("{name}.payload.json"))).unwrap();
        assert!(docs.contains(job.trim()), "docs/cli.md lacks the {name} job");
        assert!(docs.contains(payload.trim()), "docs/cli.md lacks the {name} payload");
    }
}

fn invlc(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Process::new(env!("CARGO_BIN_EXE_invlc"));
    cmd.args(args).env_remove(cli::CACHE_DIR_ENV).env("RUST_LOG", "warn");
    if let Some(dir) = cache {
        cmd.env(cli::CACHE_DIR_ENV, dir);
    }
    cmd.output().unwrap()
}

fn payload_of(out: &Output) -> serde_json::Value {
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    doc["payload"].clone()
}

#[test]
fn malformed_polynomial_reports_column() {
    let out = invlc(&["lc", "--n", "2", "--ideal", "x^^2", "--i", "1"], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("column 3") && err.contains("x^^2"), "{err}");
}

#[test]
fn validation_errors_exit_two() {
    let out = invlc(&["lc", "--gen", "0,1;1,0", "--ideal", "x", "--i", "1", "--invariant-part"], None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("invariant"), "{err}");
    let out = invlc(&["molien", "--field", "GF(7)", "--gen", "2,0;0,2"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = invlc(&["group-info", "--gen", "1,q;0,1"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"q\""));
}

#[test]
fn demanded_stabilization_exits_three() {
    let args = ["lc", "--n", "2", "--ideal", "x", "--i", "1", "--deg-from", "0", "--deg-to", "0", "--t-max", "12"];
    let lenient = invlc(&args, None);
    assert_eq!(lenient.status.code(), Some(0));
    assert_eq!(payload_of(&lenient)["pieces"][0]["status"], "NotStabilized");
    let mut strict = args.to_vec();
    strict.push("--require-stable");
    assert_eq!(invlc(&strict, None).status.code(), Some(3));
}

#[test]
fn cold_warm_and_tampered_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["invariants", "--gen", "0,-1;1,0", "--max-deg", "10"];
    let cold = invlc(&args, Some(dir.path()));
    let warm = invlc(&args, Some(dir.path()));
    assert_eq!(cold.status.code(), Some(0));
    let warm_doc: serde_json::Value = serde_json::from_slice(&warm.stdout).unwrap();
    assert!(warm_doc["cache"]["hits"].as_u64().unwrap() > 0);
    assert_eq!(payload_of(&cold), payload_of(&warm));

    for entry in fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen("x", "y", 1)).unwrap();
    }
    let tampered = invlc(&args, Some(dir.path()));
    assert_eq!(tampered.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&tampered.stderr).contains("discarding"));
    assert_eq!(payload_of(&tampered), payload_of(&cold));
}

#[test]
fn out_directory_holds_json_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = invlc(&["group-info", "--gen", "-1,0;0,-1", "--out", out_dir.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out_dir.join("result.json")).unwrap()).unwrap();
    let report = fs::read_to_string(out_dir.join("report.md")).unwrap();
    assert!(report.contains(doc["payload_sha256"].as_str().unwrap()));
    assert_eq!(doc["payload"]["gorenstein_by_watanabe"], true);
}

#[test]
fn job_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    fs::write(&job, r#"{"n": 2, "ideal": ["x", "y"], "i": 2, "deg_from": -3, "deg_to": -2}"#).unwrap();
    let out = invlc(&["lc", "--job", job.to_str().unwrap(), "--deg-from", "-5"], None);
    assert_eq!(out.status.code(), Some(0));
    let dims: Vec<u64> =
        payload_of(&out)["pieces"].as_array().unwrap().iter().map(|p| p["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![4, 3, 2, 1]);
}
