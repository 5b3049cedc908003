//! Job-file driven front end. A run reads an optional JSON job, applies
//! command-line overrides, dispatches one command and writes a JSON result
//! document plus a Markdown report.

pub mod cache;
mod commands;
pub mod job;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::polyring::ParseError;

pub use cache::{sha256_hex, Cache, CacheStats, CACHE_DIR_ENV};
pub use job::{parse_field, parse_matrix_flag, split_list, Command, Entry, JobSpec};

pub const ENGINE_VERSION: &str = concat!("invlc ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{context}: {source}")]
    Parse { context: String, source: ParseError },
    #[error("job file: {0}")]
    JobFile(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{context}: {message}")]
    Engine { context: String, message: String },
    #[error("not stabilized: {0}")]
    NotStabilized(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotStabilized(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(name = "invlc", version, about = "Invariant rings and local cohomology with finite group actions")]
pub struct Args {
    pub command: Command,
    /// JSON job file; flags below override its fields.
    #[arg(long)]
    pub job: Option<PathBuf>,
    /// Q or GF(p).
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Group generator, rows separated by ';' and entries by ',' (repeatable).
    #[arg(long = "gen", allow_hyphen_values = true)]
    pub generators: Vec<String>,
    #[arg(long)]
    pub max_order: Option<usize>,
    /// Comma-separated ideal generators.
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: Option<String>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub deg_from: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub deg_to: Option<i64>,
    #[arg(long)]
    pub t_max: Option<u32>,
    #[arg(long)]
    pub window: Option<u32>,
    #[arg(long)]
    pub max_deg: Option<u32>,
    #[arg(long)]
    pub invariant_part: bool,
    /// Exit with status 3 if any requested piece did not stabilize.
    #[arg(long)]
    pub require_stable: bool,
    /// Comma-separated generators of the maximal ideal used for socles.
    #[arg(long, allow_hyphen_values = true)]
    pub m_gens: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub cases: Option<usize>,
    #[arg(long)]
    pub suite: Option<String>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Directory receiving result.json and report.md.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Ignore INVLC_CACHE_DIR.
    #[arg(long)]
    pub no_cache: bool,
}

impl Args {
    /// The job file with flag overrides applied.
    pub fn job(&self) -> Result<JobSpec, CliError> {
        let mut job = match &self.job {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
                JobSpec::from_json(&text)?
            }
            None => JobSpec::default(),
        };
        if let Some(c) = job.command {
            if c != self.command {
                log::warn!("job file names command {c}, running {} as requested", self.command);
            }
        }
        job.command = Some(self.command);
        if let Some(f) = &self.field {
            job.field = Some(parse_field(f)?);
        }
        if self.n.is_some() {
            job.n = self.n;
        }
        if !self.generators.is_empty() {
            job.group_generators = self.generators.iter().map(|g| parse_matrix_flag(g)).collect();
        }
        if let Some(ideal) = &self.ideal {
            job.ideal = split_list(ideal);
        }
        if let Some(m) = &self.m_gens {
            job.m_gens = split_list(m);
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if self.$f.is_some() { job.$f = self.$f.clone(); } )* };
        }
        take!(max_order, i, deg_from, deg_to, t_max, window, max_deg, seed, cases, suite);
        job.invariant_part |= self.invariant_part;
        job.require_stable |= self.require_stable;
        Ok(job)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultDocument {
    pub engine_version: String,
    pub command: Command,
    pub job: JobSpec,
    pub payload: Value,
    /// SHA-256 of the compact JSON encoding of `payload`.
    pub payload_sha256: String,
    pub provenance: Value,
    pub timing: Timing,
    pub cache: CacheStats,
    pub exit_code: i32,
    #[serde(skip)]
    pub markdown: String,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// Compact payload encoding; the byte sequence that is hashed.
    pub fn payload_json(&self) -> String {
        self.payload.to_string()
    }

    /// Human-readable report. Omits timing and cache statistics so that
    /// reports of identical runs are identical.
    pub fn markdown(&self) -> String {
        format!(
            "# invlc {}\n\n- engine: {}\n- payload sha256: `{}`\n- exit code: {}\n\n## Job\n\n```json\n{}\n```\n\n## Result\n\n{}\n## Provenance\n\n```json\n{}\n```\n",
            self.command,
            self.engine_version,
            self.payload_sha256,
            self.exit_code,
            self.job.to_json(),
            self.markdown,
            serde_json::to_string_pretty(&self.provenance).expect("provenance serializes"),
        )
    }
}

/// Validates and runs one job.
pub fn run(job: &JobSpec, cache: &Cache) -> Result<ResultDocument, CliError> {
    let command = job.command.ok_or_else(|| CliError::Validation("no command given".into()))?;
    let canonical = job.canonical()?;
    let start = Instant::now();
    let out = commands::execute(command, &canonical, cache)?;
    let payload_sha256 = sha256_hex(out.payload.to_string().as_bytes());
    Ok(ResultDocument {
        engine_version: ENGINE_VERSION.to_string(),
        command,
        job: canonical,
        payload: out.payload,
        payload_sha256,
        provenance: out.provenance,
        timing: Timing { wall_ms: start.elapsed().as_millis() },
        cache: cache.stats(),
        exit_code: out.exit_code,
        markdown: out.markdown,
    })
}

/// Runs `command` on a JSON job document using the environment's cache.
pub fn run_job_json(command: Command, job_json: &str) -> Result<ResultDocument, CliError> {
    let mut job = if job_json.trim().is_empty() { JobSpec::default() } else { JobSpec::from_json(job_json)? };
    job.command = Some(command);
    run(&job, &Cache::from_env())
}

fn write_outputs(doc: &ResultDocument, dir: &PathBuf) -> Result<(), CliError> {
    let io = |path: &PathBuf, e: std::io::Error| CliError::Io { path: path.display().to_string(), message: e.to_string() };
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let json_path = dir.join("result.json");
    fs::write(&json_path, doc.to_json() + "\n").map_err(|e| io(&json_path, e))?;
    let md_path = dir.join("report.md");
    fs::write(&md_path, doc.markdown()).map_err(|e| io(&md_path, e))
}

/// Full command-line entry point; returns the process exit code.
pub fn run_cli(args: &Args) -> i32 {
    let result = args.job().and_then(|job| {
        let cache = if args.no_cache { Cache::disabled() } else { Cache::from_env() };
        let doc = run(&job, &cache)?;
        if let Some(dir) = &args.out {
            write_outputs(&doc, dir)?;
        }
        Ok(doc)
    });
    match result {
        Ok(doc) => {
            let text = match args.format {
                Format::Json => doc.to_json() + "\n",
                Format::Markdown => doc.markdown(),
            };
            // A closed pipe is not an engine failure.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            doc.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Parse { source, .. } = &e {
                eprintln!("  {}", source.input);
                eprintln!("  {}^", " ".repeat(source.column.saturating_sub(1)));
            }
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(command: Command, text: &str) -> JobSpec {
        let mut j = JobSpec::from_json(text).unwrap();
        j.command = Some(command);
        j
    }

    #[test]
    fn group_info_for_sign_group() {
        let j = job(Command::GroupInfo, r#"{"group_generators": [[[-1, 0], [0, -1]]]}"#);
        let doc = run(&j, &Cache::disabled()).unwrap();
        assert_eq!(doc.payload["order"], 2);
        assert_eq!(doc.payload["in_sl"], true);
        assert_eq!(doc.payload["gorenstein_by_watanabe"], true);
        assert!(doc.markdown().contains(&doc.payload_sha256));
    }

    #[test]
    fn lc_flags_unstable_pieces() {
        let mut j = job(Command::Lc, r#"{"n": 2, "ideal": ["x"], "i": 1, "deg_from": 0, "deg_to": 0, "t_max": 6}"#);
        let doc = run(&j, &Cache::disabled()).unwrap();
        assert_eq!(doc.payload["pieces"][0]["status"], "NotStabilized");
        assert_eq!(doc.exit_code, 0);
        j.require_stable = true;
        assert_eq!(run(&j, &Cache::disabled()).unwrap().exit_code, 3);
    }

    #[test]
    fn invariant_part_needs_invariant_ideal() {
        let j = job(
            Command::Lc,
            r#"{"group_generators": [[[0, 1], [1, 0]]], "ideal": ["x"], "i": 1, "invariant_part": true}"#,
        );
        let err = run(&j, &Cache::disabled()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains('x'), "{err}");
    }

    #[test]
    fn flags_override_job_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.json");
        fs::write(&path, r#"{"n": 2, "ideal": ["x", "y"], "i": 2, "t_max": 5}"#).unwrap();
        let args = Args::parse_from([
            "invlc",
            "lc",
            "--job",
            path.to_str().unwrap(),
            "--t-max",
            "9",
            "--deg-from",
            "-3",
            "--deg-to",
            "-2",
        ]);
        let j = args.job().unwrap();
        assert_eq!(j.t_max, Some(9));
        assert_eq!(j.deg_from, Some(-3));
        assert_eq!(j.ideal, vec!["x".to_string(), "y".to_string()]);
    }
}
