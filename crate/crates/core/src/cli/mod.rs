//! Scenario runner behind the `gyrocasimir` binary.
//!
//! Exit codes: 0 success, 1 schema error, 2 some point failed or did not
//! converge (files are still written), 3 I/O failure.

pub mod csv;
pub mod run;
pub mod scenario;

use std::path::{Path, PathBuf};

use clap::Parser;
use serde_json::Value;

pub use run::{execute, Output};
pub use scenario::{Scenario, Violation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Parser)]
#[command(name = "gyrocasimir", version, about = "Casimir force sweeps between gyrotropic half-spaces")]
pub struct Args {
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Output CSV; defaults to the scenario's `output` field.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Dotted-path override, e.g. `setup.gap_L=1e-7`. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Check the scenario and exit without computing.
    #[arg(long)]
    pub validate_only: bool,
}

#[derive(Debug)]
pub enum LoadError {
    Io(String),
    Schema(Vec<Violation>),
}

/// Reads, overrides, parses and validates a scenario.
pub fn load(path: &Path, overrides: &[String]) -> Result<Scenario, LoadError> {
    let src = std::fs::read_to_string(path).map_err(|e| LoadError::Io(format!("{}: {e}", path.display())))?;
    load_str(&src, overrides)
}

pub fn load_str(src: &str, overrides: &[String]) -> Result<Scenario, LoadError> {
    let mut doc: Value = serde_json::from_str(src).map_err(|e| {
        LoadError::Schema(vec![Violation {
            path: "<root>".into(),
            message: format!("not valid JSON: {e}"),
        }])
    })?;
    let mut bad: Vec<Violation> = overrides
        .iter()
        .filter_map(|o| scenario::apply_override(&mut doc, o).err())
        .collect();
    if !bad.is_empty() {
        return Err(LoadError::Schema(bad));
    }
    let s = scenario::parse(doc).map_err(|v| LoadError::Schema(vec![v]))?;
    bad = s.validate();
    if bad.is_empty() {
        Ok(s)
    } else {
        Err(LoadError::Schema(bad))
    }
}

/// Header block recorded at the top of every output table.
pub fn provenance(s: &Scenario, table: &str) -> Vec<(String, String)> {
    let doc = s.resolved_json();
    let mut h = vec![
        ("version".to_string(), VERSION.to_string()),
        ("command".to_string(), s.command().to_string()),
        ("table".to_string(), table.to_string()),
        ("scenario".to_string(), doc.to_string()),
    ];
    h.extend(scenario::flatten(&doc).into_iter().map(|(k, v)| (format!("scenario.{k}"), v)));
    h
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    out.with_file_name(format!("{stem}{suffix}{ext}"))
}

/// Writes every table of `output`; returns the paths written.
pub fn write_outputs(s: &Scenario, output: &Output, out: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (suffix, table) in &output.tables {
        let path = suffix.map_or_else(|| out.to_path_buf(), |sfx| sibling(out, sfx));
        let name = suffix.map_or("main", |sfx| sfx.trim_start_matches('_'));
        std::fs::write(&path, csv::render(&provenance(s, name), table))?;
        written.push(path);
    }
    Ok(written)
}

/// Full CLI behaviour; returns the process exit code.
pub fn run(args: &Args) -> i32 {
    let s = match load(&args.scenario, &args.overrides) {
        Ok(s) => s,
        Err(LoadError::Io(m)) => {
            eprintln!("error: cannot read scenario: {m}");
            return EXIT_IO;
        }
        Err(LoadError::Schema(v)) => {
            for x in &v {
                eprintln!("invalid: {x}");
            }
            return EXIT_SCHEMA;
        }
    };
    if args.validate_only {
        println!("ok: {} scenario is valid", s.command());
        return EXIT_OK;
    }
    let Some(out) = args.out.clone().or_else(|| s.output().map(PathBuf::from)) else {
        eprintln!("invalid: output: no --out given and the scenario has no `output` field");
        return EXIT_SCHEMA;
    };
    // fail before the (possibly long) computation rather than after it
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        if let Err(e) = std::fs::create_dir_all(dir) {
            eprintln!("error: cannot create {}: {e}", dir.display());
            return EXIT_IO;
        }
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_IO;
        }
    };
    let output = pool.install(|| execute(&s));
    match write_outputs(&s, &output, &out) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", out.display());
            return EXIT_IO;
        }
    }
    if output.all_converged {
        EXIT_OK
    } else {
        eprintln!("warning: some points failed or did not converge; see the `converged` column");
        EXIT_NOT_CONVERGED
    }
}

/// Parses `std::env::args` and runs. Argument errors map to the schema exit
/// code; `--help` and `--version` exit 0.
pub fn main() -> i32 {
    match Args::try_parse() {
        Ok(a) => run(&a),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
