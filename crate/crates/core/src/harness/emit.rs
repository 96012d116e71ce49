//! Output files: `trajectories.csv`, `summary.csv`, `result.json` and the
//! non-deterministic `timing.json`. Each file is written to a temporary name
//! in the target directory and renamed into place.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::run::ExperimentResult;
use super::HarnessError;

fn io(path: &Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

/// Creates `dir` if needed and checks that files can be written there.
pub fn prepare_output_dir(dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let probe = dir.join(".icb-write-probe");
    std::fs::write(&probe, b"").map_err(|e| io(dir, e))?;
    std::fs::remove_file(&probe).map_err(|e| io(&probe, e))
}

/// Writes `bytes` to `path` via a sibling temp file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io(path, e))?;
    tmp.flush().map_err(|e| io(path, e))?;
    tmp.persist(path).map_err(|e| io(path, e.error))?;
    Ok(())
}

pub fn trajectories_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("t,seed,pseudo_regret\n");
    for s in &result.seeds {
        for (t, r) in result.checkpoints.iter().zip(&s.pseudo_regret) {
            writeln!(out, "{t},{},{r:?}", s.seed).unwrap();
        }
    }
    out
}

pub fn summary_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("t,mean,stderr,n_seeds\n");
    for row in &result.summary {
        writeln!(
            out,
            "{},{:?},{:?},{}",
            row.t, row.mean, row.stderr, row.n_seeds
        )
        .unwrap();
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, HarnessError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| HarnessError::Run(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn result_json(result: &ExperimentResult) -> Result<String, HarnessError> {
    to_json(result)
}

#[derive(Serialize)]
struct Timing<'a> {
    seeds: Vec<u64>,
    per_seed_seconds: &'a [f64],
    total_seconds: f64,
}

/// Writes every output file under `dir`, returning the paths written.
pub fn emit(result: &ExperimentResult, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    prepare_output_dir(dir)?;
    let timing = Timing {
        seeds: result.seeds.iter().map(|s| s.seed).collect(),
        per_seed_seconds: &result.wall_clock.per_seed_seconds,
        total_seconds: result.wall_clock.total_seconds,
    };
    let files = [
        ("trajectories.csv", trajectories_csv(result)),
        ("summary.csv", summary_csv(result)),
        ("result.json", result_json(result)?),
        ("timing.json", to_json(&timing)?),
    ];
    let mut written = Vec::with_capacity(files.len());
    for (name, body) in files {
        let path = dir.join(name);
        write_atomic(&path, body.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}
