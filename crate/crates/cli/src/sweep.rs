use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::commands::{execute, CliError, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use crate::config::RunConfig;
use crate::output::write_atomic;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(rename = "run")]
    pub runs: Vec<RunConfig>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub label: String,
    pub code: u8,
    pub message: Option<String>,
}

pub fn load(path: &Path) -> Result<SweepFile, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn run_one(cfg: &RunConfig, base: &Path) -> RunOutcome {
    let label = cfg.label();
    let Some(out) = &cfg.out else {
        return RunOutcome {
            label,
            code: EXIT_USAGE,
            message: Some("sweep runs need `out`".into()),
        };
    };
    let path: PathBuf = if out.is_absolute() { out.clone() } else { base.join(out) };
    match execute(cfg) {
        Ok(o) => match write_atomic(&path, &o.bytes) {
            Ok(()) => RunOutcome {
                label,
                code: o.code,
                message: None,
            },
            Err(e) => RunOutcome {
                label,
                code: EXIT_FAILURE,
                message: Some(format!("{}: {e}", path.display())),
            },
        },
        Err(e) => RunOutcome {
            label,
            code: e.code(),
            message: Some(e.to_string()),
        },
    }
}

/// Runs every entry on a pool of at most `jobs` threads; outcomes keep file order.
pub fn run(file: &SweepFile, base: &Path, jobs: Option<usize>) -> Result<Vec<RunOutcome>, CliError> {
    let n = jobs.or(file.jobs).unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?;
    Ok(pool.install(|| file.runs.par_iter().map(|c| run_one(c, base)).collect()))
}

pub fn exit_code(outcomes: &[RunOutcome]) -> u8 {
    outcomes
        .iter()
        .map(|o| o.code)
        .find(|&c| c != EXIT_OK)
        .unwrap_or(EXIT_OK)
}
