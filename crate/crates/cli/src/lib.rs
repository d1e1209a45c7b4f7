//! Batch front end for the fluxquant models: scenario parsing, dispatch and
//! artifact writing.
//!
//! Exit codes: 10 syntax error, 11 unknown key, 12 invalid value, 20 model
//! failure, 30 file I/O.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use fluxquant::constants::PhysicalConstants;
use fluxquant::materials::catalog;
use rayon::prelude::*;

pub use config::{parse_config, Kind, Params, ScenarioConfig};
pub use error::CliError;
pub use run::{render_scenario, run_scenario, Artifact};

/// Read and validate a scenario file.
pub fn load_config(path: &Path, default_kind: Option<Kind>) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, base, default_kind)
}

/// Command-line values that take precedence over the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Where a scenario writes: `--out` itself for a single scenario,
/// `--out/<stem>` for several, else the file's `output_dir`, else
/// `out/<stem>`.
pub fn output_dir_for(
    cfg: &ScenarioConfig,
    source: Option<&Path>,
    out: Option<&Path>,
    several: bool,
) -> PathBuf {
    let stem = source
        .and_then(Path::file_stem)
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| cfg.kind.section().to_string());
    match (out, &cfg.output_dir) {
        (Some(o), _) if several => o.join(stem),
        (Some(o), _) => o.to_path_buf(),
        (None, Some(d)) => d.clone(),
        (None, None) => Path::new("out").join(stem),
    }
}

#[derive(Debug)]
pub struct Outcome {
    /// Scenario file, or `<defaults>` for a bare subcommand.
    pub source: String,
    pub result: Result<Vec<PathBuf>, CliError>,
}

fn execute_one(
    source: Option<&Path>,
    kind: Option<Kind>,
    overrides: &Overrides,
    several: bool,
) -> Result<Vec<PathBuf>, CliError> {
    let mut cfg = match source {
        Some(path) => load_config(path, kind)?,
        None => parse_config("", Path::new("."), kind)?,
    };
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    let dir = output_dir_for(&cfg, source, overrides.out.as_deref(), several);
    run_scenario(&cfg, &dir)
}

/// Run scenario files on up to `jobs` threads; outcomes keep input order.
/// With no files, `kind` runs once on its defaults.
pub fn execute(
    configs: &[PathBuf],
    kind: Option<Kind>,
    overrides: &Overrides,
    jobs: usize,
) -> Vec<Outcome> {
    if configs.is_empty() {
        return vec![Outcome {
            source: "<defaults>".into(),
            result: execute_one(None, kind, overrides, false),
        }];
    }
    let several = configs.len() > 1;
    let work = || {
        configs
            .par_iter()
            .map(|path| Outcome {
                source: path.display().to_string(),
                result: execute_one(Some(path), kind, overrides, several),
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// Table of the built-in materials.
pub fn materials_listing() -> String {
    let c = PhysicalConstants::codata();
    let mut out = format!(
        "{:<6} {:<8} {:>8} {:>12} {:>12} {:>12}\n",
        "key", "kind", "tc_K", "lambda_l_m", "delta_eV", "sigma_n_S/m"
    );
    for (key, m) in catalog() {
        let _ = writeln!(
            out,
            "{:<6} {:<8} {:>8.3} {:>12.3e} {:>12.3e} {:>12.3e}",
            key,
            m.kind.label(),
            m.tc,
            m.lambda_l,
            m.delta / c.e(),
            m.sigma_n
        );
    }
    out
}

pub fn constants_listing() -> String {
    let c = PhysicalConstants::codata();
    let mut out = String::new();
    for (name, value, unit) in [
        ("h", c.h(), "J s"),
        ("hbar", c.hbar(), "J s"),
        ("e", c.e(), "C"),
        ("mu0", c.mu0(), "N/A^2"),
        ("kB", c.kb(), "J/K"),
        ("phi0", c.phi0(), "Wb"),
    ] {
        let _ = writeln!(out, "{name:<5} = {value:e} {unit}");
    }
    out
}
