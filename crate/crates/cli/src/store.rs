//! Results directory. Each ensemble lives in its own subdirectory named by
//! scenario hash, seed and run count, so identical requests share files.

use campus_core::engine::{Ensemble, EnsembleResult};
use campus_core::export::{read_json, write_csv, write_json, write_runs_csv, ExportError};
use campus_core::scenario::ScenarioConfig;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

pub const RESULT_JSON: &str = "result.json";
pub const RESULT_CSV: &str = "result.csv";
pub const RUNS_CSV: &str = "runs.csv";
pub const SCENARIO_TOML: &str = "scenario.toml";

/// Identifier of an ensemble: `<scenario hash>-<seed>-<runs>`.
pub fn run_id(scenario_hash: &str, seed: u64, runs: usize) -> String {
    format!("{scenario_hash}-{seed}-{runs}")
}

/// Writes the ensemble files into `dir`, creating it if needed.
pub fn write_ensemble(dir: &Path, ensemble: &Ensemble, config: &ScenarioConfig) -> Result<(), ExportError> {
    fs::create_dir_all(dir)?;
    write_json(&ensemble.result, BufWriter::new(fs::File::create(dir.join(RESULT_JSON))?))?;
    write_csv(&ensemble.result, BufWriter::new(fs::File::create(dir.join(RESULT_CSV))?))?;
    write_runs_csv(&ensemble.runs, BufWriter::new(fs::File::create(dir.join(RUNS_CSV))?))?;
    fs::write(dir.join(SCENARIO_TOML), config.to_toml_string())?;
    Ok(())
}

/// Ids name files, so only ASCII letters, digits and `-` are accepted.
pub fn is_safe_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 128 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

#[derive(Debug, Clone)]
pub struct ResultStore {
    root: PathBuf,
}

impl ResultStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ResultStore { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn results_dir(&self) -> PathBuf {
        self.root.join("results")
    }

    pub fn scenarios_dir(&self) -> PathBuf {
        self.root.join("scenarios")
    }

    pub fn contains(&self, run_id: &str) -> bool {
        is_safe_id(run_id) && self.results_dir().join(run_id).join(RESULT_JSON).is_file()
    }

    pub fn load(&self, run_id: &str) -> Option<EnsembleResult> {
        if !is_safe_id(run_id) {
            return None;
        }
        let file = fs::File::open(self.results_dir().join(run_id).join(RESULT_JSON)).ok()?;
        read_json(std::io::BufReader::new(file)).ok()
    }

    /// Writes into a staging directory and renames it into place, so a
    /// result is either absent or complete.
    pub fn save(&self, run_id: &str, ensemble: &Ensemble, config: &ScenarioConfig) -> Result<(), ExportError> {
        let staging = self.root.join("staging").join(run_id);
        if staging.exists() {
            fs::remove_dir_all(&staging)?;
        }
        write_ensemble(&staging, ensemble, config)?;
        let target = self.results_dir().join(run_id);
        fs::create_dir_all(self.results_dir())?;
        if target.exists() {
            fs::remove_dir_all(&target)?;
        }
        fs::rename(&staging, &target)?;
        Ok(())
    }
}
