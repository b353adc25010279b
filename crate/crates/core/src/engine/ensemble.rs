use super::{Simulation, SimulationResult};
use crate::policy::ScenarioPreset;
use crate::progression::HealthState;
use crate::rng::{label_hash, StreamKey};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Days whose end the comparison table reports (weeks 1–4, 6, 8, 10, 12).
pub const WEEK_END_DAYS: [u32; 8] = [7, 14, 21, 28, 42, 56, 70, 84];

/// Seed of replication `index` under `base_seed`.
pub fn replication_seed(base_seed: u64, index: usize) -> u64 {
    StreamKey::root(base_seed).replication(index as u64).value()
}

/// Per-day mean and 95% confidence half-width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub mean: Vec<f64>,
    pub ci_half_width: Vec<f64>,
}

impl Series {
    fn from_runs(runs: &[&[u32]]) -> Series {
        let n = runs.len();
        let days = runs.first().map_or(0, |r| r.len());
        let mut mean = vec![0.0; days];
        let mut ci_half_width = vec![0.0; days];
        for d in 0..days {
            let m = runs.iter().map(|r| f64::from(r[d])).sum::<f64>() / n as f64;
            mean[d] = m;
            if n >= 2 {
                let var = runs.iter().map(|r| (f64::from(r[d]) - m).powi(2)).sum::<f64>() / (n - 1) as f64;
                ci_half_width[d] = 1.96 * var.sqrt() / (n as f64).sqrt();
            }
        }
        Series { mean, ci_half_width }
    }

    /// Mean at the end of 1-based `day`, if within the horizon.
    pub fn at_day(&self, day: u32) -> Option<(f64, f64)> {
        let i = (day as usize).checked_sub(1)?;
        Some((*self.mean.get(i)?, self.ci_half_width[i]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFinal {
    pub index: usize,
    pub seed: u64,
    pub campus: u32,
    pub all: u32,
    pub tests: u32,
    pub positives: u32,
    pub final_counts: BTreeMap<HealthState, u32>,
}

/// Aggregate of an ensemble. The headline series counts campus-acquired
/// infections; `all_sources` adds outside and initial infections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub scenario_hash: String,
    pub base_seed: u64,
    pub run_count: usize,
    pub horizon_days: usize,
    pub campus: Series,
    pub all_sources: Series,
    pub finals: Vec<RunFinal>,
}

/// An ensemble together with every replication's full series.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub result: EnsembleResult,
    pub runs: Vec<SimulationResult>,
}

fn aggregate(runs: Vec<SimulationResult>, base_seed: u64, scenario_hash: String) -> Ensemble {
    let campus: Vec<&[u32]> = runs.iter().map(|r| r.cumulative_campus.as_slice()).collect();
    let all: Vec<&[u32]> = runs.iter().map(|r| r.cumulative_all.as_slice()).collect();
    let finals = runs
        .iter()
        .enumerate()
        .map(|(index, r)| RunFinal {
            index,
            seed: r.seed,
            campus: r.final_campus(),
            all: r.final_all(),
            tests: r.tests,
            positives: r.positives,
            final_counts: r.final_counts.clone(),
        })
        .collect();
    let result = EnsembleResult {
        scenario_hash,
        base_seed,
        run_count: runs.len(),
        horizon_days: campus.first().map_or(0, |r| r.len()),
        campus: Series::from_runs(&campus),
        all_sources: Series::from_runs(&all),
        finals,
    };
    Ensemble { result, runs }
}

/// Runs `n_runs` replications on up to `parallelism` threads. Replication
/// `i` uses [`replication_seed`]`(base_seed, i)`, and results are
/// aggregated in index order, so the outcome does not depend on
/// `parallelism`. `progress` receives the number of finished runs.
pub fn run_ensemble(
    sim: &Simulation,
    n_runs: usize,
    base_seed: u64,
    parallelism: usize,
    scenario_hash: &str,
    progress: &(dyn Fn(usize) + Sync),
) -> Ensemble {
    let done = AtomicUsize::new(0);
    let job = || {
        (0..n_runs)
            .into_par_iter()
            .map(|i| {
                let r = sim.run(replication_seed(base_seed, i));
                progress(done.fetch_add(1, Ordering::SeqCst) + 1);
                r
            })
            .collect::<Vec<_>>()
    };
    let runs = match rayon::ThreadPoolBuilder::new().num_threads(parallelism.max(1)).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    };
    aggregate(runs, base_seed, scenario_hash.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub label: String,
    /// `(mean, ci_half_width)` at each reported day.
    pub cells: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub days: Vec<u32>,
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    /// Plain-text table of means, one row per preset.
    pub fn to_table(&self) -> String {
        let width = self.rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max(6);
        let mut out = format!("{:width$}", "policy");
        for d in &self.days {
            out.push_str(&format!(" {:>10}", format!("week {}", d / 7)));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{:width$}", row.label));
            for (m, _) in &row.cells {
                out.push_str(&format!(" {m:>10.2}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Week-end days reported for a horizon.
pub fn report_days(horizon_days: u32) -> Vec<u32> {
    WEEK_END_DAYS.iter().copied().filter(|&d| d <= horizon_days).collect()
}

/// Base seed for one preset in a comparison. With common random numbers
/// every preset shares `base_seed`.
pub fn preset_seed(base_seed: u64, preset_name: &str, common_random_numbers: bool) -> u64 {
    if common_random_numbers {
        base_seed
    } else {
        base_seed ^ label_hash(preset_name.as_bytes())
    }
}

impl ComparisonRow {
    pub fn from_result(name: &str, label: &str, result: &EnsembleResult, days: &[u32]) -> Self {
        let cells = days.iter().map(|&d| result.campus.at_day(d).unwrap_or((0.0, 0.0))).collect();
        ComparisonRow { name: name.to_string(), label: label.to_string(), cells }
    }
}

/// Runs each preset on the same campus and tabulates campus infections at
/// each week end within the horizon. With common random numbers every
/// preset uses the same replication seeds.
pub fn compare_scenarios(
    base: &Simulation,
    presets: &[ScenarioPreset],
    n_runs: usize,
    base_seed: u64,
    parallelism: usize,
    progress: &(dyn Fn(&str, usize) + Sync),
) -> (Comparison, Vec<Ensemble>) {
    let days = report_days(base.params.engine.horizon_days);
    let mut rows = Vec::new();
    let mut ensembles = Vec::new();
    for preset in presets {
        let seed = preset_seed(base_seed, &preset.name, base.params.engine.common_random_numbers);
        let sim = base.with_policy(preset.policy);
        let ens = run_ensemble(&sim, n_runs, seed, parallelism, &preset.name, &|k| progress(&preset.name, k));
        rows.push(ComparisonRow::from_result(&preset.name, &preset.label, &ens.result, &days));
        ensembles.push(ens);
    }
    (Comparison { days, rows }, ensembles)
}
