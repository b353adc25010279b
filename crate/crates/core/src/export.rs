//! Ensemble result files.
//!
//! JSON is the serialized [`EnsembleResult`]. The delimited form starts
//! with `#`-prefixed metadata lines, followed by one table whose `kind`
//! column is `day` (per-day mean and half-width, 1-based day) or `run`
//! (per-replication final counts). Both formats read back to an equal
//! value.

use crate::engine::{EnsembleResult, RunFinal, Series, SimulationResult};
use crate::progression::HealthState;
use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed results file: {0}")]
    Format(String),
}

const STATE_COLUMNS: [(HealthState, &str); 8] = [
    (HealthState::Susceptible, "susceptible"),
    (HealthState::Incubating, "incubating"),
    (HealthState::TransmittingPresymptomatic, "transmitting_presymptomatic"),
    (HealthState::Asymptomatic, "asymptomatic"),
    (HealthState::Symptomatic, "symptomatic"),
    (HealthState::Quarantined, "quarantined"),
    (HealthState::RemovedSevere, "removed_severe"),
    (HealthState::Recovered, "recovered"),
];

const FIXED_COLUMNS: [&str; 11] =
    ["kind", "index", "campus_mean", "campus_ci", "all_mean", "all_ci", "seed", "campus", "all", "tests", "positives"];

pub fn write_json<W: Write>(result: &EnsembleResult, w: W) -> Result<(), ExportError> {
    serde_json::to_writer_pretty(w, result)?;
    Ok(())
}

pub fn read_json<R: Read>(r: R) -> Result<EnsembleResult, ExportError> {
    Ok(serde_json::from_reader(r)?)
}

pub fn write_csv<W: Write>(result: &EnsembleResult, mut w: W) -> Result<(), ExportError> {
    writeln!(w, "# scenario_hash={}", result.scenario_hash)?;
    writeln!(w, "# base_seed={}", result.base_seed)?;
    writeln!(w, "# run_count={}", result.run_count)?;
    writeln!(w, "# horizon_days={}", result.horizon_days)?;
    let mut out = csv::Writer::from_writer(w);
    let header: Vec<&str> = FIXED_COLUMNS.iter().copied().chain(STATE_COLUMNS.iter().map(|(_, n)| *n)).collect();
    out.write_record(&header)?;
    let blank = || String::new();
    for d in 0..result.horizon_days {
        let mut row = vec![
            "day".to_string(),
            (d + 1).to_string(),
            result.campus.mean[d].to_string(),
            result.campus.ci_half_width[d].to_string(),
            result.all_sources.mean[d].to_string(),
            result.all_sources.ci_half_width[d].to_string(),
        ];
        row.resize(header.len(), blank());
        out.write_record(&row)?;
    }
    for f in &result.finals {
        let mut row = vec!["run".to_string(), f.index.to_string()];
        row.extend(std::iter::repeat_with(blank).take(4));
        row.extend([
            f.seed.to_string(),
            f.campus.to_string(),
            f.all.to_string(),
            f.tests.to_string(),
            f.positives.to_string(),
        ]);
        for (state, _) in STATE_COLUMNS {
            row.push(f.final_counts.get(&state).map(|c| c.to_string()).unwrap_or_default());
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

fn parse<T: std::str::FromStr>(field: &str, what: &str) -> Result<T, ExportError> {
    field.parse().map_err(|_| ExportError::Format(format!("bad {what}: {field:?}")))
}

pub fn read_csv<R: Read>(r: R) -> Result<EnsembleResult, ExportError> {
    let mut reader = BufReader::new(r);
    let mut meta = BTreeMap::new();
    let mut body = String::new();
    let mut line = String::new();
    while reader.read_line(&mut line)? > 0 {
        match line.strip_prefix("# ") {
            Some(kv) => {
                let (k, v) = kv.trim_end().split_once('=').ok_or_else(|| ExportError::Format(line.clone()))?;
                meta.insert(k.to_string(), v.to_string());
            }
            None => body.push_str(&line),
        }
        line.clear();
    }
    let get = |k: &str| meta.get(k).cloned().ok_or_else(|| ExportError::Format(format!("missing {k}")));
    let horizon_days: usize = parse(&get("horizon_days")?, "horizon_days")?;
    let mut result = EnsembleResult {
        scenario_hash: get("scenario_hash")?,
        base_seed: parse(&get("base_seed")?, "base_seed")?,
        run_count: parse(&get("run_count")?, "run_count")?,
        horizon_days,
        campus: Series { mean: Vec::with_capacity(horizon_days), ci_half_width: Vec::with_capacity(horizon_days) },
        all_sources: Series { mean: Vec::with_capacity(horizon_days), ci_half_width: Vec::with_capacity(horizon_days) },
        finals: Vec::new(),
    };
    let mut csv_reader = csv::Reader::from_reader(body.as_bytes());
    for rec in csv_reader.records() {
        let rec = rec?;
        match &rec[0] {
            "day" => {
                result.campus.mean.push(parse(&rec[2], "campus_mean")?);
                result.campus.ci_half_width.push(parse(&rec[3], "campus_ci")?);
                result.all_sources.mean.push(parse(&rec[4], "all_mean")?);
                result.all_sources.ci_half_width.push(parse(&rec[5], "all_ci")?);
            }
            "run" => {
                let mut final_counts = BTreeMap::new();
                for (k, (state, _)) in STATE_COLUMNS.iter().enumerate() {
                    let field = &rec[FIXED_COLUMNS.len() + k];
                    if !field.is_empty() {
                        final_counts.insert(*state, parse(field, "state count")?);
                    }
                }
                result.finals.push(RunFinal {
                    index: parse(&rec[1], "index")?,
                    seed: parse(&rec[6], "seed")?,
                    campus: parse(&rec[7], "campus")?,
                    all: parse(&rec[8], "all")?,
                    tests: parse(&rec[9], "tests")?,
                    positives: parse(&rec[10], "positives")?,
                    final_counts,
                });
            }
            other => return Err(ExportError::Format(format!("unknown row kind {other:?}"))),
        }
    }
    if result.campus.mean.len() != horizon_days {
        return Err(ExportError::Format(format!(
            "expected {horizon_days} day rows, found {}",
            result.campus.mean.len()
        )));
    }
    Ok(result)
}

/// Per-replication daily series, one row per (run, day).
pub fn write_runs_csv<W: Write>(runs: &[SimulationResult], w: W) -> Result<(), ExportError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["run", "seed", "day", "cumulative_campus", "cumulative_all", "new_campus"])?;
    for (i, r) in runs.iter().enumerate() {
        for d in 0..r.cumulative_campus.len() {
            out.write_record([
                i.to_string(),
                r.seed.to_string(),
                (d + 1).to_string(),
                r.cumulative_campus[d].to_string(),
                r.cumulative_all[d].to_string(),
                r.new_campus[d].to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}
