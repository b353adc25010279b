use crate::store::write_ensemble;
use campus_core::engine::{preset_seed, report_days, run_ensemble, Comparison, ComparisonRow};
use campus_core::net::{write_enrollment, NetError};
use campus_core::policy::{experiment_presets, find_preset, sunrise_presets, ScenarioPreset};
use campus_core::scenario::{CampusSource, ScenarioConfig};
use campus_core::synthetic::{generate_synthetic_campus, SyntheticCampusParams, DESK_SCALE};
use clap::{Args, ValueEnum};
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Network(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Network(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Infeasible generation maps to the network exit code; malformed
/// enrollment data and bad parameters are configuration errors.
pub fn network_error(e: NetError) -> CliError {
    match e {
        NetError::Infeasible(_)
        | NetError::Unbalanced { .. }
        | NetError::NonSimplifiable { .. }
        | NetError::CapacityExhausted(_) => CliError::Network(format!("network generation failed: {e}")),
        NetError::Parse { .. }
        | NetError::DuplicateEnrollment { .. }
        | NetError::InvalidParams(_)
        | NetError::Io(_) => CliError::Config(format!("enrollment: {e}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CampusArg {
    Synthetic,
    File,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario file (TOML). Defaults apply when omitted.
    pub scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub runs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub parallel: Option<usize>,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// A preset name, `sunrise-all` or `experiments-all`.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub campus: Option<CampusArg>,
    /// Enrollment file for `--campus file`.
    #[arg(long)]
    pub enrollment: Option<PathBuf>,
    /// Suppress progress output.
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = DESK_SCALE)]
    pub scale: f64,
    #[arg(long, default_value_t = 2020)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub departments: u16,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn default_parallelism() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    ScenarioConfig::from_toml_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Expands `--preset` into the list of policies to run.
pub fn resolve_presets(arg: Option<&str>, config: &ScenarioConfig) -> Result<Vec<ScenarioPreset>, CliError> {
    let horizon = config.engine.horizon_days;
    match arg {
        None => Ok(vec![ScenarioPreset { name: "scenario".into(), label: "Scenario".into(), policy: config.policy() }]),
        Some("sunrise-all") => Ok(sunrise_presets(horizon)),
        Some("experiments-all") => Ok(experiment_presets()),
        Some(name) => find_preset(name, horizon).map(|p| vec![p]).ok_or_else(|| {
            let known: Vec<String> =
                sunrise_presets(horizon).into_iter().chain(experiment_presets()).map(|p| p.name).collect();
            CliError::Config(format!(
                "unknown preset `{name}`; expected sunrise-all, experiments-all or one of: {}",
                known.join(", ")
            ))
        }),
    }
}

struct Progress {
    enabled: bool,
}

impl Progress {
    fn report(&self, name: &str, done: usize, total: usize) {
        if self.enabled && (done == total || done.is_multiple_of((total / 50).max(1))) {
            let mut err = std::io::stderr().lock();
            let _ = write!(err, "\r{name}: {done}/{total} runs");
            if done == total {
                let _ = writeln!(err);
            }
        }
    }
}

/// Runs one ensemble per selected preset, writes result files under
/// `--out` and returns the week-end comparison table.
pub fn run(args: &RunArgs) -> Result<Comparison, CliError> {
    let (mut config, base_dir) = match &args.scenario {
        Some(path) => (load_scenario(path)?, path.parent().map(Path::to_path_buf)),
        None => (ScenarioConfig::default(), None),
    };
    if let Some(campus) = args.campus {
        config.network.source = match campus {
            CampusArg::Synthetic => CampusSource::Synthetic,
            CampusArg::File => CampusSource::File,
        };
    }
    if let Some(path) = &args.enrollment {
        config.network.enrollment = Some(std::path::absolute(path)?);
    }
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    if args.runs == 0 {
        return Err(CliError::Config("--runs must be at least 1".into()));
    }
    let presets = resolve_presets(args.preset.as_deref(), &config)?;

    let net = Arc::new(config.load_network(base_dir.as_deref()).map_err(network_error)?);
    let parallelism = args.parallel.unwrap_or_else(default_parallelism);
    let progress = Progress { enabled: !args.quiet && std::io::stderr().is_terminal() };
    if !args.quiet {
        eprintln!(
            "campus: {} students, {} classes; {} runs x {} scenario(s), seed {}",
            net.student_count(),
            net.classes().len(),
            args.runs,
            presets.len(),
            args.seed
        );
    }

    let days = report_days(config.engine.horizon_days);
    let mut rows = Vec::new();
    std::fs::create_dir_all(&args.out)?;
    for preset in &presets {
        let mut cfg = config.clone();
        cfg.set_policy(preset.policy);
        let hash = cfg.content_hash();
        let seed = preset_seed(args.seed, &preset.name, cfg.engine.common_random_numbers);
        let sim = cfg.simulation(Arc::clone(&net));
        let ensemble =
            run_ensemble(&sim, args.runs, seed, parallelism, &hash, &|k| progress.report(&preset.name, k, args.runs));
        write_ensemble(&args.out.join(&preset.name), &ensemble, &cfg).map_err(|e| CliError::Io(e.to_string()))?;
        rows.push(ComparisonRow::from_result(&preset.name, &preset.label, &ensemble.result, &days));
    }
    let comparison = Comparison { days, rows };
    let file = std::fs::File::create(args.out.join("comparison.json"))?;
    serde_json::to_writer_pretty(file, &comparison).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(comparison)
}

/// Writes a synthetic enrollment file and returns a one-line summary.
pub fn generate_campus(args: &GenerateArgs) -> Result<String, CliError> {
    let params = SyntheticCampusParams { scale: args.scale, departments: args.departments, ..Default::default() };
    params.validate().map_err(CliError::Config)?;
    let campus = generate_synthetic_campus(&params, args.seed).map_err(network_error)?;
    let net = &campus.network;
    match &args.out {
        Some(path) => {
            let file = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_enrollment(net, Some(&campus.departments), file).map_err(|e| CliError::Io(e.to_string()))?;
        }
        None => {
            write_enrollment(net, Some(&campus.departments), std::io::stdout().lock())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(format!(
        "{} students, {} classes, {} instructors, {} enrollments",
        net.student_count(),
        net.classes().len(),
        net.instructor_count(),
        net.edges().len() - net.instructor_count()
    ))
}

/// Preset names and labels, one per line.
pub fn presets_table(horizon: u32) -> String {
    let all: Vec<ScenarioPreset> = sunrise_presets(horizon).into_iter().chain(experiment_presets()).collect();
    let width = all.iter().map(|p| p.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for p in &all {
        out.push_str(&format!("{:width$}  {}\n", p.name, p.label));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(network_error(NetError::CapacityExhausted("x".into())).exit_code(), 3);
        assert_eq!(network_error(NetError::NonSimplifiable { restarts: 10 }).exit_code(), 3);
        assert_eq!(network_error(NetError::Parse { line: 2, message: "x".into() }).exit_code(), 2);
        assert_eq!(CliError::Io("x".into()).exit_code(), 1);
    }

    #[test]
    fn preset_expansion() {
        let config = ScenarioConfig::default();
        assert_eq!(resolve_presets(Some("sunrise-all"), &config).unwrap().len(), 6);
        assert_eq!(resolve_presets(Some("pd-m"), &config).unwrap()[0].label, "PD + M");
        let single = resolve_presets(None, &config).unwrap();
        assert_eq!(single[0].policy, config.policy());
        let err = resolve_presets(Some("nope"), &config).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("rcm-t-pd-m"));
    }

    #[test]
    fn presets_table_lists_every_preset() {
        let table = presets_table(84);
        assert!(table.contains("no-policy") && table.contains("testing-10000"));
        assert_eq!(table.lines().count(), 6 + experiment_presets().len());
    }
}
