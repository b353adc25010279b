//! Local scenario service.
//!
//! | method | path | body / query | response |
//! |---|---|---|---|
//! | POST | `/api/scenarios` | TOML or JSON scenario; `?preset=NAME` applies a preset | `201` scenario document, `200` if already known |
//! | GET | `/api/scenarios/{id}` | | scenario document |
//! | GET | `/api/config/default` | | default scenario as JSON |
//! | POST | `/api/scenarios/{id}/runs` | `{"runs": N, "seed": S}` | `202` run status; `200` when cached; `409` while the same ensemble is queued or running |
//! | GET | `/api/runs/{id}` | | run status |
//! | GET | `/api/runs/{id}/result` | | ensemble result; `409` until done |
//! | GET | `/api/presets` | | preset list |
//! | GET | `/api/compare` | `?runs=ID,ID,...` | week-end table |
//!
//! Errors are `{"error": message}`, with `"line"` for scenario parse errors.
//! Ensembles run one at a time in submission order on a worker with
//! `parallel` threads. Finished results are stored under the data
//! directory keyed by scenario hash, seed and run count, and are served
//! from there after a restart.

use crate::store::{is_safe_id, run_id, ResultStore};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use campus_core::engine::{report_days, run_ensemble, Comparison, ComparisonRow, EnsembleResult};
use campus_core::net::BipartiteNetwork;
use campus_core::policy::{experiment_presets, find_preset, sunrise_presets, PolicyConfig};
use campus_core::scenario::{CampusSource, ConfigError, ScenarioConfig};
use campus_core::testing::TestingConfig;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc, Mutex};

pub const DEFAULT_RUNS: usize = 1000;
pub const MAX_RUNS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScenarioDocument {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub config: ScenarioConfig,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunState {
    Queued,
    Running,
    Done,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunStatus {
    pub id: String,
    pub scenario_id: String,
    pub seed: u64,
    pub state: RunState,
    pub completed_runs: usize,
    pub total_runs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresetInfo {
    pub name: String,
    pub label: String,
    pub policy: PolicyConfig,
    pub testing: TestingConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareResponse {
    #[serde(flatten)]
    pub table: Comparison,
    /// True when the selected runs were produced on different campuses.
    pub campus_mismatch: bool,
}

struct RunEntry {
    scenario_id: String,
    seed: u64,
    total: usize,
    completed: AtomicUsize,
    state: Mutex<(RunState, Option<String>)>,
}

impl RunEntry {
    fn status(&self, id: &str) -> RunStatus {
        let (state, error) = self.state.lock().unwrap().clone();
        RunStatus {
            id: id.to_string(),
            scenario_id: self.scenario_id.clone(),
            seed: self.seed,
            state,
            completed_runs: self.completed.load(Ordering::SeqCst),
            total_runs: self.total,
            error,
        }
    }

    fn set(&self, state: RunState, error: Option<String>) {
        *self.state.lock().unwrap() = (state, error);
    }
}

struct Job {
    id: String,
    entry: Arc<RunEntry>,
    config: ScenarioConfig,
}

struct AppState {
    store: ResultStore,
    scenarios: Mutex<HashMap<String, ScenarioDocument>>,
    runs: Mutex<HashMap<String, Arc<RunEntry>>>,
    queue: Mutex<mpsc::Sender<Job>>,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(serde_json::json!({ "error": message.into() }))).into_response()
}

fn config_error(e: &ConfigError) -> Response {
    let mut body = serde_json::json!({ "error": e.to_string() });
    if let Some(line) = e.line() {
        body["line"] = line.into();
    }
    (StatusCode::BAD_REQUEST, Json(body)).into_response()
}

/// Builds the service router and starts its ensemble worker.
pub fn app(data_dir: impl Into<PathBuf>, parallelism: usize) -> Router {
    let store = ResultStore::new(data_dir);
    let (tx, rx) = mpsc::channel::<Job>();
    let worker_store = store.clone();
    std::thread::spawn(move || worker(rx, worker_store, parallelism.max(1)));
    let state = Arc::new(AppState {
        store,
        scenarios: Mutex::new(HashMap::new()),
        runs: Mutex::new(HashMap::new()),
        queue: Mutex::new(tx),
    });
    Router::new()
        .route("/api/scenarios", post(create_scenario))
        .route("/api/scenarios/{id}", get(get_scenario))
        .route("/api/scenarios/{id}/runs", post(start_runs))
        .route("/api/config/default", get(default_config))
        .route("/api/runs/{id}", get(run_status))
        .route("/api/runs/{id}/result", get(run_result))
        .route("/api/presets", get(presets))
        .route("/api/compare", get(compare))
        .with_state(state)
}

fn worker(rx: mpsc::Receiver<Job>, store: ResultStore, parallelism: usize) {
    let mut cached: Option<(String, Arc<BipartiteNetwork>)> = None;
    while let Ok(job) = rx.recv() {
        job.entry.set(RunState::Running, None);
        let key = serde_json::to_string(&job.config.network).expect("network config serializes");
        let net = match &cached {
            Some((k, net)) if *k == key => Ok(Arc::clone(net)),
            _ => job.config.load_network(Some(store.root())).map(Arc::new),
        };
        let net = match net {
            Ok(net) => net,
            Err(e) => {
                job.entry.set(RunState::Failed, Some(format!("network: {e}")));
                continue;
            }
        };
        cached = Some((key, Arc::clone(&net)));
        let sim = job.config.simulation(net);
        let ensemble = run_ensemble(&sim, job.entry.total, job.entry.seed, parallelism, &job.entry.scenario_id, &|k| {
            job.entry.completed.fetch_max(k, Ordering::SeqCst);
        });
        match store.save(&job.id, &ensemble, &job.config) {
            Ok(()) => job.entry.set(RunState::Done, None),
            Err(e) => job.entry.set(RunState::Failed, Some(format!("saving results: {e}"))),
        }
    }
}

impl AppState {
    fn scenario(&self, id: &str) -> Option<ScenarioDocument> {
        if let Some(doc) = self.scenarios.lock().unwrap().get(id) {
            return Some(doc.clone());
        }
        if !is_safe_id(id) {
            return None;
        }
        let path = self.store.scenarios_dir().join(format!("{id}.json"));
        let doc: ScenarioDocument = serde_json::from_slice(&std::fs::read(path).ok()?).ok()?;
        self.scenarios.lock().unwrap().insert(id.to_string(), doc.clone());
        Some(doc)
    }

    /// Status of a run known in memory or finished in an earlier session.
    fn status(&self, id: &str) -> Option<RunStatus> {
        if let Some(entry) = self.runs.lock().unwrap().get(id) {
            return Some(entry.status(id));
        }
        let result = self.store.load(id)?;
        let scenario_id = id.split('-').next().unwrap_or_default().to_string();
        Some(RunStatus {
            id: id.to_string(),
            scenario_id,
            seed: result.base_seed,
            state: RunState::Done,
            completed_runs: result.run_count,
            total_runs: result.run_count,
            error: None,
        })
    }
}

#[derive(Debug, Deserialize)]
struct CreateQuery {
    preset: Option<String>,
}

async fn create_scenario(
    State(state): State<Arc<AppState>>,
    Query(query): Query<CreateQuery>,
    headers: HeaderMap,
    body: String,
) -> Response {
    let is_json = headers.get(header::CONTENT_TYPE).and_then(|v| v.to_str().ok()).is_some_and(|v| v.contains("json"))
        || body.trim_start().starts_with('{');
    let parsed = if is_json { ScenarioConfig::from_json_str(&body) } else { ScenarioConfig::from_toml_str(&body) };
    let mut config = match parsed {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    let mut label = None;
    if let Some(name) = &query.preset {
        let Some(preset) = find_preset(name, config.engine.horizon_days) else {
            return error(StatusCode::BAD_REQUEST, format!("unknown preset `{name}`"));
        };
        config.set_policy(preset.policy);
        label = Some(preset.label);
        if let Err(e) = config.validate() {
            return config_error(&e);
        }
    }
    if config.network.source == CampusSource::File {
        let path = config.network.enrollment.clone().unwrap_or_default();
        let path = if path.is_relative() { state.store.root().join(path) } else { path };
        if !path.is_file() {
            return error(StatusCode::BAD_REQUEST, format!("enrollment file {} not found", path.display()));
        }
    }

    let id = config.content_hash();
    if let Some(doc) = state.scenario(&id) {
        if doc.label.is_some() || label.is_none() {
            return (StatusCode::OK, Json(doc)).into_response();
        }
    }
    let created_at =
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let doc = ScenarioDocument { id: id.clone(), label, config, created_at };
    let dir = state.store.scenarios_dir();
    let saved = std::fs::create_dir_all(&dir)
        .and_then(|_| std::fs::write(dir.join(format!("{id}.json")), serde_json::to_vec_pretty(&doc).unwrap()));
    if let Err(e) = saved {
        return error(StatusCode::INTERNAL_SERVER_ERROR, format!("storing scenario: {e}"));
    }
    state.scenarios.lock().unwrap().insert(id, doc.clone());
    (StatusCode::CREATED, Json(doc)).into_response()
}

async fn get_scenario(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    match state.scenario(&id) {
        Some(doc) => Json(doc).into_response(),
        None => error(StatusCode::NOT_FOUND, format!("unknown scenario `{id}`")),
    }
}

async fn default_config() -> Json<ScenarioConfig> {
    Json(ScenarioConfig::default())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StartRequest {
    runs: Option<usize>,
    seed: Option<u64>,
}

async fn start_runs(State(state): State<Arc<AppState>>, Path(scenario_id): Path<String>, body: Bytes) -> Response {
    let request: StartRequest = if body.iter().all(u8::is_ascii_whitespace) {
        StartRequest::default()
    } else {
        match serde_json::from_slice(&body) {
            Ok(r) => r,
            Err(e) => return error(StatusCode::BAD_REQUEST, format!("run request: {e}")),
        }
    };
    let runs = request.runs.unwrap_or(DEFAULT_RUNS);
    if runs == 0 || runs > MAX_RUNS {
        return error(StatusCode::BAD_REQUEST, format!("runs must lie in 1..={MAX_RUNS}"));
    }
    let seed = request.seed.unwrap_or(1);
    let Some(doc) = state.scenario(&scenario_id) else {
        return error(StatusCode::NOT_FOUND, format!("unknown scenario `{scenario_id}`"));
    };
    let id = run_id(&scenario_id, seed, runs);

    let mut table = state.runs.lock().unwrap();
    if let Some(entry) = table.get(&id) {
        let status = entry.status(&id);
        match status.state {
            RunState::Queued | RunState::Running => return (StatusCode::CONFLICT, Json(status)).into_response(),
            RunState::Done => return (StatusCode::OK, Json(status)).into_response(),
            RunState::Failed => {}
        }
    } else if state.store.contains(&id) {
        drop(table);
        return (StatusCode::OK, Json(state.status(&id))).into_response();
    }
    let entry = Arc::new(RunEntry {
        scenario_id: scenario_id.clone(),
        seed,
        total: runs,
        completed: AtomicUsize::new(0),
        state: Mutex::new((RunState::Queued, None)),
    });
    table.insert(id.clone(), Arc::clone(&entry));
    drop(table);
    let job = Job { id: id.clone(), entry: Arc::clone(&entry), config: doc.config };
    if state.queue.lock().unwrap().send(job).is_err() {
        entry.set(RunState::Failed, Some("worker unavailable".into()));
        return error(StatusCode::SERVICE_UNAVAILABLE, "worker unavailable");
    }
    (StatusCode::ACCEPTED, Json(entry.status(&id))).into_response()
}

async fn run_status(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    match state.status(&id) {
        Some(status) => Json(status).into_response(),
        None => error(StatusCode::NOT_FOUND, format!("unknown run `{id}`")),
    }
}

fn finished_result(state: &AppState, id: &str) -> Result<EnsembleResult, Box<Response>> {
    match state.status(id) {
        None => Err(Box::new(error(StatusCode::NOT_FOUND, format!("unknown run `{id}`")))),
        Some(s) if s.state != RunState::Done => Err(Box::new((StatusCode::CONFLICT, Json(s)).into_response())),
        Some(_) => state.store.load(id).ok_or_else(|| {
            Box::new(error(StatusCode::INTERNAL_SERVER_ERROR, format!("result of `{id}` is unreadable")))
        }),
    }
}

async fn run_result(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    match finished_result(&state, &id) {
        Ok(result) => Json(result).into_response(),
        Err(response) => *response,
    }
}

async fn presets() -> Json<Vec<PresetInfo>> {
    let horizon = ScenarioConfig::default().engine.horizon_days;
    Json(
        sunrise_presets(horizon)
            .into_iter()
            .chain(experiment_presets())
            .map(|p| PresetInfo { name: p.name, label: p.label, testing: p.policy.testing, policy: p.policy })
            .collect(),
    )
}

#[derive(Debug, Deserialize)]
struct CompareQuery {
    runs: String,
}

async fn compare(State(state): State<Arc<AppState>>, Query(query): Query<CompareQuery>) -> Response {
    let ids: Vec<&str> = query.runs.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if ids.is_empty() {
        return error(StatusCode::BAD_REQUEST, "no runs selected");
    }
    let mut rows = Vec::new();
    let mut networks = Vec::new();
    let mut horizon = u32::MAX;
    let mut results = Vec::new();
    for id in &ids {
        match finished_result(&state, id) {
            Ok(r) => {
                horizon = horizon.min(r.horizon_days as u32);
                results.push((*id, r));
            }
            Err(response) => return *response,
        }
    }
    let days = report_days(horizon);
    for (id, result) in &results {
        let scenario = id.split('-').next().unwrap_or_default();
        let doc = state.scenario(scenario);
        let label = doc.as_ref().and_then(|d| d.label.clone()).unwrap_or_else(|| id.to_string());
        networks.push(doc.map(|d| serde_json::to_string(&d.config.network).unwrap_or_default()));
        rows.push(ComparisonRow::from_result(id, &label, result, &days));
    }
    let campus_mismatch = networks.windows(2).any(|w| w[0] != w[1]);
    Json(CompareResponse { table: Comparison { days, rows }, campus_mismatch }).into_response()
}
