//! In-memory strategy sessions over HTTP.

use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use quasicone_core::quasicone::default_bound;
use quasicone_core::search::{concatenate_strategies, SearchOptions, TierRegistry};
use quasicone_core::strategy::{apply_step, apply_strategy, auto_exponent, succeeded, StepError};
use quasicone_core::{EngineConfig, QuasiconeMatrix, SignedRoot, Strategy, StrategyState};
use serde::Deserialize;
use serde_json::{json, Value};

/// Residual search is only offered where the stock pipeline finishes in seconds.
const MAX_RESIDUAL_RANK: usize = 4;

pub struct Session {
    pub origin: QuasiconeMatrix,
    pub state: StrategyState,
    pub history: Vec<StrategyState>,
}

#[derive(Clone, Debug)]
pub struct Residual {
    pub bound: i64,
    pub matrices: Arc<Vec<QuasiconeMatrix>>,
}

pub struct AppState {
    config: EngineConfig,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    residuals: RwLock<HashMap<usize, Residual>>,
    counter: AtomicU64,
}

impl AppState {
    pub fn new(config: EngineConfig) -> Arc<Self> {
        Arc::new(AppState {
            config,
            sessions: RwLock::new(HashMap::new()),
            residuals: RwLock::new(HashMap::new()),
            counter: AtomicU64::new(0),
        })
    }

    /// Reads the `rank`, `bound` and `residual` fields of a search report.
    pub fn load_report(&self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let rank = v["rank"].as_u64().ok_or_else(|| format!("{}: missing rank", path.display()))? as usize;
        let bound = v["bound"].as_i64().unwrap_or_else(|| default_bound(rank));
        let matrices = v["residual"]
            .as_array()
            .ok_or_else(|| format!("{}: missing residual", path.display()))?
            .iter()
            .map(|m| QuasiconeMatrix::from_json(&m.to_string()).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        self.residuals.write().unwrap().insert(rank, Residual { bound, matrices: Arc::new(matrices) });
        Ok(())
    }

    /// The cached residual for `rank`, running the stock search on first use.
    pub fn residual(&self, rank: usize) -> Residual {
        if let Some(r) = self.residuals.read().unwrap().get(&rank) {
            return r.clone();
        }
        let tiers = TierRegistry::with_builtin()
            .resolve("shortest,shortest-long,simple-basic,concat")
            .expect("built-in tiers");
        let opts = SearchOptions { config: self.config, ..SearchOptions::for_rank(rank) };
        let report = concatenate_strategies(rank, &tiers, &opts);
        let r = Residual { bound: report.bound, matrices: Arc::new(report.residual) };
        self.residuals.write().unwrap().entry(rank).or_insert(r).clone()
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "UnknownSession", format!("no session {id:?}")))
    }
}

pub struct ApiError {
    status: StatusCode,
    kind: String,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: impl Into<String>) -> Self {
        ApiError { status, kind: kind.to_string(), message: message.into() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "BadRequest", message)
    }

    fn step(e: &StepError) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, e.kind(), e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "kind": self.kind, "message": self.message }))).into_response()
    }
}

type ApiResult = Result<Response, ApiError>;

fn state_json(id: &str, s: &Session) -> Value {
    let m = &s.state.matrix;
    json!({
        "id": id,
        "matrix": m,
        "rows": m.to_rows_string(),
        "defect": m.defect(),
        "gap": m.gap(),
        "gvm_complete": m.is_gvm_complete(),
        "success": succeeded(&s.origin, &s.state),
        "offset": {
            "classical": s.state.offset.classical,
            "delta": s.state.offset.delta,
            "display": s.state.offset.to_string(),
        },
        "history": s.history.len(),
        "strategy": s.state.resolved_strategy().to_string(),
    })
}

fn parse_root(v: &Value) -> Result<SignedRoot, ApiError> {
    let n = match v {
        Value::Number(x) => x.as_i64(),
        Value::String(s) => s.trim().parse::<i64>().ok(),
        _ => None,
    }
    .ok_or_else(|| ApiError::bad_request(format!("root must be a signed index, found {v}")))?;
    SignedRoot::from_signed(n).map_err(|e| ApiError::bad_request(e.to_string()))
}

fn parse_matrix_value(v: &Value) -> Result<QuasiconeMatrix, ApiError> {
    match v {
        Value::String(s) => QuasiconeMatrix::parse_rows(s),
        other => QuasiconeMatrix::from_json(&other.to_string()),
    }
    .map_err(|e| ApiError::bad_request(format!("matrix: {e}")))
}

#[derive(Deserialize)]
struct ResidualRef {
    rank: usize,
    index: usize,
}

#[derive(Deserialize)]
struct CreateBody {
    matrix: Option<Value>,
    residual: Option<ResidualRef>,
    /// Applied step by step, so each step can be undone.
    strategy: Option<String>,
}

async fn create(State(app): State<Arc<AppState>>, body: Result<Json<CreateBody>, axum::extract::rejection::JsonRejection>) -> ApiResult {
    let Json(body) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let origin = match (&body.matrix, &body.residual) {
        (Some(m), None) => parse_matrix_value(m)?,
        (None, Some(r)) => {
            check_rank(r.rank)?;
            let app2 = app.clone();
            let rank = r.rank;
            let res = tokio::task::spawn_blocking(move || app2.residual(rank)).await.expect("search task");
            res.matrices.get(r.index).cloned().ok_or_else(|| {
                ApiError::new(
                    StatusCode::NOT_FOUND,
                    "UnknownResidual",
                    format!("rank {} residual has {} entries", r.rank, res.matrices.len()),
                )
            })?
        }
        _ => return Err(ApiError::bad_request("give exactly one of matrix and residual")),
    };
    let mut session = Session {
        state: StrategyState::start(origin.clone(), &app.config),
        origin,
        history: Vec::new(),
    };
    if let Some(text) = &body.strategy {
        let s: Strategy = text.parse().map_err(|e: quasicone_core::strategy::StrategyParseError| ApiError::bad_request(e.to_string()))?;
        for step in &s.steps {
            // balanced exponents depend on the steps already taken
            let sum: i64 = session.state.trace.iter().map(|r| r.exponent).sum();
            let k = quasicone_core::strategy::resolve_exponent(&session.state, *step, sum).map_err(|e| ApiError::step(&e))?;
            let next = apply_step(&session.state, step.root, k, &app.config).map_err(|e| ApiError::step(&e))?;
            session.history.push(std::mem::replace(&mut session.state, next));
        }
    }
    let id = format!("s{:06}", app.counter.fetch_add(1, Ordering::Relaxed) + 1);
    let body = state_json(&id, &session);
    app.sessions.write().unwrap().insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn get_state(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let s = app.session(&id)?;
    let s = s.lock().unwrap();
    Ok(Json(state_json(&id, &s)).into_response())
}

async fn moves(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let s = app.session(&id)?;
    let s = s.lock().unwrap();
    let n = s.state.matrix.rank();
    let list: Vec<Value> = SignedRoot::all(n)
        .into_iter()
        .map(|root| {
            let auto = auto_exponent(&s.state, root);
            let outcome = auto.clone().and_then(|k| apply_step(&s.state, root, k, &app.config));
            let mut v = json!({
                "root": root.signed(),
                "label": root.to_string(),
                "auto_exponent": auto.as_ref().ok(),
            });
            match outcome {
                Ok(next) => {
                    v["legality"] = json!("legal");
                    v["predicted_defect"] = json!(next.matrix.defect());
                    v["predicted_gap"] = json!(next.matrix.gap());
                    v["predicted_success"] = json!(succeeded(&s.origin, &next));
                }
                Err(e) => {
                    v["legality"] = json!(e.kind());
                    v["predicted_defect"] = Value::Null;
                    v["predicted_gap"] = Value::Null;
                }
            }
            v
        })
        .collect();
    Ok(Json(json!(list)).into_response())
}

#[derive(Deserialize)]
struct ApplyBody {
    root: Value,
    exponent: Option<i64>,
}

async fn apply(
    State(app): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    body: Result<Json<ApplyBody>, axum::extract::rejection::JsonRejection>,
) -> ApiResult {
    let s = app.session(&id)?;
    let Json(body) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let root = parse_root(&body.root)?;
    let mut s = s.lock().unwrap();
    let k = match body.exponent {
        Some(k) => k,
        None => auto_exponent(&s.state, root).map_err(|e| ApiError::step(&e))?,
    };
    let next = apply_step(&s.state, root, k, &app.config).map_err(|e| ApiError::step(&e))?;
    let prev = std::mem::replace(&mut s.state, next);
    s.history.push(prev);
    Ok(Json(state_json(&id, &s)).into_response())
}

async fn undo(State(app): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let s = app.session(&id)?;
    let mut s = s.lock().unwrap();
    let prev = s
        .history
        .pop()
        .ok_or_else(|| ApiError::new(StatusCode::CONFLICT, "EmptyHistory", "nothing to undo"))?;
    s.state = prev;
    Ok(Json(state_json(&id, &s)).into_response())
}

#[derive(Deserialize)]
struct RankQuery {
    rank: usize,
}

fn check_rank(rank: usize) -> Result<(), ApiError> {
    if (1..=MAX_RESIDUAL_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "UnsupportedRank",
            format!("rank must lie in 1..={MAX_RESIDUAL_RANK}"),
        ))
    }
}

async fn residual(State(app): State<Arc<AppState>>, q: Result<Query<RankQuery>, axum::extract::rejection::QueryRejection>) -> ApiResult {
    let Query(q) = q.map_err(|e| ApiError::bad_request(e.body_text()))?;
    check_rank(q.rank)?;
    let app2 = app.clone();
    let r = tokio::task::spawn_blocking(move || app2.residual(q.rank)).await.expect("search task");
    Ok(Json(json!({ "rank": q.rank, "bound": r.bound, "matrices": *r.matrices })).into_response())
}

/// Replays a strategy from a matrix without creating a session.
async fn replay(State(app): State<Arc<AppState>>, body: Result<Json<Value>, axum::extract::rejection::JsonRejection>) -> ApiResult {
    let Json(body) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let m = parse_matrix_value(&body["matrix"])?;
    let text = body["strategy"].as_str().ok_or_else(|| ApiError::bad_request("strategy must be a string"))?;
    let s: Strategy = text.parse().map_err(|e: quasicone_core::strategy::StrategyParseError| ApiError::bad_request(e.to_string()))?;
    let out = apply_strategy(&StrategyState::start(m.clone(), &app.config), &s, &app.config)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.error.kind(), e.to_string()))?;
    Ok(Json(json!({
        "matrix": out.matrix,
        "defect": out.matrix.defect(),
        "success": succeeded(&m, &out),
        "strategy": out.resolved_strategy().to_string(),
    }))
    .into_response())
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/sessions", post(create))
        .route("/api/sessions/{id}/state", get(get_state))
        .route("/api/sessions/{id}/moves", get(moves))
        .route("/api/sessions/{id}/apply", post(apply))
        .route("/api/sessions/{id}/undo", post(undo))
        .route("/api/residual", get(residual))
        .route("/api/replay", post(replay))
        .with_state(state)
}

pub async fn serve(host: &str, port: u16, state: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
