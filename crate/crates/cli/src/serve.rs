//! HTTP JSON service for interactive play.
//!
//! - `POST /solve {game, algo?, precheck?}` returns `{realizable, strategy, precheckFailed}`.
//! - `POST /session {game, strategy?}` returns `{sessionId, view}`. Without a
//!   strategy the four-nested solver with the precheck synthesizes one.
//! - `POST /session/{id}/env-move {to}` returns `{sysMove, view}`.
//! - `GET /maze?cols&lines&goals&variant` returns `{game, realizable, strategy}`.
//!
//! Errors are `{error, legal?}` with a 4xx status. Sessions live until the
//! process exits; each one sits behind its own lock so its moves apply in
//! order.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use gr1_core::format::GameDoc;
use gr1_core::maze::{maze_generate, MazeParams, Variant};
use gr1_core::session::{Session, SessionError, SessionView, SysMove};
use gr1_core::strategy::StrategyDoc;
use gr1_core::{synthesize, Algorithm, Precheck};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
}

pub fn router() -> Router {
    Router::new()
        .route("/solve", post(solve))
        .route("/session", post(new_session))
        .route("/session/{id}/env-move", post(env_move))
        .route("/maze", get(maze))
        .with_state(Arc::new(AppState::default()))
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, msg: impl ToString) -> Self {
        ApiError {
            status,
            body: json!({ "error": msg.to_string() }),
        }
    }

    fn bad_request(msg: impl ToString) -> Self {
        Self::new(StatusCode::BAD_REQUEST, msg)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(e.status(), e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::new(e.status(), e.body_text())
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match &e {
            SessionError::IllegalMove { legal, .. } => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({ "error": e.to_string(), "legal": legal }),
            },
            SessionError::UnknownState(_) => ApiError::bad_request(e),
            _ => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e),
        }
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Runs CPU-bound work off the async executor.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))?
}

#[derive(Deserialize)]
struct SolveRequest {
    game: GameDoc,
    #[serde(default = "default_algo")]
    algo: Algorithm,
    #[serde(default)]
    precheck: Precheck,
}

fn default_algo() -> Algorithm {
    Algorithm::FourFp
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SolveResponse {
    realizable: bool,
    strategy: Option<StrategyDoc>,
    /// One-based assumption indices added to the guarantees.
    precheck_failed: Vec<usize>,
}

async fn solve(body: Result<Json<SolveRequest>, JsonRejection>) -> ApiResult<SolveResponse> {
    let Json(req) = body?;
    let resp = blocking(move || {
        let (g, s) = req.game.into_game().map_err(ApiError::bad_request)?;
        let syn = synthesize(&g, &s, req.algo, req.precheck).map_err(ApiError::bad_request)?;
        Ok(SolveResponse {
            realizable: syn.realizable(),
            strategy: syn
                .strategy
                .as_ref()
                .map(|st| StrategyDoc::from_strategy(&g, st)),
            precheck_failed: syn.precheck_failed.iter().map(|b| b + 1).collect(),
        })
    })
    .await?;
    Ok(Json(resp))
}

#[derive(Deserialize)]
struct SessionRequest {
    game: GameDoc,
    strategy: Option<StrategyDoc>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SessionResponse {
    session_id: String,
    view: SessionView,
}

async fn new_session(
    State(app): State<Arc<AppState>>,
    body: Result<Json<SessionRequest>, JsonRejection>,
) -> ApiResult<SessionResponse> {
    let Json(req) = body?;
    let session = blocking(move || {
        let (g, s) = req.game.into_game().map_err(ApiError::bad_request)?;
        let (strategy, solution) = match req.strategy {
            Some(doc) => (doc.into_strategy(&g).map_err(ApiError::bad_request)?, None),
            None => {
                let syn = synthesize(&g, &s, Algorithm::FourFp, Precheck::Auto)
                    .map_err(ApiError::bad_request)?;
                let Some(strat) = syn.strategy else {
                    return Err(ApiError::new(
                        StatusCode::UNPROCESSABLE_ENTITY,
                        "unrealizable from initial state",
                    ));
                };
                (strat, Some(syn.solution))
            }
        };
        Ok(Session::new(g, &s, strategy, solution)?)
    })
    .await?;
    let view = session.view();
    let id = format!("s{}", app.next_id.fetch_add(1, Ordering::Relaxed) + 1);
    app.sessions
        .lock()
        .expect("session map lock")
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    Ok(Json(SessionResponse {
        session_id: id,
        view,
    }))
}

#[derive(Deserialize)]
struct MoveRequest {
    to: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MoveResponse {
    sys_move: SysMove,
    view: SessionView,
}

async fn env_move(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult<MoveResponse> {
    let Json(req) = body?;
    let session = app
        .sessions
        .lock()
        .expect("session map lock")
        .get(&id)
        .cloned()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown session {id}")))?;
    let mut session = session.lock().expect("session lock");
    let sys_move = session.env_move(&req.to)?;
    Ok(Json(MoveResponse {
        sys_move,
        view: session.view(),
    }))
}

#[derive(Deserialize)]
struct MazeQuery {
    cols: Option<usize>,
    lines: Option<usize>,
    goals: Option<usize>,
    variant: Option<Variant>,
}

#[derive(Serialize)]
struct MazeResponse {
    game: GameDoc,
    realizable: bool,
    strategy: Option<StrategyDoc>,
}

async fn maze(query: Result<Query<MazeQuery>, QueryRejection>) -> ApiResult<MazeResponse> {
    let Query(q) = query?;
    let p = MazeParams::new(
        q.cols.unwrap_or(3),
        q.lines.unwrap_or(2),
        q.goals.unwrap_or(2),
        q.variant.unwrap_or(Variant::Falsifiable),
    );
    let resp = blocking(move || {
        let (g, s) = maze_generate(&p).map_err(ApiError::bad_request)?;
        let syn =
            synthesize(&g, &s, Algorithm::FourFp, Precheck::Off).map_err(ApiError::bad_request)?;
        Ok(MazeResponse {
            game: GameDoc::from_game(&g, &s),
            realizable: syn.realizable(),
            strategy: syn
                .strategy
                .as_ref()
                .map(|st| StrategyDoc::from_strategy(&g, st)),
        })
    })
    .await?;
    Ok(Json(resp))
}
