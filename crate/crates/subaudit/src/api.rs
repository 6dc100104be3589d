//! JSON HTTP API over an [`AuditStore`].
//!
//! | Method | Path | Body |
//! |---|---|---|
//! | GET | `/health` | `{"status":"ok"}` |
//! | GET | `/matches` | [`MatchSummary`] list |
//! | GET | `/matches/{id}/timeline` | [`Timeline`] |
//! | GET | `/matches/{id}/players/{pid}` | [`PlayerView`] |
//! | POST | `/matches/{id}/whatif` | [`WhatIfRequest`] in, `PriorityResult` out |
//! | GET | `/rules` | [`RuleInfo`] list |
//!
//! Errors are `{"error": "...", "field": ...}` with 404 for unknown ids,
//! 400 for malformed bodies and 422 for rejected overrides.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use subaudit_core::events::{MatchId, PlayerId, Role, Substitution, TeamId};
use subaudit_core::priority::{LatencyEntry, Overrides, PostEntryTrack, PriorityResult};
use subaudit_core::system::rule_title;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::store::{AuditStore, StoredMatch};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSummary {
    pub match_id: MatchId,
    pub slices: Vec<u32>,
    pub players: usize,
    pub substitutions: usize,
    pub critical_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineEntry {
    pub rank: u32,
    pub player_id: PlayerId,
    pub team_id: TeamId,
    pub p_cum: f64,
    pub baseline: f64,
    pub modifier: f64,
    pub p_final: f64,
    pub critical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineSlice {
    pub slice: u32,
    /// Ranked, highest priority first.
    pub entries: Vec<TimelineEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    pub match_id: MatchId,
    pub critical_threshold: f64,
    pub substitutions: Vec<Substitution>,
    pub slices: Vec<TimelineSlice>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerView {
    pub match_id: MatchId,
    pub player_id: PlayerId,
    pub team_id: TeamId,
    pub position: Role,
    /// One result per audited slice, each with its full rule trace.
    pub results: Vec<PriorityResult>,
    pub latency: Option<LatencyEntry>,
    pub post_entry: Option<PostEntryTrack>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfRequest {
    pub slice: u32,
    pub player: PlayerId,
    #[serde(default)]
    pub overrides: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleInfo {
    pub id: String,
    pub title: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip)]
    status: u16,
}

impl ApiError {
    fn new(status: StatusCode, error: impl Into<String>) -> Self {
        ApiError { error: error.into(), field: None, status: status.as_u16() }
    }

    fn not_found(what: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, what)
    }

    fn bad_request(e: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::BAD_REQUEST, format!("malformed body: {e}"))
    }

    fn unprocessable(e: impl std::fmt::Display, field: Option<String>) -> Self {
        ApiError { field, ..Self::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

type Shared = Arc<AuditStore>;

/// Builds the router. `cors_origin` limits cross-origin access to one
/// origin; any origin is allowed when it is `None`.
pub fn router(store: Shared, cors_origin: Option<HeaderValue>) -> Router {
    let cors = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([axum::http::header::CONTENT_TYPE])
        .allow_origin(match cors_origin {
            Some(o) => AllowOrigin::exact(o),
            None => AllowOrigin::any(),
        });
    Router::new()
        .route("/health", get(health))
        .route("/matches", get(list_matches))
        .route("/matches/{id}/timeline", get(timeline))
        .route("/matches/{id}/players/{pid}", get(player))
        .route("/matches/{id}/whatif", post(what_if))
        .route("/rules", get(rules))
        .layer(cors)
        .with_state(store)
}

async fn health() -> Json<Health> {
    Json(Health { status: "ok".into() })
}

async fn list_matches(State(store): State<Shared>) -> Json<Vec<MatchSummary>> {
    let threshold = store.auditor.config().critical_threshold;
    Json(
        store
            .matches
            .values()
            .map(|m| MatchSummary {
                match_id: m.audit.match_id,
                slices: m.audit.slices.iter().map(|s| s.slice).collect(),
                players: m.audit.latency.len(),
                substitutions: m.audit.substitutions.len(),
                critical_threshold: threshold,
            })
            .collect(),
    )
}

fn lookup<'a>(store: &'a AuditStore, id: &str) -> Result<&'a StoredMatch, ApiError> {
    id.parse::<u64>()
        .ok()
        .and_then(|id| store.get(MatchId(id)))
        .ok_or_else(|| ApiError::not_found(format!("unknown match {id}")))
}

async fn timeline(State(store): State<Shared>, Path(id): Path<String>) -> Result<Json<Timeline>, ApiError> {
    let m = lookup(&store, &id)?;
    let threshold = store.auditor.config().critical_threshold;
    Ok(Json(Timeline {
        match_id: m.audit.match_id,
        critical_threshold: threshold,
        substitutions: m.audit.substitutions.clone(),
        slices: m
            .audit
            .slices
            .iter()
            .map(|s| TimelineSlice {
                slice: s.slice,
                entries: s
                    .results
                    .iter()
                    .map(|r| TimelineEntry {
                        rank: r.rank,
                        player_id: r.player_id,
                        team_id: r.team_id,
                        p_cum: r.p_cum,
                        baseline: r.baseline,
                        modifier: r.modifier,
                        p_final: r.p_final,
                        critical: r.p_final > threshold,
                    })
                    .collect(),
            })
            .collect(),
    }))
}

async fn player(
    State(store): State<Shared>,
    Path((id, pid)): Path<(String, String)>,
) -> Result<Json<PlayerView>, ApiError> {
    let m = lookup(&store, &id)?;
    let unknown = || ApiError::not_found(format!("unknown player {pid} in match {id}"));
    let player = PlayerId(pid.parse().map_err(|_| unknown())?);
    let results: Vec<PriorityResult> = m.audit.results().filter(|r| r.player_id == player).cloned().collect();
    let first = results.first().ok_or_else(unknown)?;
    let position = m.states.iter().find(|s| s.player_id == player).map(|s| s.player_position).ok_or_else(unknown)?;
    Ok(Json(PlayerView {
        match_id: m.audit.match_id,
        player_id: player,
        team_id: first.team_id,
        position,
        latency: m.audit.latency.iter().find(|e| e.player_id == player).copied(),
        post_entry: m.audit.post_entry.iter().find(|t| t.player_id == player).cloned(),
        results,
    }))
}

async fn what_if(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<PriorityResult>, ApiError> {
    let m = lookup(&store, &id)?;
    let value: serde_json::Value = serde_json::from_slice(&body).map_err(ApiError::bad_request)?;
    let req: WhatIfRequest = serde_json::from_value(value).map_err(ApiError::bad_request)?;
    let overrides: Overrides = if req.overrides.is_null() {
        Overrides::default()
    } else {
        serde_json::from_value(req.overrides)
            .map_err(|e| ApiError::unprocessable(format!("invalid override: {e}"), None))?
    };
    let slice = m.slice_states(req.slice);
    if slice.is_empty() {
        return Err(ApiError::not_found(format!("unknown slice {} in match {id}", req.slice)));
    }
    let Some(target) = slice.iter().find(|s| s.player_id == req.player) else {
        return Err(ApiError::not_found(format!("player {} not on the pitch in slice {}", req.player, req.slice)));
    };
    if target.player_position == Role::Goalkeeper {
        return Err(ApiError::unprocessable("goalkeepers are not audited", Some("player".into())));
    }
    match store.auditor.what_if(&slice, req.player, &overrides) {
        Ok(r) => Ok(Json(r)),
        Err(subaudit_core::Error::Domain { field, value, lo, hi }) => {
            Err(ApiError::unprocessable(format!("{field} = {value} is outside [{lo}, {hi}]"), Some(field)))
        }
        Err(e) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string())),
    }
}

async fn rules(State(store): State<Shared>) -> Json<Vec<RuleInfo>> {
    Json(
        store
            .system
            .rules
            .rules
            .iter()
            .map(|r| RuleInfo { id: r.id.clone(), title: rule_title(&r.id).map(str::to_string), text: r.to_string() })
            .collect(),
    )
}

/// Serves until ctrl-c.
pub async fn serve(store: AuditStore, addr: &str, cors_origin: Option<HeaderValue>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(store), cors_origin))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
