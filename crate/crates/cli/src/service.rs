//! HTTP service behind the annotation workbench.
//!
//! Routes:
//! - `GET /debates`: debates that contain a scene of interest
//! - `GET /debates/{id}`: the full debate and its scenes of interest
//! - `GET /scenes/{debate_id:scene_id}/phrases`: pooled phrases with candidates and decisions so far
//! - `POST /gold`: record one decision
//! - `GET /progress`: decisions per annotator and round
//! - `GET /export/gold`: the decision log as JSON Lines

use std::collections::{BTreeMap, HashMap, HashSet};
use std::net::SocketAddr;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;

use hybridlink_core::benchmark::{preselect_candidates, Candidate, GoldDecision, GoldError, GoldStore, SampleItem};
use hybridlink_core::corpus::{scene_key, Debate};
use hybridlink_core::kb::KnowledgeBase;
use hybridlink_core::pipeline::PooledPhrase;

#[derive(Debug, Clone, Serialize)]
pub struct DebateSummary {
    pub id: String,
    pub date: String,
    pub house: String,
    pub scenes_of_interest: Vec<String>,
    pub phrases: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DebateView<'a> {
    pub debate: &'a Debate,
    pub scenes_of_interest: &'a [String],
}

#[derive(Debug, Clone, Serialize)]
pub struct PhraseView {
    #[serde(flatten)]
    pub phrase: PooledPhrase,
    pub candidates: Vec<Candidate>,
    /// Every decision recorded for the phrase, oldest first.
    pub decisions: Vec<GoldDecision>,
}

pub struct AppState {
    debates: Vec<Debate>,
    debate_index: HashMap<String, usize>,
    scenes_of_interest: BTreeMap<String, Vec<String>>,
    phrases_by_scene: HashMap<String, Vec<(PooledPhrase, Vec<Candidate>)>>,
    phrase_ids: HashSet<String>,
    store: GoldStore,
}

impl AppState {
    /// Scenes of interest are the sampled scenes when a sample is given,
    /// otherwise every scene with at least one pooled phrase.
    pub fn new(
        debates: Vec<Debate>,
        phrases: Vec<PooledPhrase>,
        sample: Option<&[SampleItem]>,
        kb: &KnowledgeBase,
        candidates: usize,
        store: GoldStore,
    ) -> Result<Self> {
        let debate_index: HashMap<String, usize> = debates.iter().enumerate().map(|(i, d)| (d.id.clone(), i)).collect();
        let scene_exists = |debate_id: &str, scene_id: &str| {
            debate_index
                .get(debate_id)
                .is_some_and(|&i| debates[i].scene(scene_id).is_some())
        };
        let mut scenes_of_interest: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut mark = |debate_id: &str, scene_id: &str| {
            let scenes = scenes_of_interest.entry(debate_id.to_string()).or_default();
            if !scenes.iter().any(|s| s == scene_id) {
                scenes.push(scene_id.to_string());
            }
        };
        match sample {
            Some(items) => {
                for item in items {
                    if !scene_exists(&item.debate_id, &item.scene_id) {
                        bail!(
                            "sampled scene {} is not in the corpus",
                            scene_key(&item.debate_id, &item.scene_id)
                        );
                    }
                    mark(&item.debate_id, &item.scene_id);
                }
            }
            None => phrases.iter().for_each(|p| mark(&p.debate_id, &p.scene_id)),
        }

        let mut phrases_by_scene: HashMap<String, Vec<(PooledPhrase, Vec<Candidate>)>> = HashMap::new();
        let mut phrase_ids = HashSet::new();
        for p in phrases {
            if !scene_exists(&p.debate_id, &p.scene_id) {
                bail!("phrase {} refers to a scene that is not in the corpus", p.phrase_id);
            }
            if !phrase_ids.insert(p.phrase_id.clone()) {
                bail!("phrase id {} occurs twice in the pool", p.phrase_id);
            }
            let cands = preselect_candidates(&p, kb, candidates);
            phrases_by_scene
                .entry(scene_key(&p.debate_id, &p.scene_id))
                .or_default()
                .push((p, cands));
        }
        Ok(AppState {
            debates,
            debate_index,
            scenes_of_interest,
            phrases_by_scene,
            phrase_ids,
            store,
        })
    }

    fn total_phrases(&self) -> usize {
        self.phrase_ids.len()
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

impl From<GoldError> for ApiError {
    fn from(e: GoldError) -> Self {
        let status = match &e {
            GoldError::Invalid { .. } => StatusCode::BAD_REQUEST,
            GoldError::DuplicateConsensus(_) => StatusCode::CONFLICT,
            GoldError::Io { .. } | GoldError::Parse(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

type Shared = State<Arc<AppState>>;

async fn list_debates(State(state): Shared) -> Json<Vec<DebateSummary>> {
    let list = state
        .scenes_of_interest
        .iter()
        .map(|(id, scenes)| {
            let d = &state.debates[state.debate_index[id]];
            let phrases = scenes
                .iter()
                .map(|s| state.phrases_by_scene.get(&scene_key(id, s)).map_or(0, Vec::len))
                .sum();
            DebateSummary {
                id: id.clone(),
                date: d.date.to_string(),
                house: d.house.clone(),
                scenes_of_interest: scenes.clone(),
                phrases,
            }
        })
        .collect();
    Json(list)
}

async fn get_debate(State(state): Shared, Path(id): Path<String>) -> Result<Response, ApiError> {
    let &index = state
        .debate_index
        .get(&id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown debate {id}")))?;
    let view = DebateView {
        debate: &state.debates[index],
        scenes_of_interest: state.scenes_of_interest.get(&id).map(Vec::as_slice).unwrap_or_default(),
    };
    Ok(Json(view).into_response())
}

async fn scene_phrases(State(state): Shared, Path(key): Path<String>) -> Result<Json<Vec<PhraseView>>, ApiError> {
    let known = key
        .split_once(':')
        .and_then(|(d, s)| state.debate_index.get(d).map(|&i| state.debates[i].scene(s).is_some()))
        .unwrap_or(false);
    if !known {
        return Err(ApiError::new(
            StatusCode::NOT_FOUND,
            format!("unknown scene {key}; expected debate_id:scene_id"),
        ));
    }
    let snapshot = state.store.snapshot();
    let views = state
        .phrases_by_scene
        .get(&key)
        .map(|phrases| {
            phrases
                .iter()
                .map(|(p, c)| PhraseView {
                    phrase: p.clone(),
                    candidates: c.clone(),
                    decisions: snapshot
                        .iter()
                        .filter(|d| d.phrase_id == p.phrase_id)
                        .cloned()
                        .collect(),
                })
                .collect()
        })
        .unwrap_or_default();
    Ok(Json(views))
}

async fn post_gold(
    State(state): Shared,
    body: Result<Json<GoldDecision>, JsonRejection>,
) -> Result<Json<GoldDecision>, ApiError> {
    let Json(decision) = body.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    decision.validate()?;
    if !state.phrase_ids.contains(&decision.phrase_id) {
        return Err(ApiError::new(
            StatusCode::NOT_FOUND,
            format!("unknown phrase {}", decision.phrase_id),
        ));
    }
    let stored = tokio::task::spawn_blocking(move || state.store.append(&decision))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(stored))
}

async fn get_progress(State(state): Shared) -> impl IntoResponse {
    Json(state.store.progress(state.total_phrases()))
}

async fn export_gold(State(state): Shared) -> impl IntoResponse {
    ([(header::CONTENT_TYPE, "application/x-ndjson")], state.store.export())
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/debates", get(list_debates))
        .route("/debates/{id}", get(get_debate))
        .route("/scenes/{id}/phrases", get(scene_phrases))
        .route("/gold", post(post_gold))
        .route("/progress", get(get_progress))
        .route("/export/gold", get(export_gold))
        .with_state(state)
}

pub async fn serve(state: Arc<AppState>, bind: SocketAddr) -> Result<()> {
    let listener = tokio::net::TcpListener::bind(bind)
        .await
        .with_context(|| format!("binding {bind}"))?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}
