//! Process-level wiring for the matchmaking engine: configuration,
//! text-in/text-out command helpers, and the HTTP service. The binary and
//! the integration tests share everything here.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::RwLock;

use rendermatch_core::{
    concept_sim, equivalent_sim, parse_all_requirements, parse_requirements, rank_services,
    run_eval, ConceptGraph, ConceptRef, Error, EvalReport, GoldJudgments, MatchResult,
    NumericSpan, RankOptions, ReasonerConfig, Result, ServiceProfile, ServiceRegistry,
};

/// Where the engine reads its world from and how it scores.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub ontology_path: PathBuf,
    /// Profile store; `None` keeps the registry in memory only.
    pub registry_path: Option<PathBuf>,
    pub rho: f64,
    pub threshold: f64,
}

impl EngineConfig {
    pub fn reasoner(&self) -> ReasonerConfig {
        ReasonerConfig {
            rho: self.rho,
            threshold: self.threshold,
            ..ReasonerConfig::default()
        }
    }
}

/// A loaded graph plus registry plus scoring configuration.
pub struct Engine {
    pub graph: ConceptGraph,
    pub registry: ServiceRegistry,
    pub reasoner: ReasonerConfig,
}

/// Similarity of two terms named on the command line or in a URL.
#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    /// `concept_sim` for plain graph proximity, `equivalent_sim` when both
    /// sides pin a version of the same concept.
    pub kind: String,
    pub left: String,
    pub right: String,
    pub value: f64,
}

/// One `register` outcome: the stored id, the registry revision after the
/// write, and whether the id was new.
#[derive(Debug, Clone, Serialize)]
pub struct RegisterOutcome {
    pub service_id: String,
    pub revision: u64,
    pub created: bool,
}

impl Engine {
    pub fn load(config: &EngineConfig) -> Result<Engine> {
        let reasoner = config.reasoner();
        reasoner.validate()?;
        let text = std::fs::read_to_string(&config.ontology_path)?;
        let graph = ConceptGraph::parse(&text)?;
        let registry = match &config.registry_path {
            Some(path) => ServiceRegistry::with_store(path, &graph)?,
            None => ServiceRegistry::new(),
        };
        Ok(Engine { graph, registry, reasoner })
    }

    /// Ranks the registry against a requirements document. `top_k`
    /// truncates after ranking, so ranks are global positions.
    pub fn rank_text(
        &self,
        requirements: &str,
        top_k: Option<usize>,
        strict: bool,
        weight_overrides: &[(String, f64)],
        span_overrides: &[(String, NumericSpan)],
    ) -> Result<Vec<MatchResult>> {
        let mut req = parse_requirements(requirements, &self.graph)?;
        for (key, weight) in weight_overrides {
            if !req.entries.contains_key(key) {
                return Err(Error::Invalid(format!(
                    "weight override for `{key}` has no matching requirement entry"
                )));
            }
            req.weights.insert(key.clone(), *weight);
        }
        let mut options = RankOptions { strict, ..RankOptions::default() };
        for (key, span) in span_overrides {
            options.span_overrides.insert(key.clone(), *span);
        }
        let mut results = rank_services(
            &self.graph,
            &self.registry.snapshot(),
            &req,
            &self.reasoner,
            &options,
        )?;
        if let Some(k) = top_k {
            results.truncate(k);
        }
        Ok(results)
    }

    /// Registers every profile document in `text`, in order.
    pub fn register_text(&mut self, text: &str) -> Result<Vec<RegisterOutcome>> {
        let profiles = ServiceProfile::parse_all(text, &self.graph)?;
        let mut outcomes = Vec::with_capacity(profiles.len());
        for profile in profiles {
            let service_id = profile.service_id.clone();
            let created = self.registry.snapshot().get(&service_id).is_none();
            let revision = self.registry.register(profile)?;
            outcomes.push(RegisterOutcome { service_id, revision, created });
        }
        Ok(outcomes)
    }

    pub fn listing(&self) -> String {
        self.registry.snapshot().canonical_listing()
    }

    /// Scores two terms. `maya@7` style references pin versions; when both
    /// sides pin the same concept the version-aware score is used,
    /// otherwise plain graph proximity of the most specific nodes named.
    pub fn sim_terms(&self, left: &str, right: &str) -> Result<SimReport> {
        let lref = ConceptRef::parse(left)?;
        let rref = ConceptRef::parse(right)?;
        let l = lref.resolve(&self.graph)?;
        let r = rref.resolve(&self.graph)?;
        let (kind, value) = match (l.version, r.version) {
            (Some((lnode, llabel)), Some((rnode, rlabel))) if l.concept == r.concept => {
                let base = concept_sim(&self.graph, lnode, rnode, &self.reasoner);
                let score = equivalent_sim(base, llabel, rlabel, &self.reasoner)?;
                ("equivalent_sim", score.value())
            }
            _ => {
                let lnode = l.version.map(|(node, _)| node).unwrap_or(l.concept);
                let rnode = r.version.map(|(node, _)| node).unwrap_or(r.concept);
                let score = concept_sim(&self.graph, lnode, rnode, &self.reasoner);
                ("concept_sim", score.value())
            }
        };
        Ok(SimReport {
            kind: kind.to_string(),
            left: lref.canonical(),
            right: rref.canonical(),
            value,
        })
    }

    pub fn eval_texts(&self, queries: &str, gold: &str, k: usize) -> Result<EvalReport> {
        let queries = parse_all_requirements(queries, &self.graph)?;
        let gold = GoldJudgments::parse(gold)?;
        run_eval(
            &self.graph,
            &self.registry.snapshot(),
            &queries,
            &gold,
            k,
            &self.reasoner,
        )
    }
}

/// Coarse failure class, shared by the exit-code and HTTP-status mappings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or inconsistent input data.
    Data,
    /// A term, node, or version that does not exist.
    Resolution,
    /// The operating system said no.
    Io,
}

pub fn classify(error: &Error) -> ErrorClass {
    match error {
        Error::UnresolvedTerm(_) | Error::UnknownNode(_) | Error::NoVersionWithLabel { .. } => {
            ErrorClass::Resolution
        }
        Error::Io(_) => ErrorClass::Io,
        _ => ErrorClass::Data,
    }
}

/// Process exit code for a failed command: 1 for IO, 2 for usage (clap's
/// own), 3 for bad data, 4 for unresolved references.
pub fn exit_code(error: &Error) -> i32 {
    match classify(error) {
        ErrorClass::Io => 1,
        ErrorClass::Data => 3,
        ErrorClass::Resolution => 4,
    }
}

fn http_status(error: &Error) -> StatusCode {
    match classify(error) {
        ErrorClass::Io => StatusCode::INTERNAL_SERVER_ERROR,
        ErrorClass::Data => StatusCode::BAD_REQUEST,
        ErrorClass::Resolution => StatusCode::NOT_FOUND,
    }
}

/// Shared handler state. The engine slot starts empty when the server
/// binds before loading; data endpoints answer 503 until it is filled.
#[derive(Clone, Default)]
pub struct AppState {
    engine: Arc<RwLock<Option<Engine>>>,
}

impl AppState {
    pub fn empty() -> AppState {
        AppState::default()
    }

    pub fn ready(engine: Engine) -> AppState {
        AppState {
            engine: Arc::new(RwLock::new(Some(engine))),
        }
    }

    pub async fn install(&self, engine: Engine) {
        *self.engine.write().await = Some(engine);
    }
}

pub fn build_router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/services", get(list_services).post(register_service))
        .route("/search", post(search))
        .route("/sim", get(sim))
        .with_state(state)
}

fn error_body(error: &Error) -> Response {
    (http_status(error), Json(json!({ "error": error.to_string() }))).into_response()
}

fn not_ready() -> Response {
    (
        StatusCode::SERVICE_UNAVAILABLE,
        Json(json!({ "error": "engine is still loading" })),
    )
        .into_response()
}

async fn healthz(State(state): State<AppState>) -> Response {
    let ready = state.engine.read().await.is_some();
    Json(json!({ "ready": ready })).into_response()
}

async fn list_services(State(state): State<AppState>) -> Response {
    match state.engine.read().await.as_ref() {
        Some(engine) => engine.listing().into_response(),
        None => not_ready(),
    }
}

async fn register_service(State(state): State<AppState>, body: String) -> Response {
    match state.engine.write().await.as_mut() {
        Some(engine) => match engine.register_text(&body) {
            Ok(outcomes) => {
                let all_created = outcomes.iter().all(|o| o.created);
                let status = if all_created { StatusCode::CREATED } else { StatusCode::OK };
                (status, Json(json!({ "registered": outcomes }))).into_response()
            }
            Err(error) => error_body(&error),
        },
        None => not_ready(),
    }
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    k: Option<usize>,
    strict: Option<bool>,
}

async fn search(
    State(state): State<AppState>,
    Query(params): Query<SearchParams>,
    body: String,
) -> Response {
    match state.engine.read().await.as_ref() {
        Some(engine) => {
            match engine.rank_text(&body, params.k, params.strict.unwrap_or(false), &[], &[]) {
                Ok(results) => Json(results).into_response(),
                Err(error) => error_body(&error),
            }
        }
        None => not_ready(),
    }
}

#[derive(Debug, Deserialize)]
struct SimParams {
    x: String,
    y: String,
}

async fn sim(State(state): State<AppState>, Query(params): Query<SimParams>) -> Response {
    match state.engine.read().await.as_ref() {
        Some(engine) => match engine.sim_terms(&params.x, &params.y) {
            Ok(report) => Json(report).into_response(),
            Err(error) => error_body(&error),
        },
        None => not_ready(),
    }
}
