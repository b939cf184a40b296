//! Local HTTP query service over versioned, immutable diagram snapshots.
//!
//! Snapshot 0 is the input as given. `/recenter` never edits a snapshot: it
//! works out which input point the requested focus corresponds to, moves
//! that point to the origin, rebuilds, and stores the result under a new id.

use std::net::SocketAddr;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use hvd_core::{
    klein_distance, klein_to_poincare, nearest_neighbor, poincare_to_klein, recenter_sites,
    render_scene, HyperbolicVoronoiDiagram, KleinPoint, MobiusTransform, Model, Vec2,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::commands::{build_diagram, model_to_klein, seb_report, SebReport};
use crate::formats::{Metadata, PointSet, SceneFile};
use crate::CliError;

pub struct Snapshot {
    pub id: u64,
    /// Input point shown at the origin.
    pub focus: KleinPoint,
    pub points: PointSet,
    pub diagram: HyperbolicVoronoiDiagram,
}

impl Snapshot {
    fn build(id: u64, base: &PointSet, focus: KleinPoint) -> Result<Self, CliError> {
        let points = PointSet {
            sites: recenter_sites(&base.sites, focus)?,
            labels: base.labels.clone(),
            weights: base.weights.clone(),
        };
        let diagram = build_diagram(&points)?;
        Ok(Self {
            id,
            focus,
            points,
            diagram,
        })
    }

    /// Maps input coordinates to this snapshot's view.
    pub fn view_transform(&self) -> MobiusTransform {
        MobiusTransform::translate_to_origin(klein_to_poincare(self.focus))
    }

    pub fn scene(&self, model: Model, seed: u64) -> SceneFile {
        let mut meta = Metadata::new(seed);
        meta.snapshot = Some(self.id);
        SceneFile::from_scene(
            render_scene(&self.diagram, model),
            &self.points.labels,
            meta,
        )
    }
}

pub struct AppState {
    base: PointSet,
    seed: u64,
    snapshots: RwLock<Vec<Arc<Snapshot>>>,
    /// Serializes snapshot creation.
    creating: Mutex<()>,
}

impl AppState {
    pub fn new(base: PointSet, seed: u64) -> Result<Self, CliError> {
        let first = Snapshot::build(0, &base, KleinPoint::ORIGIN)?;
        Ok(Self {
            base,
            seed,
            snapshots: RwLock::new(vec![Arc::new(first)]),
            creating: Mutex::new(()),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn base(&self) -> &PointSet {
        &self.base
    }

    pub fn latest(&self) -> Arc<Snapshot> {
        let list = self.snapshots.read().expect("snapshot lock poisoned");
        Arc::clone(list.last().expect("snapshot 0 always exists"))
    }

    pub fn snapshot(&self, id: Option<u64>) -> Option<Arc<Snapshot>> {
        match id {
            None => Some(self.latest()),
            Some(id) => {
                let list = self.snapshots.read().expect("snapshot lock poisoned");
                usize::try_from(id).ok().and_then(|i| list.get(i)).cloned()
            }
        }
    }

    /// New snapshot whose view is centered on `focus`, a point given in the
    /// view of `from`.
    pub fn recenter(&self, from: &Snapshot, focus: KleinPoint) -> Result<Arc<Snapshot>, CliError> {
        let seen = from
            .view_transform()
            .inverse()
            .apply(klein_to_poincare(focus));
        let target = poincare_to_klein(hvd_core::PoincarePoint::new(seen.x(), seen.y())?);
        let _guard = self.creating.lock().expect("creation lock poisoned");
        let id = self.snapshots.read().expect("snapshot lock poisoned").len() as u64;
        let snap = Arc::new(Snapshot::build(id, &self.base, target)?);
        self.snapshots
            .write()
            .expect("snapshot lock poisoned")
            .push(Arc::clone(&snap));
        Ok(snap)
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }

    fn unknown_snapshot(id: Option<u64>) -> Self {
        Self {
            status: StatusCode::NOT_FOUND,
            message: format!("unknown snapshot {}", id.unwrap_or_default()),
        }
    }
}

impl From<CliError> for ApiError {
    fn from(e: CliError) -> Self {
        Self::bad_request(e.to_string())
    }
}

impl From<hvd_core::Error> for ApiError {
    fn from(e: hvd_core::Error) -> Self {
        Self::bad_request(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(ErrorBody {
                error: self.message,
            }),
        )
            .into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request(format!("bad request body: {e}")))
}

fn parse_model(model: Option<&str>) -> Result<Model, ApiError> {
    model
        .map_or(Ok(Model::Poincare), str::parse)
        .map_err(|e: hvd_core::UnknownModel| ApiError::bad_request(e.to_string()))
}

fn lookup(state: &AppState, id: Option<u64>) -> Result<Arc<Snapshot>, ApiError> {
    state.snapshot(id).ok_or(ApiError::unknown_snapshot(id))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub snapshots: usize,
    pub latest: u64,
}

async fn health(State(state): State<Arc<AppState>>) -> Json<Health> {
    let snapshots = state
        .snapshots
        .read()
        .expect("snapshot lock poisoned")
        .len();
    Json(Health {
        status: "ok".to_owned(),
        snapshots,
        latest: snapshots as u64 - 1,
    })
}

#[derive(Debug, Deserialize)]
struct SceneQuery {
    model: Option<String>,
    snapshot: Option<String>,
}

async fn scene(
    State(state): State<Arc<AppState>>,
    Query(q): Query<SceneQuery>,
) -> ApiResult<SceneFile> {
    let model = parse_model(q.model.as_deref())?;
    let id = q
        .snapshot
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| ApiError::bad_request(format!("bad snapshot id `{s}`")))
        })
        .transpose()?;
    let snap = lookup(&state, id)?;
    Ok(Json(snap.scene(model, state.seed)))
}

/// A point in the coordinates of `model` (Poincaré when absent).
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRequest {
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub snapshot: Option<u64>,
}

impl PointRequest {
    fn klein(&self) -> Result<KleinPoint, ApiError> {
        let model = parse_model(self.model.as_deref())?;
        Ok(model_to_klein(Vec2::new(self.x, self.y), model)?)
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct NnResponse {
    pub index: usize,
    pub label: Option<String>,
    pub distance: f64,
    pub snapshot: u64,
}

async fn nn(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<NnResponse> {
    let req: PointRequest = parse_body(&body)?;
    let snap = lookup(&state, req.snapshot)?;
    let q = req.klein()?;
    let index = nearest_neighbor(&snap.diagram, q);
    Ok(Json(NnResponse {
        index,
        label: snap.points.labels[index].clone(),
        distance: klein_distance(snap.points.sites[index], q),
        snapshot: snap.id,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SebRequest {
    pub indices: Vec<usize>,
    #[serde(default)]
    pub snapshot: Option<u64>,
    #[serde(default)]
    pub model: Option<String>,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct SebResponse {
    #[serde(flatten)]
    pub report: SebReport,
    pub snapshot: u64,
}

async fn seb(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<SebResponse> {
    let req: SebRequest = parse_body(&body)?;
    let snap = lookup(&state, req.snapshot)?;
    let model = parse_model(req.model.as_deref())?;
    if req.indices.is_empty() {
        return Err(ApiError::bad_request("indices must not be empty"));
    }
    let n = snap.points.sites.len();
    let mut points = Vec::with_capacity(req.indices.len());
    for &i in &req.indices {
        if i >= n {
            return Err(ApiError::bad_request(format!(
                "index {i} out of range for {n} sites"
            )));
        }
        points.push(snap.points.sites[i]);
    }
    Ok(Json(SebResponse {
        report: seb_report(&points, model, state.seed)?,
        snapshot: snap.id,
    }))
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct RecenterResponse {
    pub snapshot: u64,
    pub scene: SceneFile,
}

async fn recenter(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<RecenterResponse> {
    let req: PointRequest = parse_body(&body)?;
    let from = lookup(&state, req.snapshot)?;
    let model = parse_model(req.model.as_deref())?;
    let focus = req.klein()?;
    let state2 = Arc::clone(&state);
    let snap = tokio::task::spawn_blocking(move || state2.recenter(&from, focus))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: e.to_string(),
        })??;
    Ok(Json(RecenterResponse {
        snapshot: snap.id,
        scene: snap.scene(model, state.seed),
    }))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/scene", get(scene))
        .route("/nn", post(nn))
        .route("/seb", post(seb))
        .route("/recenter", post(recenter))
        .with_state(state)
}

/// Serves on `127.0.0.1:port` until the process is stopped.
pub async fn serve(state: Arc<AppState>, port: u16) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
