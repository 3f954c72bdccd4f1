//! Read-only JSON query service over a [`Session`].

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::QueryRejection;
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde_json::{json, Value};
use ship_core::hierarchy::{Objective, MAX_POWER};
use ship_core::io::{labels_json, HierarchyFile, TreeFile};
use ship_core::partition::median_of;

use crate::select::{resolve_objective, select, Method};
use crate::session::Session;

pub const META_SCHEMA: &str = "ship-meta/1";
pub const POINTS_SCHEMA: &str = "ship-points/1";
pub const CURVE_SCHEMA: &str = "ship-curve/1";
pub const ELBOWS_SCHEMA: &str = "ship-elbows/1";
pub const PARTITION_SCHEMA: &str = "ship-partition/1";

const DEFAULT_ZMAX: u32 = 5;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    error: &'static str,
    detail: String,
}

impl ApiError {
    fn bad_request(detail: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            error: "bad_request",
            detail: detail.into(),
        }
    }

    fn not_found(detail: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            error: "not_found",
            detail: detail.into(),
        }
    }

    fn unprocessable(detail: impl ToString) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            error: "unprocessable",
            detail: detail.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"error": self.error, "detail": self.detail}))).into_response()
    }
}

type Params = Result<Query<HashMap<String, String>>, QueryRejection>;
type ApiResult = Result<Json<Value>, ApiError>;

// Query parameters with unknown keys rejected.
struct Args(HashMap<String, String>);

impl Args {
    fn new(params: Params, allowed: &[&str]) -> Result<Self, ApiError> {
        let Query(map) = params.map_err(|e| ApiError::bad_request(e.body_text()))?;
        let mut unknown: Vec<&String> = map.keys().filter(|k| !allowed.contains(&k.as_str())).collect();
        unknown.sort();
        if let Some(k) = unknown.first() {
            return Err(ApiError::bad_request(format!("unknown parameter {k:?}; allowed: {}", allowed.join(", "))));
        }
        Ok(Args(map))
    }

    fn str(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ApiError> {
        self.str(key)
            .map(|v| v.trim().parse().map_err(|_| ApiError::bad_request(format!("invalid value {v:?} for {key}"))))
            .transpose()
    }

    fn objective(&self, default: Objective) -> Result<Objective, ApiError> {
        resolve_objective(self.str("objective"), self.parse("z")?, default).map_err(ApiError::bad_request)
    }
}

/// The service routes over `session`.
pub fn router(session: Arc<Session>) -> Router {
    Router::new()
        .route("/meta", get(meta))
        .route("/points", get(points))
        .route("/tree", get(tree))
        .route("/hierarchy", get(hierarchy))
        .route("/curve", get(curve))
        .route("/elbows", get(elbows))
        .route("/partition", get(partition))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .with_state(session)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(session: Arc<Session>, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(session)).await
}

// Runs CPU-bound work off the async workers.
async fn blocking(session: Arc<Session>, f: impl FnOnce(&Session) -> ApiResult + Send + 'static) -> ApiResult {
    tokio::task::spawn_blocking(move || f(&session)).await.unwrap_or_else(|e| {
        Err(ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            error: "internal",
            detail: e.to_string(),
        })
    })
}

async fn meta(State(s): State<Arc<Session>>, params: Params) -> ApiResult {
    Args::new(params, &[])?;
    let tree = s.tree();
    Ok(Json(json!({
        "schema": META_SCHEMA,
        "n_points": tree.n_points(),
        "n_nodes": tree.len(),
        "root_value": tree.value(tree.root()),
        "has_points": s.points().is_some(),
        "dim": s.points().map(|p| p.dim()),
        "max_z": MAX_POWER,
        "methods": ["k", "elbow", "moe", "threshold", "stability"],
    })))
}

async fn points(State(s): State<Arc<Session>>, params: Params) -> ApiResult {
    Args::new(params, &[])?;
    let p = s.points().ok_or_else(|| ApiError::not_found("no points were loaded"))?;
    let rows: Vec<&[f64]> = p.iter().collect();
    Ok(Json(json!({"schema": POINTS_SCHEMA, "dim": p.dim(), "points": rows})))
}

async fn tree(State(s): State<Arc<Session>>, params: Params) -> ApiResult {
    Args::new(params, &[])?;
    blocking(s, |s| Ok(Json(json!(TreeFile::from_tree(s.tree()))))).await
}

async fn hierarchy(State(s): State<Arc<Session>>, params: Params) -> ApiResult {
    let args = Args::new(params, &["objective", "z"])?;
    let objective = args.objective(Objective::MEDIAN)?;
    blocking(s, move |s| {
        let h = s.hierarchy(objective).map_err(ApiError::unprocessable)?;
        Ok(Json(json!(HierarchyFile::from_hierarchy(h))))
    })
    .await
}

async fn curve(State(s): State<Arc<Session>>, params: Params) -> ApiResult {
    let args = Args::new(params, &["objective", "z"])?;
    let objective = args.objective(Objective::MEDIAN)?;
    blocking(s, move |s| {
        let h = s.hierarchy(objective).map_err(ApiError::unprocessable)?;
        Ok(Json(json!({
            "schema": CURVE_SCHEMA,
            "objective": objective.to_string(),
            "losses": h.curve().losses(),
        })))
    })
    .await
}

async fn elbows(State(s): State<Arc<Session>>, params: Params) -> ApiResult {
    let args = Args::new(params, &["zmax"])?;
    let zmax = args.parse::<u32>("zmax")?.unwrap_or(DEFAULT_ZMAX);
    if !(1..=MAX_POWER).contains(&zmax) {
        return Err(ApiError::bad_request(format!("zmax must be in 1..={MAX_POWER}, got {zmax}")));
    }
    blocking(s, move |s| {
        let powers: Vec<u32> = (1..=zmax).collect();
        let found = s.elbows(&powers).map_err(ApiError::unprocessable)?;
        let ks: Vec<usize> = found.iter().map(|&(_, k)| k).collect();
        Ok(Json(json!({
            "schema": ELBOWS_SCHEMA,
            "elbows": found.iter().map(|&(z, k)| json!({"z": z, "k": k})).collect::<Vec<_>>(),
            "median_k": median_of(&ks),
        })))
    })
    .await
}

async fn partition(State(s): State<Arc<Session>>, params: Params) -> ApiResult {
    let args = Args::new(params, &["method", "k", "eps", "min_cluster_size", "objective", "z", "zmax"])?;
    let name = args.str("method").ok_or_else(|| ApiError::bad_request("method is required"))?;
    let zmax: Option<u32> = args.parse("zmax")?;
    let method = Method::from_params(
        name,
        args.parse("k")?,
        args.parse("eps")?,
        args.parse("min_cluster_size")?,
        zmax.map(|m| (1..=m).collect()),
    )
    .map_err(ApiError::bad_request)?;
    let objective = args.objective(method.default_objective())?;
    blocking(s, move |s| {
        let h = s.hierarchy(objective).map_err(ApiError::unprocessable)?;
        let sel = select(h, &method, |p| s.elbows(p)).map_err(ApiError::unprocessable)?;
        let part = &sel.partition;
        let clusters: Vec<Value> = part
            .clusters()
            .iter()
            .enumerate()
            .map(|(c, members)| {
                json!({
                    "label": c,
                    "size": members.len(),
                    "center": part.centers().map(|cs| cs[c]),
                })
            })
            .collect();
        Ok(Json(json!({
            "schema": PARTITION_SCHEMA,
            "method": method.name(),
            "objective": objective.to_string(),
            "k": part.k(),
            "chosen_k": sel.chosen_k,
            "elbows": sel.elbows.map(|e| e.iter().map(|&(z, k)| json!({"z": z, "k": k})).collect::<Vec<_>>()),
            "noise": part.noise_count(),
            "clusters": clusters,
            "labels": labels_json(part),
            "n_points": part.n_points(),
        })))
    })
    .await
}
