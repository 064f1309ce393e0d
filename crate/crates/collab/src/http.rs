//! JSON-over-HTTP front end of the piece store.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;

use crate::store::{Store, StoreError, Submission, DEFAULT_PAGE, MAX_BODY_BYTES};

/// Error body: `{code, message, line?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
}

struct Failure(StatusCode, ApiError);

impl Failure {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self(
            status,
            ApiError {
                code: code.to_string(),
                message: message.into(),
                line: None,
            },
        )
    }
}

impl IntoResponse for Failure {
    fn into_response(self) -> Response {
        (self.0, Json(self.1)).into_response()
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        let message = e.to_string();
        match e {
            StoreError::Parse(p) => Failure(
                StatusCode::UNPROCESSABLE_ENTITY,
                ApiError {
                    code: "invalid_scorefile".into(),
                    message,
                    line: Some(p.line),
                },
            ),
            StoreError::UnknownParent(_) => Failure::new(StatusCode::UNPROCESSABLE_ENTITY, "unknown_parent", message),
            StoreError::TooLarge { .. } => Failure::new(StatusCode::PAYLOAD_TOO_LARGE, "too_large", message),
            StoreError::PageTooLarge(_) => Failure::new(StatusCode::BAD_REQUEST, "bad_request", message),
            StoreError::NotFound(_) => Failure::new(StatusCode::NOT_FOUND, "not_found", message),
            StoreError::Io(_) | StoreError::Corrupt(_) => {
                tracing::error!(%message, "store failure");
                Failure::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
            }
        }
    }
}

type ApiResult<T> = Result<T, Failure>;

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, StoreError> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| Failure::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(Failure::from)
}

fn decode_submission(headers: &HeaderMap, body: &[u8]) -> ApiResult<Submission> {
    let content_type = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .unwrap_or("");
    let mime = content_type.split(';').next().unwrap_or("").trim();
    let bad = |e: String| Failure::new(StatusCode::BAD_REQUEST, "bad_request", e);
    match mime {
        "application/json" => serde_json::from_slice(body).map_err(|e| bad(format!("malformed JSON body: {e}"))),
        "application/x-www-form-urlencoded" => {
            serde_urlencoded::from_bytes(body).map_err(|e| bad(format!("malformed form body: {e}")))
        }
        other => Err(Failure::new(
            StatusCode::UNSUPPORTED_MEDIA_TYPE,
            "unsupported_media_type",
            format!("content type `{other}` is not JSON or a urlencoded form"),
        )),
    }
}

async fn submit(State(store): State<Arc<Store>>, headers: HeaderMap, body: Bytes) -> ApiResult<impl IntoResponse> {
    let submission = decode_submission(&headers, &body)?;
    let record = blocking(move || store.submit(submission)).await?;
    Ok((StatusCode::CREATED, Json(record)))
}

#[derive(Debug, Deserialize)]
struct ListParams {
    offset: Option<usize>,
    limit: Option<usize>,
    author: Option<String>,
}

async fn list(
    State(store): State<Arc<Store>>,
    params: Result<Query<ListParams>, QueryRejection>,
) -> ApiResult<impl IntoResponse> {
    let Query(params) = params.map_err(|e| Failure::new(StatusCode::BAD_REQUEST, "bad_request", e.body_text()))?;
    let page = blocking(move || {
        store.list(
            params.offset.unwrap_or(0),
            params.limit.unwrap_or(DEFAULT_PAGE),
            params.author.as_deref(),
        )
    })
    .await?;
    Ok(Json(page))
}

async fn fetch(State(store): State<Arc<Store>>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    let id: u64 = id
        .parse()
        .map_err(|_| Failure::new(StatusCode::NOT_FOUND, "not_found", format!("no piece `{id}`")))?;
    let record = blocking(move || store.get(id)).await?;
    Ok(Json(record))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub pieces: usize,
}

async fn health(State(store): State<Arc<Store>>) -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        pieces: store.len(),
    })
}

async fn fallback() -> Failure {
    Failure::new(StatusCode::NOT_FOUND, "not_found", "no such route")
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/pieces", get(list).post(submit))
        .route("/pieces/{id}", get(fetch))
        .route("/health", get(health))
        .fallback(fallback)
        // Urlencoding can triple a body; the decoded size is checked by the store.
        .layer(DefaultBodyLimit::max(3 * MAX_BODY_BYTES + 4096))
        .with_state(store)
}

/// Serves `store` on an already bound listener until the future is dropped.
pub async fn serve(listener: TcpListener, store: Arc<Store>) -> std::io::Result<()> {
    axum::serve(listener, router(store)).await
}

/// Binds `addr` and serves.
pub async fn bind_and_serve(addr: SocketAddr, store: Arc<Store>) -> std::io::Result<()> {
    let listener = TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "collaboration service listening");
    serve(listener, store).await
}
