use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use allotax_core::{
    parse_ranked_list, render_report, render_svg, Alpha, Error, Format, RankedList, RenderOptions,
};
use axum::body::Bytes;
use axum::extract::DefaultBodyLimit;
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use tower_http::services::ServeDir;

use crate::{build_document, ServeArgs, EXIT_INPUT};

const ENTRY_PAGE: &str = include_str!("../assets/index.html");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareRequest<'a> {
    #[serde(borrow)]
    pub system_1: &'a RawValue,
    #[serde(borrow)]
    pub system_2: &'a RawValue,
    pub alpha: String,
    #[serde(default)]
    pub title_1: Option<String>,
    #[serde(default)]
    pub title_2: Option<String>,
    #[serde(default)]
    pub options: Option<RequestOptions>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestOptions {
    pub cells: Option<usize>,
    pub wordshift_n: Option<usize>,
    pub contours: Option<usize>,
    pub max_labels_per_side: Option<usize>,
}

impl From<RequestOptions> for RenderOptions {
    fn from(o: RequestOptions) -> Self {
        let d = RenderOptions::default();
        RenderOptions {
            cells: o.cells.unwrap_or(d.cells),
            wordshift_n: o.wordshift_n.unwrap_or(d.wordshift_n),
            contour_levels: o.contours.unwrap_or(d.contour_levels),
            max_labels_per_side: o.max_labels_per_side.unwrap_or(d.max_labels_per_side),
        }
    }
}

#[derive(Debug, Serialize)]
struct CompareResponse {
    svg: String,
    report: Box<RawValue>,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: &'static str,
    detail: String,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn bad_request(error: &'static str, detail: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error,
                detail: detail.into(),
            },
        }
    }

    fn from_core(field: &str, e: Error) -> Self {
        Self::bad_request(e.code(), format!("{field}: {e}"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, axum::Json(self.body)).into_response()
    }
}

/// Builds the service. Bodies above `max_bytes` are rejected with 413.
pub fn router(ui_dir: Option<PathBuf>, max_bytes: u64) -> Router {
    let limit = usize::try_from(max_bytes).unwrap_or(usize::MAX);
    let api = Router::new()
        .route("/api/allotaxonograph", post(allotaxonograph))
        .layer(DefaultBodyLimit::max(limit));
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(entry_page)),
    }
}

async fn entry_page() -> Html<&'static str> {
    Html(ENTRY_PAGE)
}

async fn allotaxonograph(body: Bytes) -> Result<Response, ApiError> {
    let response = tokio::task::spawn_blocking(move || compute(&body))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: ErrorBody {
                error: "internal",
                detail: e.to_string(),
            },
        })??;
    Ok(([(header::CONTENT_TYPE, "application/json")], response).into_response())
}

/// Runs one request end to end and returns the serialized response body.
pub fn compute(body: &[u8]) -> Result<String, ApiError> {
    let req: CompareRequest = serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request("bad_request", e.to_string()))?;
    let alpha = Alpha::parse(&req.alpha).map_err(|e| ApiError::from_core("alpha", e))?;
    let options = RenderOptions::from(req.options.unwrap_or_default());
    options
        .validate()
        .map_err(|e| ApiError::from_core("options", e))?;
    let a = system(req.system_1, "system_1")?;
    let b = system(req.system_2, "system_2")?;
    let title_1 = req.title_1.as_deref().unwrap_or("System 1");
    let title_2 = req.title_2.as_deref().unwrap_or("System 2");
    let doc = build_document(&a, &b, alpha, title_1, title_2, &options)
        .map_err(|e| ApiError::from_core("options", e))?;
    let report = RawValue::from_string(render_report(&doc)).expect("report is valid JSON");
    let response = CompareResponse {
        svg: render_svg(&doc),
        report,
    };
    Ok(serde_json::to_string(&response).expect("response serializes"))
}

fn system(raw: &RawValue, field: &str) -> Result<RankedList, ApiError> {
    parse_ranked_list(raw.get().as_bytes(), Format::Json, field)
        .map(|ingested| ingested.list)
        .map_err(|e| ApiError::from_core(field, e))
}

pub fn run(args: &ServeArgs) -> ExitCode {
    let addr: SocketAddr = match format!("{}:{}", args.bind, args.port).parse() {
        Ok(addr) => addr,
        Err(e) => {
            eprintln!("error: invalid bind address {}: {e}", args.bind);
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
    let app = router(args.ui_dir.clone(), args.max_bytes);
    runtime.block_on(async move {
        let listener = match tokio::net::TcpListener::bind(addr).await {
            Ok(l) => l,
            Err(e) => {
                eprintln!("error: cannot bind {addr}: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
        };
        eprintln!(
            "listening on http://{}",
            listener.local_addr().unwrap_or(addr)
        );
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        match axum::serve(listener, app)
            .with_graceful_shutdown(shutdown)
            .await
        {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        }
    })
}
