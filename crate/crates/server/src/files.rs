//! Static files: images and the UI bundle.
//!
//! Requested names are checked lexically first (no separators in image
//! names, no `..` anywhere), then the resolved file must still live under
//! its root after symlinks are followed.

use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode, Uri};
use axum::response::{IntoResponse, Response};

use crate::{error_json, AppState};

const PLACEHOLDER_INDEX: &str = "<!doctype html>
<html><head><meta charset=\"utf-8\"><title>vqbrowse</title></head>
<body>
<h1>vqbrowse</h1>
<p>No UI bundle is configured. The JSON API is available at
<a href=\"/api/search\">/api/search</a> and <a href=\"/api/vocab\">/api/vocab</a>.</p>
</body></html>
";

pub(crate) fn content_type(path: &FsPath) -> &'static str {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("jpg" | "jpeg") => "image/jpeg",
        Some("png") => "image/png",
        Some("gif") => "image/gif",
        Some("webp") => "image/webp",
        Some("bmp") => "image/bmp",
        Some("svg") => "image/svg+xml",
        Some("ico") => "image/x-icon",
        Some("html" | "htm") => "text/html; charset=utf-8",
        Some("js" | "mjs") => "text/javascript; charset=utf-8",
        Some("css") => "text/css; charset=utf-8",
        Some("json") => "application/json",
        Some("txt") => "text/plain; charset=utf-8",
        _ => "application/octet-stream",
    }
}

/// A single file name: no separators, no parent references, no NUL.
pub(crate) fn is_plain_name(name: &str) -> bool {
    !name.is_empty() && name != "." && !name.contains("..") && !name.contains(['/', '\\', '\0'])
}

fn not_found(what: &str) -> Response {
    error_json(
        StatusCode::NOT_FOUND,
        "not_found",
        format!("`{what}` not found"),
    )
}

fn bad_path(what: &str) -> Response {
    error_json(
        StatusCode::BAD_REQUEST,
        "invalid_path",
        format!("`{what}` is not an acceptable file name"),
    )
}

async fn send_file(root: &FsPath, relative: &str) -> Response {
    let candidate = root.join(relative);
    let (Ok(root), Ok(resolved)) = (
        tokio::fs::canonicalize(root).await,
        tokio::fs::canonicalize(&candidate).await,
    ) else {
        return not_found(relative);
    };
    if !resolved.starts_with(&root) || !resolved.is_file() {
        return not_found(relative);
    }
    match tokio::fs::read(&resolved).await {
        Ok(bytes) => (
            StatusCode::OK,
            [(header::CONTENT_TYPE, content_type(&resolved))],
            Body::from(bytes),
        )
            .into_response(),
        Err(err) => {
            tracing::warn!(path = %resolved.display(), %err, "read failed");
            not_found(relative)
        }
    }
}

pub(crate) async fn image(
    State(state): State<Arc<AppState>>,
    Path(name): Path<String>,
) -> Response {
    if !is_plain_name(&name) {
        return bad_path(&name);
    }
    match &state.image_dir {
        Some(dir) => send_file(dir, &name).await,
        None => not_found(&name),
    }
}

fn ui_relative(uri: &Uri) -> Option<PathBuf> {
    let decoded = percent_decode(uri.path().trim_start_matches('/'))?;
    if decoded.is_empty() {
        return Some(PathBuf::from("index.html"));
    }
    let mut out = PathBuf::new();
    for part in decoded.split('/') {
        if !is_plain_name(part) {
            return None;
        }
        out.push(part);
    }
    Some(out)
}

fn percent_decode(s: &str) -> Option<String> {
    percent_encoding::percent_decode_str(s)
        .decode_utf8()
        .ok()
        .map(|c| c.into_owned())
}

pub(crate) async fn ui(State(state): State<Arc<AppState>>, uri: Uri) -> Response {
    let Some(relative) = ui_relative(&uri) else {
        return bad_path(uri.path());
    };
    match &state.ui_dir {
        Some(dir) => send_file(dir, &relative.to_string_lossy()).await,
        None if relative == FsPath::new("index.html") => (
            StatusCode::OK,
            [(header::CONTENT_TYPE, "text/html; charset=utf-8")],
            PLACEHOLDER_INDEX,
        )
            .into_response(),
        None => not_found(uri.path()),
    }
}
