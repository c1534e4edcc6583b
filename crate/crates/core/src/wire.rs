//! The search wire contract shared by the HTTP API and the CLI.
//!
//! Query parameters:
//!
//! | name          | repeat | value                                              |
//! |---------------|--------|----------------------------------------------------|
//! | `q_question`  | no     | text query on the question                         |
//! | `q_answers`   | no     | text query on the ten answers                      |
//! | `q_captions`  | no     | text query on the five captions                    |
//! | `filename`    | no     | exact filename; excludes text and facet criteria   |
//! | `sel`         | yes    | `CATEGORY.LABEL[.MINCOUNT]`                         |
//! | `text_present`| no     | `true`/`false` (also `1`/`0`)                       |
//! | `order`       | no     | `relevance`, `answer_diversity`, `categorical`, `filename` |
//! | `page`        | no     | 1-based page number                                |
//! | `show`        | yes    | annotation group to include; absent means all      |
//!
//! Empty values count as absent, except `show=` which selects no groups.
//! Bodies are compact JSON followed by a single newline, so a response body
//! and `vqbrowse query --json` output are byte-identical.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Category, MAX_WORKER_COUNT};
use crate::facets::{FacetError, FacetSelection};
use crate::query::{Engine, Group, Query, QueryError};
use crate::ranking::RankingError;
use crate::textindex::Field;

/// Stable machine-readable error codes for rejected requests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    UnknownParameter,
    DuplicateParameter,
    InvalidPage,
    PageOutOfRange,
    InvalidSelection,
    UnknownCategory,
    UnknownLabel,
    InvalidMinCount,
    InvalidTextPresent,
    InvalidOrder,
    OrderNotApplicable,
    ConflictingCriteria,
    UnknownGroup,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 13] = [
        ErrorCode::UnknownParameter,
        ErrorCode::DuplicateParameter,
        ErrorCode::InvalidPage,
        ErrorCode::PageOutOfRange,
        ErrorCode::InvalidSelection,
        ErrorCode::UnknownCategory,
        ErrorCode::UnknownLabel,
        ErrorCode::InvalidMinCount,
        ErrorCode::InvalidTextPresent,
        ErrorCode::InvalidOrder,
        ErrorCode::OrderNotApplicable,
        ErrorCode::ConflictingCriteria,
        ErrorCode::UnknownGroup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::UnknownParameter => "unknown_parameter",
            ErrorCode::DuplicateParameter => "duplicate_parameter",
            ErrorCode::InvalidPage => "invalid_page",
            ErrorCode::PageOutOfRange => "page_out_of_range",
            ErrorCode::InvalidSelection => "invalid_selection",
            ErrorCode::UnknownCategory => "unknown_category",
            ErrorCode::UnknownLabel => "unknown_label",
            ErrorCode::InvalidMinCount => "invalid_min_count",
            ErrorCode::InvalidTextPresent => "invalid_text_present",
            ErrorCode::InvalidOrder => "invalid_order",
            ErrorCode::OrderNotApplicable => "order_not_applicable",
            ErrorCode::ConflictingCriteria => "conflicting_criteria",
            ErrorCode::UnknownGroup => "unknown_group",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Serialized as `{"error": code, "detail": message}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Error)]
#[error("{code}: {detail}")]
pub struct ApiError {
    #[serde(rename = "error")]
    pub code: ErrorCode,
    pub detail: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, detail: impl Into<String>) -> Self {
        ApiError {
            code,
            detail: detail.into(),
        }
    }

    pub fn to_body(&self) -> String {
        to_body(self)
    }
}

impl From<QueryError> for ApiError {
    fn from(err: QueryError) -> Self {
        let code = match &err {
            QueryError::InvalidPage => ErrorCode::InvalidPage,
            QueryError::PageOutOfRange { .. } => ErrorCode::PageOutOfRange,
            QueryError::ConflictingCriteria => ErrorCode::ConflictingCriteria,
            QueryError::OrderNotApplicable(_) => ErrorCode::OrderNotApplicable,
            QueryError::Facet(FacetError::UnknownCategory(_)) => ErrorCode::UnknownCategory,
            QueryError::Facet(FacetError::UnknownLabel { .. }) => ErrorCode::UnknownLabel,
            QueryError::Facet(FacetError::InvalidMinCount(_)) => ErrorCode::InvalidMinCount,
            QueryError::Ranking(_) => ErrorCode::InvalidOrder,
        };
        ApiError::new(code, err.to_string())
    }
}

/// Compact JSON plus trailing newline.
pub fn to_body<T: Serialize + ?Sized>(value: &T) -> String {
    let mut body = serde_json::to_string(value).expect("response serializes");
    body.push('\n');
    body
}

/// Parses `CATEGORY.LABEL[.MINCOUNT]`.
pub fn parse_selection(raw: &str) -> Result<FacetSelection, ApiError> {
    let invalid = || {
        ApiError::new(
            ErrorCode::InvalidSelection,
            format!("`{raw}` is not CATEGORY.LABEL[.MINCOUNT]"),
        )
    };
    let (category, rest) = raw.split_once('.').ok_or_else(invalid)?;
    let category: Category = category
        .parse()
        .map_err(|e: crate::corpus::UnknownCategory| {
            ApiError::new(ErrorCode::UnknownCategory, e.to_string())
        })?;
    let (label, min_count) = match rest.rsplit_once('.') {
        Some((label, digits))
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) =>
        {
            let n: u8 = digits.parse().map_err(|_| {
                ApiError::new(
                    ErrorCode::InvalidMinCount,
                    format!("min count {digits} outside [1,{MAX_WORKER_COUNT}]"),
                )
            })?;
            (label, n)
        }
        _ => (rest, crate::facets::DEFAULT_MIN_COUNT),
    };
    if label.is_empty() {
        return Err(invalid());
    }
    Ok(FacetSelection::new(category, label).at_least(min_count))
}

fn parse_bool(raw: &str) -> Result<bool, ApiError> {
    match raw {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        _ => Err(ApiError::new(
            ErrorCode::InvalidTextPresent,
            format!("text_present must be true or false, got `{raw}`"),
        )),
    }
}

/// Decodes query parameters into a [`Query`]. Vocabulary checks happen at
/// execution time.
pub fn parse_search_params<I, K, V>(pairs: I) -> Result<Query, ApiError>
where
    I: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: AsRef<str>,
{
    let mut query = Query::default();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut shown: Option<BTreeSet<Group>> = None;

    for (key, value) in pairs {
        let (key, value) = (key.as_ref(), value.as_ref());
        let single = matches!(
            key,
            "q_question"
                | "q_answers"
                | "q_captions"
                | "filename"
                | "text_present"
                | "order"
                | "page"
        );
        if single && !seen.insert(key.to_string()) {
            return Err(ApiError::new(
                ErrorCode::DuplicateParameter,
                format!("`{key}` given more than once"),
            ));
        }
        if key == "show" {
            let groups = shown.get_or_insert_with(BTreeSet::new);
            if !value.is_empty() {
                let group: Group = value.parse().map_err(|e: crate::query::UnknownGroup| {
                    ApiError::new(ErrorCode::UnknownGroup, e.to_string())
                })?;
                groups.insert(group);
            }
            continue;
        }
        if !single && key != "sel" {
            return Err(ApiError::new(
                ErrorCode::UnknownParameter,
                format!("unknown parameter `{key}`"),
            ));
        }
        if value.trim().is_empty() {
            continue;
        }
        match key {
            "q_question" => {
                query
                    .text_queries
                    .insert(Field::Question, value.to_string());
            }
            "q_answers" => {
                query.text_queries.insert(Field::Answers, value.to_string());
            }
            "q_captions" => {
                query
                    .text_queries
                    .insert(Field::Captions, value.to_string());
            }
            "filename" => query.filename = Some(value.to_string()),
            "sel" => query.selections.push(parse_selection(value)?),
            "text_present" => query.text_present = Some(parse_bool(value)?),
            "order" => {
                query.order = Some(value.parse().map_err(|e: RankingError| {
                    ApiError::new(ErrorCode::InvalidOrder, e.to_string())
                })?)
            }
            "page" => {
                query.page = value
                    .parse()
                    .ok()
                    .filter(|&p: &usize| p >= 1)
                    .ok_or_else(|| {
                        ApiError::new(
                            ErrorCode::InvalidPage,
                            format!("page must be an integer >= 1, got `{value}`"),
                        )
                    })?
            }
            _ => unreachable!("parameter names checked above"),
        }
    }
    if let Some(groups) = shown {
        query.visible_groups = groups;
    }
    Ok(query)
}

/// Runs a search request end to end and returns the response body.
pub fn search_body<I, K, V>(engine: &Engine, pairs: I) -> Result<String, ApiError>
where
    I: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: AsRef<str>,
{
    let query = parse_search_params(pairs)?;
    let page = engine.execute(&query)?;
    Ok(to_body(&page))
}

/// Inverse of [`parse_search_params`] for a query, used by clients that
/// build requests programmatically.
pub fn to_params(query: &Query) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (field, text) in &query.text_queries {
        out.push((format!("q_{field}"), text.clone()));
    }
    if let Some(name) = &query.filename {
        out.push(("filename".into(), name.clone()));
    }
    for s in &query.selections {
        out.push((
            "sel".into(),
            format!("{}.{}.{}", s.category, s.label, s.min_count),
        ));
    }
    if let Some(flag) = query.text_present {
        out.push(("text_present".into(), flag.to_string()));
    }
    if let Some(order) = query.order {
        out.push(("order".into(), order.as_str().into()));
    }
    out.push(("page".into(), query.page.to_string()));
    if query.visible_groups != Group::all() {
        if query.visible_groups.is_empty() {
            out.push(("show".into(), String::new()));
        }
        for g in &query.visible_groups {
            out.push(("show".into(), g.as_str().into()));
        }
    }
    out
}

/// Convenience for building selections from static strings in tests and
/// tools; panics on malformed input.
pub fn selection(raw: &str) -> FacetSelection {
    parse_selection(raw).unwrap_or_else(|e| panic!("bad selection `{raw}`: {e}"))
}
