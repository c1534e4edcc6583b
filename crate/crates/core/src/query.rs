//! Query execution: text search, facet filtering, ordering and pagination
//! composed into one pass over an immutable corpus and index.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{AnnotatedRecord, Category, Corpus, ANSWER_COUNT, CAPTION_COUNT};
use crate::facets::{self, FacetError, FacetSelection, HeatmapVector};
use crate::ranking::{self, OrderMode, RankingError};
use crate::textindex::{build_index, Field, InvertedIndex, Match};

/// Records per result page.
pub const PAGE_SIZE: usize = 50;

/// An annotation layer that can be shown or hidden in results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Question,
    Answers,
    Captions,
    AnswerDifference,
    Skills,
    QualityIssues,
    TextPresence,
}

impl Group {
    pub const ALL: [Group; 7] = [
        Group::Question,
        Group::Answers,
        Group::Captions,
        Group::AnswerDifference,
        Group::Skills,
        Group::QualityIssues,
        Group::TextPresence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Question => "question",
            Group::Answers => "answers",
            Group::Captions => "captions",
            Group::AnswerDifference => "answer_difference",
            Group::Skills => "skills",
            Group::QualityIssues => "quality_issues",
            Group::TextPresence => "text_presence",
        }
    }

    pub fn all() -> BTreeSet<Group> {
        Group::ALL.into_iter().collect()
    }
}

impl From<Category> for Group {
    fn from(c: Category) -> Self {
        match c {
            Category::AnswerDifference => Group::AnswerDifference,
            Category::Skills => Group::Skills,
            Category::QualityIssues => Group::QualityIssues,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown annotation group `{0}`")]
pub struct UnknownGroup(pub String);

impl FromStr for Group {
    type Err = UnknownGroup;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Group::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| UnknownGroup(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    /// At most one query string per field; all must match.
    pub text_queries: BTreeMap<Field, String>,
    /// Exact filename lookup; excludes every other criterion.
    pub filename: Option<String>,
    pub selections: Vec<FacetSelection>,
    pub text_present: Option<bool>,
    /// `None` picks the default for the criteria present.
    pub order: Option<OrderMode>,
    /// 1-based.
    pub page: usize,
    pub visible_groups: BTreeSet<Group>,
}

impl Default for Query {
    fn default() -> Self {
        Query {
            text_queries: BTreeMap::new(),
            filename: None,
            selections: Vec::new(),
            text_present: None,
            order: None,
            page: 1,
            visible_groups: Group::all(),
        }
    }
}

impl Query {
    pub fn text(mut self, field: Field, query: impl Into<String>) -> Self {
        self.text_queries.insert(field, query.into());
        self
    }

    pub fn select(mut self, selection: FacetSelection) -> Self {
        self.selections.push(selection);
        self
    }

    pub fn order_by(mut self, mode: OrderMode) -> Self {
        self.order = Some(mode);
        self
    }

    pub fn page(mut self, page: usize) -> Self {
        self.page = page;
        self
    }

    /// Relevance with text queries, else categorical with selections,
    /// else filename.
    pub fn effective_order(&self) -> OrderMode {
        self.order.unwrap_or(if !self.text_queries.is_empty() {
            OrderMode::Relevance
        } else if !self.selections.is_empty() {
            OrderMode::Categorical
        } else {
            OrderMode::Filename
        })
    }

    fn has_filters(&self) -> bool {
        !self.text_queries.is_empty() || !self.selections.is_empty() || self.text_present.is_some()
    }

    pub fn validate(&self, corpus: &Corpus) -> Result<(), QueryError> {
        if self.page == 0 {
            return Err(QueryError::InvalidPage);
        }
        if self.filename.is_some() && self.has_filters() {
            return Err(QueryError::ConflictingCriteria);
        }
        for s in &self.selections {
            s.validate(corpus.vocabularies())?;
        }
        match self.effective_order() {
            OrderMode::Relevance if self.text_queries.is_empty() => {
                Err(QueryError::OrderNotApplicable(OrderMode::Relevance))
            }
            OrderMode::Categorical if self.selections.is_empty() => {
                Err(QueryError::OrderNotApplicable(OrderMode::Categorical))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("page must be at least 1")]
    InvalidPage,
    #[error("page {page} is beyond the last page {last_page}")]
    PageOutOfRange { page: usize, last_page: usize },
    #[error("filename lookup cannot be combined with text or facet criteria")]
    ConflictingCriteria,
    #[error("order `{0}` needs a matching criterion")]
    OrderNotApplicable(OrderMode),
    #[error(transparent)]
    Facet(#[from] FacetError),
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TextPresence {
    pub count: u8,
    pub present: bool,
}

impl TextPresence {
    fn of(record: &AnnotatedRecord) -> Self {
        TextPresence {
            count: record.text_present,
            present: record.has_text(),
        }
    }
}

/// A result item; hidden groups are left out of the payload entirely.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultItem {
    pub filename: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub question: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answers: Option<[String; ANSWER_COUNT]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub captions: Option<[String; CAPTION_COUNT]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text_present: Option<TextPresence>,
    pub heatmaps: Vec<HeatmapVector>,
    pub match_score: u32,
    pub entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultPage {
    #[serde(rename = "total")]
    pub total_count: usize,
    pub page: usize,
    pub page_size: usize,
    /// 1-based index of the first item; `last_index + 1` on an empty page.
    #[serde(rename = "first")]
    pub first_index: usize,
    #[serde(rename = "last")]
    pub last_index: usize,
    pub items: Vec<ResultItem>,
}

/// Everything known about one record, for detail views.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecordDetail {
    #[serde(flatten)]
    pub record: AnnotatedRecord,
    pub text_presence: TextPresence,
    pub entropy: f64,
    pub heatmaps: Vec<HeatmapVector>,
}

/// A corpus with its index. Read-only after construction, so a shared
/// reference can serve any number of concurrent queries.
#[derive(Debug)]
pub struct Engine {
    corpus: Corpus,
    index: InvertedIndex,
}

impl Engine {
    pub fn new(corpus: Corpus) -> Self {
        let index = build_index(&corpus);
        Engine { corpus, index }
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn index(&self) -> &InvertedIndex {
        &self.index
    }

    pub fn execute(&self, query: &Query) -> Result<ResultPage, QueryError> {
        execute(&self.corpus, &self.index, query)
    }

    /// The complete ordered result list, before pagination.
    pub fn ranked(&self, query: &Query) -> Result<Vec<Match>, QueryError> {
        ranked(&self.corpus, &self.index, query)
    }

    pub fn record_detail(&self, filename: &str) -> Option<RecordDetail> {
        let ordinal = self.index.lookup_filename(filename)?;
        let record = self.corpus.record(ordinal);
        Some(RecordDetail {
            record: record.clone(),
            text_presence: TextPresence::of(record),
            entropy: self.corpus.entropy(ordinal),
            heatmaps: self
                .corpus
                .vocabularies()
                .iter()
                .map(|v| facets::heatmap_vector(record, v))
                .collect(),
        })
    }
}

fn candidates(corpus: &Corpus, index: &InvertedIndex, query: &Query) -> Vec<Match> {
    if let Some(name) = &query.filename {
        return index
            .lookup_filename(name)
            .map(|ordinal| Match { ordinal, score: 0 })
            .into_iter()
            .collect();
    }
    let mut text_hits: Option<Vec<Match>> = None;
    for (&field, text) in &query.text_queries {
        let hits = index.search_field(field, text);
        text_hits = Some(match text_hits {
            None => hits,
            Some(prev) => intersect_summing(&prev, &hits),
        });
    }
    let base = text_hits.unwrap_or_else(|| {
        (0..corpus.len() as u32)
            .map(|ordinal| Match { ordinal, score: 0 })
            .collect()
    });
    base.into_iter()
        .filter(|m| {
            facets::record_passes(
                corpus.record(m.ordinal),
                &query.selections,
                query.text_present,
            )
        })
        .collect()
}

/// Intersection of two ordinal-sorted match lists, adding scores.
fn intersect_summing(a: &[Match], b: &[Match]) -> Vec<Match> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].ordinal.cmp(&b[j].ordinal) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(Match {
                    ordinal: a[i].ordinal,
                    score: a[i].score + b[j].score,
                });
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn ranked(
    corpus: &Corpus,
    index: &InvertedIndex,
    query: &Query,
) -> Result<Vec<Match>, QueryError> {
    query.validate(corpus)?;
    let hits = candidates(corpus, index, query);
    Ok(ranking::order_matches(
        &hits,
        corpus,
        query.effective_order(),
        &query.selections,
    )?)
}

pub fn execute(
    corpus: &Corpus,
    index: &InvertedIndex,
    query: &Query,
) -> Result<ResultPage, QueryError> {
    let all = ranked(corpus, index, query)?;
    let total = all.len();
    let last_page = total.div_ceil(PAGE_SIZE).max(1);
    if query.page > last_page {
        return Err(QueryError::PageOutOfRange {
            page: query.page,
            last_page,
        });
    }
    let start = (query.page - 1) * PAGE_SIZE;
    let end = total.min(query.page * PAGE_SIZE);
    let items = all[start..end]
        .iter()
        .map(|m| result_item(corpus, m, &query.visible_groups))
        .collect();
    Ok(ResultPage {
        total_count: total,
        page: query.page,
        page_size: PAGE_SIZE,
        first_index: start + 1,
        last_index: end,
        items,
    })
}

fn result_item(corpus: &Corpus, m: &Match, visible: &BTreeSet<Group>) -> ResultItem {
    let record = corpus.record(m.ordinal);
    let shown = |g: Group| visible.contains(&g);
    ResultItem {
        filename: record.filename.clone(),
        question: shown(Group::Question).then(|| record.question.clone()),
        answers: shown(Group::Answers).then(|| record.answers.clone()),
        captions: shown(Group::Captions).then(|| record.captions.clone()),
        text_present: shown(Group::TextPresence).then(|| TextPresence::of(record)),
        heatmaps: corpus
            .vocabularies()
            .iter()
            .filter(|v| shown(v.category.into()))
            .map(|v| facets::heatmap_vector(record, v))
            .collect(),
        match_score: m.score,
        entropy: corpus.entropy(m.ordinal),
    }
}
