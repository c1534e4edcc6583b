//! Conjunctive filtering on categorical label counts, and heatmap vectors.

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{
    AnnotatedRecord, Category, CategoryVocabulary, Corpus, Vocabularies, MAX_WORKER_COUNT,
};

pub const DEFAULT_MIN_COUNT: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FacetError {
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("unknown label `{label}` in category {category}")]
    UnknownLabel { category: Category, label: String },
    #[error("min count {0} outside [1,5]")]
    InvalidMinCount(u8),
}

/// Keep records where at least `min_count` workers chose `label`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FacetSelection {
    pub category: Category,
    pub label: String,
    pub min_count: u8,
}

impl FacetSelection {
    pub fn new(category: Category, label: impl Into<String>) -> Self {
        FacetSelection {
            category,
            label: label.into(),
            min_count: DEFAULT_MIN_COUNT,
        }
    }

    pub fn at_least(mut self, min_count: u8) -> Self {
        self.min_count = min_count;
        self
    }

    pub fn validate(&self, vocabularies: &Vocabularies) -> Result<(), FacetError> {
        if !(1..=MAX_WORKER_COUNT).contains(&self.min_count) {
            return Err(FacetError::InvalidMinCount(self.min_count));
        }
        if !vocabularies.get(self.category).contains(&self.label) {
            return Err(FacetError::UnknownLabel {
                category: self.category,
                label: self.label.clone(),
            });
        }
        Ok(())
    }

    pub fn accepts(&self, record: &AnnotatedRecord) -> bool {
        record.count(self.category, &self.label) >= self.min_count
    }
}

/// True iff the record passes every selection and, when given, the
/// majority text-presence flag equals `text_present`.
pub fn record_passes(
    record: &AnnotatedRecord,
    selections: &[FacetSelection],
    text_present: Option<bool>,
) -> bool {
    selections.iter().all(|s| s.accepts(record))
        && text_present.is_none_or(|want| record.has_text() == want)
}

/// Ordinals (ascending) of records passing all selections.
pub fn filter_records(
    corpus: &Corpus,
    selections: &[FacetSelection],
    text_present: Option<bool>,
) -> Result<Vec<u32>, FacetError> {
    for s in selections {
        s.validate(corpus.vocabularies())?;
    }
    Ok(corpus
        .records()
        .iter()
        .enumerate()
        .filter(|(_, r)| record_passes(r, selections, text_present))
        .map(|(i, _)| i as u32)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeatmapCell {
    pub code: String,
    pub count: u8,
    /// `count / 5`.
    pub intensity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeatmapVector {
    pub category: Category,
    pub cells: Vec<HeatmapCell>,
}

/// One cell per vocabulary label, in vocabulary order.
pub fn heatmap_vector(record: &AnnotatedRecord, vocab: &CategoryVocabulary) -> HeatmapVector {
    let cells = vocab
        .labels
        .iter()
        .map(|label| {
            let count = record.count(vocab.category, &label.code);
            HeatmapCell {
                code: label.code.clone(),
                count,
                intensity: f64::from(count) / f64::from(MAX_WORKER_COUNT),
            }
        })
        .collect();
    HeatmapVector {
        category: vocab.category,
        cells,
    }
}

/// Heatmap for a category given by id.
pub fn heatmap_for(
    record: &AnnotatedRecord,
    category_id: &str,
    vocabularies: &Vocabularies,
) -> Result<HeatmapVector, FacetError> {
    let category = category_id
        .parse::<Category>()
        .map_err(|e| FacetError::UnknownCategory(e.0))?;
    Ok(heatmap_vector(record, vocabularies.get(category)))
}
