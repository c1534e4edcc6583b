//! Search, faceted filtering and ranking over crowd-annotated
//! visual-question records.
//!
//! A [`Corpus`] is loaded from disk (or generated), indexed once into an
//! [`Engine`], and then queried concurrently through [`Engine::execute`].
//! The [`wire`] module holds the request/response contract shared by the
//! HTTP server and the command line.

pub mod corpus;
pub mod facets;
pub mod query;
pub mod ranking;
pub mod stats;
pub mod synth;
pub mod textindex;
pub mod wire;

pub use corpus::{
    load_corpus, AnnotatedRecord, Category, CategoryVocabulary, Corpus, CorpusError, Label,
    Violation, Vocabularies,
};
pub use facets::{filter_records, heatmap_vector, FacetError, FacetSelection, HeatmapVector};
pub use query::{execute, Engine, Group, Query, QueryError, ResultItem, ResultPage, PAGE_SIZE};
pub use ranking::{categorical_score, order_results, shannon_entropy, OrderMode, RankingError};
pub use synth::generate_synthetic_corpus;
pub use textindex::{build_index, tokenize, Field, InvertedIndex, Match, Token};
