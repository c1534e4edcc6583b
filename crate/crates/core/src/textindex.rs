//! Tokenizer, per-field inverted index and full-text search.
//!
//! Matching is exact on normalized tokens: no stemming, no stopwords, no
//! minimum token length. A query wrapped in double quotes is a phrase query;
//! anything else is a bag of terms combined with OR.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{AnnotatedRecord, Corpus};

/// A searchable text field of a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Question,
    Answers,
    Captions,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::Question, Field::Answers, Field::Captions];

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Question => "question",
            Field::Answers => "answers",
            Field::Captions => "captions",
        }
    }

    /// The field's text as indexed: answers and captions are newline-joined.
    pub fn text_of(self, record: &AnnotatedRecord) -> String {
        match self {
            Field::Question => record.question.clone(),
            Field::Answers => record.answers.join("\n"),
            Field::Captions => record.captions.join("\n"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown field `{0}`")]
pub struct UnknownField(pub String);

impl FromStr for Field {
    type Err = UnknownField;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Field::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| UnknownField(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub position: u32,
}

/// Splits on every non-alphanumeric character and lowercases each piece.
pub fn tokenize(text: &str) -> Vec<Token> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|piece| !piece.is_empty())
        .enumerate()
        .map(|(position, piece)| Token {
            text: piece.to_lowercase(),
            position: position as u32,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Posting {
    pub doc_ordinal: u32,
    /// Token positions of the term within the field, ascending.
    pub positions: Vec<u32>,
}

impl Posting {
    pub fn term_frequency(&self) -> u32 {
        self.positions.len() as u32
    }
}

/// A record matching a text query and its occurrence count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Match {
    pub ordinal: u32,
    pub score: u32,
}

/// A parsed text query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TextQuery {
    /// Distinct terms; a record matches if any occurs.
    Terms(Vec<String>),
    /// Token sequence that must appear contiguously.
    Phrase(Vec<String>),
}

impl TextQuery {
    pub fn parse(query: &str) -> TextQuery {
        let trimmed = query.trim();
        let tokens = |s: &str| tokenize(s).into_iter().map(|t| t.text).collect::<Vec<_>>();
        if trimmed.len() >= 2 && trimmed.starts_with('"') && trimmed.ends_with('"') {
            TextQuery::Phrase(tokens(&trimmed[1..trimmed.len() - 1]))
        } else {
            let mut terms = tokens(trimmed);
            terms.sort();
            terms.dedup();
            TextQuery::Terms(terms)
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            TextQuery::Terms(t) | TextQuery::Phrase(t) => t.is_empty(),
        }
    }
}

type PostingMap = HashMap<String, Vec<Posting>>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvertedIndex {
    fields: [PostingMap; 3],
    filenames: HashMap<String, u32>,
}

/// Indexes question, answers and captions of every record.
pub fn build_index(corpus: &Corpus) -> InvertedIndex {
    let mut index = InvertedIndex::default();
    for (ordinal, record) in corpus.records().iter().enumerate() {
        let ordinal = ordinal as u32;
        for field in Field::ALL {
            let mut positions: HashMap<String, Vec<u32>> = HashMap::new();
            for token in tokenize(&field.text_of(record)) {
                positions
                    .entry(token.text)
                    .or_default()
                    .push(token.position);
            }
            let postings = &mut index.fields[field as usize];
            for (term, positions) in positions {
                postings.entry(term).or_default().push(Posting {
                    doc_ordinal: ordinal,
                    positions,
                });
            }
        }
        index.filenames.insert(record.filename.clone(), ordinal);
    }
    index
}

impl InvertedIndex {
    pub fn postings(&self, field: Field, term: &str) -> &[Posting] {
        self.fields[field as usize]
            .get(term)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn term_count(&self, field: Field) -> usize {
        self.fields[field as usize].len()
    }

    /// Exact, case-sensitive filename lookup.
    pub fn lookup_filename(&self, name: &str) -> Option<u32> {
        self.filenames.get(name).copied()
    }

    /// Records matching `query` in `field`, ascending by ordinal.
    pub fn search_field(&self, field: Field, query: &str) -> Vec<Match> {
        self.search_parsed(field, &TextQuery::parse(query))
    }

    pub fn search_parsed(&self, field: Field, query: &TextQuery) -> Vec<Match> {
        match query {
            TextQuery::Terms(terms) => self.search_terms(field, terms),
            TextQuery::Phrase(terms) => self.search_phrase(field, terms),
        }
    }

    fn search_terms(&self, field: Field, terms: &[String]) -> Vec<Match> {
        let mut hits: Vec<(u32, u32)> = terms
            .iter()
            .flat_map(|t| self.postings(field, t))
            .map(|p| (p.doc_ordinal, p.term_frequency()))
            .collect();
        hits.sort_unstable_by_key(|&(doc, _)| doc);
        let mut out: Vec<Match> = Vec::new();
        for (ordinal, tf) in hits {
            match out.last_mut() {
                Some(last) if last.ordinal == ordinal => last.score += tf,
                _ => out.push(Match { ordinal, score: tf }),
            }
        }
        out
    }

    fn search_phrase(&self, field: Field, terms: &[String]) -> Vec<Match> {
        let Some((first, rest)) = terms.split_first() else {
            return Vec::new();
        };
        let rest_lists: Vec<&[Posting]> = rest.iter().map(|t| self.postings(field, t)).collect();
        if rest_lists.iter().any(|l| l.is_empty()) {
            return Vec::new();
        }
        let mut out = Vec::new();
        'docs: for head in self.postings(field, first) {
            let mut others = Vec::with_capacity(rest_lists.len());
            for list in &rest_lists {
                match list.binary_search_by_key(&head.doc_ordinal, |p| p.doc_ordinal) {
                    Ok(i) => others.push(&list[i].positions),
                    Err(_) => continue 'docs,
                }
            }
            let score = head
                .positions
                .iter()
                .filter(|&&start| {
                    others
                        .iter()
                        .enumerate()
                        .all(|(i, pos)| pos.binary_search(&(start + i as u32 + 1)).is_ok())
                })
                .count() as u32;
            if score > 0 {
                out.push(Match {
                    ordinal: head.doc_ordinal,
                    score,
                });
            }
        }
        out
    }
}
