//! Naive reference implementations. Nothing here touches the index, the
//! facet filter or the ranking code; each answer comes from a full scan.

#![allow(dead_code)]

use std::collections::HashMap;

use vqbrowse_core::{tokenize, AnnotatedRecord, Corpus, FacetSelection, Field, OrderMode, Query};

pub fn field_text(record: &AnnotatedRecord, field: Field) -> String {
    match field {
        Field::Question => record.question.clone(),
        Field::Answers => record.answers.join("\n"),
        Field::Captions => record.captions.join("\n"),
    }
}

pub fn words(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.text).collect()
}

/// Occurrence score of `query` in `text`; `None` when it does not match.
pub fn naive_score(text_tokens: &[String], query: &str) -> Option<u32> {
    let q = query.trim();
    let score = if q.len() >= 2 && q.starts_with('"') && q.ends_with('"') {
        let phrase = words(&q[1..q.len() - 1]);
        if phrase.is_empty() || phrase.len() > text_tokens.len() {
            0
        } else {
            text_tokens
                .windows(phrase.len())
                .filter(|w| *w == phrase.as_slice())
                .count() as u32
        }
    } else {
        let mut terms = words(q);
        terms.sort();
        terms.dedup();
        terms
            .iter()
            .map(|t| text_tokens.iter().filter(|x| *x == t).count() as u32)
            .sum()
    };
    (score > 0).then_some(score)
}

/// Tokenized fields of every record, computed once per corpus.
pub struct Scanned {
    pub tokens: Vec<[Vec<String>; 3]>,
}

impl Scanned {
    pub fn new(corpus: &Corpus) -> Self {
        Scanned {
            tokens: corpus
                .records()
                .iter()
                .map(|r| Field::ALL.map(|f| words(&field_text(r, f))))
                .collect(),
        }
    }

    pub fn search(&self, field: Field, query: &str) -> Vec<(u32, u32)> {
        self.tokens
            .iter()
            .enumerate()
            .filter_map(|(i, t)| naive_score(&t[field as usize], query).map(|s| (i as u32, s)))
            .collect()
    }
}

pub fn naive_normalize(answer: &str) -> String {
    let lower = answer.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();
    let start = chars.iter().position(|c| c.is_alphanumeric());
    let end = chars.iter().rposition(|c| c.is_alphanumeric());
    match (start, end) {
        (Some(s), Some(e)) => chars[s..=e]
            .iter()
            .collect::<String>()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" "),
        _ => String::new(),
    }
}

/// Plain `-sum p log2 p` over normalized answer groups.
pub fn naive_entropy<S: AsRef<str>>(answers: &[S]) -> f64 {
    let mut groups: HashMap<String, usize> = HashMap::new();
    for a in answers {
        *groups.entry(naive_normalize(a.as_ref())).or_default() += 1;
    }
    let n = answers.len() as f64;
    -groups
        .values()
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Entropy rounded to a 1e-9 grid so that equal values compare equal.
pub fn entropy_key(answers: &[String]) -> i64 {
    (naive_entropy(answers) * 1e9).round() as i64
}

pub fn selection_passes(record: &AnnotatedRecord, s: &FacetSelection) -> bool {
    let count = record
        .category_counts
        .get(&s.category)
        .and_then(|m| m.get(&s.label))
        .copied()
        .unwrap_or(0);
    count >= s.min_count
}

pub fn selection_count(record: &AnnotatedRecord, s: &FacetSelection) -> u32 {
    record
        .category_counts
        .get(&s.category)
        .and_then(|m| m.get(&s.label))
        .map_or(0, |&c| u32::from(c))
}

pub fn naive_filter(
    corpus: &Corpus,
    selections: &[FacetSelection],
    text_present: Option<bool>,
) -> Vec<u32> {
    corpus
        .records()
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            selections.iter().all(|s| selection_passes(r, s))
                && text_present.is_none_or(|t| (r.text_present >= 3) == t)
        })
        .map(|(i, _)| i as u32)
        .collect()
}

/// Full ordered result list by scanning, filtering, scoring and sorting.
pub fn naive_execute(corpus: &Corpus, scanned: &Scanned, query: &Query) -> Vec<(u32, u32)> {
    let records = corpus.records();
    let mut hits: Vec<(u32, u32)> = Vec::new();
    for (i, r) in records.iter().enumerate() {
        if let Some(name) = &query.filename {
            if &r.filename == name {
                hits.push((i as u32, 0));
            }
            continue;
        }
        let mut score = 0;
        let mut ok = true;
        for (field, q) in &query.text_queries {
            match naive_score(&scanned.tokens[i][*field as usize], q) {
                Some(s) => score += s,
                None => ok = false,
            }
        }
        ok &= query.selections.iter().all(|s| selection_passes(r, s));
        ok &= query
            .text_present
            .is_none_or(|t| (r.text_present >= 3) == t);
        if ok {
            hits.push((i as u32, score));
        }
    }
    let mode = query.order.unwrap_or(if !query.text_queries.is_empty() {
        OrderMode::Relevance
    } else if !query.selections.is_empty() {
        OrderMode::Categorical
    } else {
        OrderMode::Filename
    });
    let name = |o: u32| records[o as usize].filename.clone();
    match mode {
        OrderMode::Relevance => hits.sort_by_key(|&(o, s)| (std::cmp::Reverse(s), name(o))),
        OrderMode::AnswerDiversity => hits.sort_by_key(|&(o, _)| {
            (
                std::cmp::Reverse(entropy_key(&records[o as usize].answers)),
                name(o),
            )
        }),
        OrderMode::Categorical => hits.sort_by_key(|&(o, _)| {
            let total: u32 = query
                .selections
                .iter()
                .map(|s| selection_count(&records[o as usize], s))
                .sum();
            (std::cmp::Reverse(total), name(o))
        }),
        OrderMode::Filename => hits.sort_by_key(|&(o, _)| name(o)),
    }
    hits
}
