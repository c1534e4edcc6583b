//! Result ordering: text relevance, answer diversity, categorical strength
//! and filename. Every mode breaks ties by ascending filename, which is
//! unique, so orderings are strict and reproducible.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{AnnotatedRecord, Corpus, ANSWER_COUNT};
use crate::facets::FacetSelection;
use crate::textindex::Match;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankingError {
    #[error("expected {ANSWER_COUNT} answers, got {0}")]
    WrongArity(usize),
    #[error("categorical score needs at least one selection")]
    EmptySelections,
    #[error("invalid order: {0}")]
    InvalidSpec(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMode {
    Relevance,
    AnswerDiversity,
    Categorical,
    Filename,
}

impl OrderMode {
    pub const ALL: [OrderMode; 4] = [
        OrderMode::Relevance,
        OrderMode::AnswerDiversity,
        OrderMode::Categorical,
        OrderMode::Filename,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OrderMode::Relevance => "relevance",
            OrderMode::AnswerDiversity => "answer_diversity",
            OrderMode::Categorical => "categorical",
            OrderMode::Filename => "filename",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            OrderMode::Filename => Direction::Ascending,
            _ => Direction::Descending,
        }
    }
}

impl fmt::Display for OrderMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderMode {
    type Err = RankingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OrderMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| RankingError::InvalidSpec(format!("unknown order mode `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ascending,
    Descending,
}

/// Case-folds, trims, strips punctuation at both ends and collapses
/// internal whitespace.
pub fn normalize_answer(answer: &str) -> String {
    let lowered = answer.to_lowercase();
    let stripped = lowered.trim_matches(|c: char| !c.is_alphanumeric());
    stripped.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Shannon entropy, in bits, of the normalized answer distribution.
pub fn shannon_entropy<S: AsRef<str>>(answers: &[S]) -> Result<f64, RankingError> {
    if answers.len() != ANSWER_COUNT {
        return Err(RankingError::WrongArity(answers.len()));
    }
    let mut groups: HashMap<String, u64> = HashMap::new();
    for a in answers {
        *groups.entry(normalize_answer(a.as_ref())).or_default() += 1;
    }
    Ok(entropy_of_counts(groups.into_values(), ANSWER_COUNT as u64))
}

/// Entropy of a distribution given by integer group sizes summing to `total`.
///
/// Uses `H = (N log2 N - sum c log2 c) / N`, collecting integer coefficients
/// of `log2 p` for each prime `p` before converting to floating point. Group
/// size multisets with equal entropy therefore yield bit-identical values,
/// and only then is the filename tie-break reached.
pub fn entropy_of_counts(counts: impl IntoIterator<Item = u64>, total: u64) -> f64 {
    let mut coefficients: BTreeMap<u64, i64> = BTreeMap::new();
    let mut add = |n: u64, sign: i64| {
        for (prime, exponent) in factorize(n) {
            *coefficients.entry(prime).or_default() += sign * (n * exponent) as i64;
        }
    };
    add(total, 1);
    for c in counts {
        add(c, -1);
    }
    let sum: f64 = coefficients
        .into_iter()
        .filter(|&(_, k)| k != 0)
        .map(|(p, k)| k as f64 * (p as f64).log2())
        .sum();
    (sum / total as f64).max(0.0)
}

fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Sum of the record's counts over the selected labels.
pub fn categorical_score(
    record: &AnnotatedRecord,
    selections: &[FacetSelection],
) -> Result<u32, RankingError> {
    if selections.is_empty() {
        return Err(RankingError::EmptySelections);
    }
    Ok(selections
        .iter()
        .map(|s| u32::from(record.count(s.category, &s.label)))
        .sum())
}

/// Orders candidate records by `mode`, then filename ascending.
///
/// Relevance uses each candidate's match score. Whether relevance is
/// applicable (a text query exists) is for the caller to decide.
pub fn order_results(
    candidates: &[Match],
    corpus: &Corpus,
    mode: OrderMode,
    selections: &[FacetSelection],
) -> Result<Vec<u32>, RankingError> {
    Ok(order_matches(candidates, corpus, mode, selections)?
        .into_iter()
        .map(|m| m.ordinal)
        .collect())
}

/// Like [`order_results`] but keeps each candidate's score.
pub fn order_matches(
    candidates: &[Match],
    corpus: &Corpus,
    mode: OrderMode,
    selections: &[FacetSelection],
) -> Result<Vec<Match>, RankingError> {
    let rank = |m: &Match| corpus.filename_rank(m.ordinal);
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    match mode {
        OrderMode::Relevance => {
            let keys: Vec<_> = candidates
                .iter()
                .map(|m| (Reverse(m.score), rank(m)))
                .collect();
            order.sort_unstable_by_key(|&i| keys[i]);
        }
        OrderMode::Categorical => {
            if selections.is_empty() {
                return Err(RankingError::InvalidSpec(
                    "categorical order requires a facet selection".into(),
                ));
            }
            let keys: Vec<_> = candidates
                .iter()
                .map(|m| {
                    let score = categorical_score(corpus.record(m.ordinal), selections)
                        .expect("selections are non-empty");
                    (Reverse(score), rank(m))
                })
                .collect();
            order.sort_unstable_by_key(|&i| keys[i]);
        }
        OrderMode::AnswerDiversity => {
            let keys: Vec<_> = candidates
                .iter()
                .map(|m| (corpus.entropy(m.ordinal), rank(m)))
                .collect();
            order.sort_unstable_by(|&a, &b| {
                keys[b]
                    .0
                    .total_cmp(&keys[a].0)
                    .then(keys[a].1.cmp(&keys[b].1))
            });
        }
        OrderMode::Filename => {
            let keys: Vec<_> = candidates.iter().map(rank).collect();
            order.sort_unstable_by_key(|&i| keys[i]);
        }
    }
    Ok(order.into_iter().map(|i| candidates[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Category, Vocabularies};

    const TOL: f64 = 1e-9;

    fn answers_with_groups(sizes: &[usize]) -> Vec<String> {
        sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &n)| std::iter::repeat_n(format!("answer {g}"), n))
            .collect()
    }

    #[test]
    fn fixed_values() {
        assert_eq!(shannon_entropy(&["milk"; 10]).unwrap(), 0.0);
        let distinct: Vec<String> = (0..10).map(|i| format!("a{i}")).collect();
        assert!((shannon_entropy(&distinct).unwrap() - 10f64.log2()).abs() < TOL);
        // -(0.4 log2 0.4 + 0.3 log2 0.3 + 0.2 log2 0.2 + 0.1 log2 0.1)
        let h = shannon_entropy(&answers_with_groups(&[4, 3, 2, 1])).unwrap();
        assert!((h - 1.846439344671015).abs() < TOL, "{h}");
    }

    #[test]
    fn wrong_arity() {
        assert_eq!(shannon_entropy(&["a"; 9]), Err(RankingError::WrongArity(9)));
        assert_eq!(
            shannon_entropy::<&str>(&[]),
            Err(RankingError::WrongArity(0))
        );
    }

    #[test]
    fn normalization_groups_variants() {
        assert_eq!(normalize_answer("  Skim   MILK. "), "skim milk");
        assert_eq!(normalize_answer("\"yes!\""), "yes");
        assert_eq!(normalize_answer("2% milk"), "2% milk");
        assert_eq!(normalize_answer("..."), "");
        let answers = [
            "Yes", "yes.", " YES ", "yes", "yes!", "yes", "yes", "yes", "yes", "yes",
        ];
        assert_eq!(shannon_entropy(&answers).unwrap(), 0.0);
    }

    #[test]
    fn equal_entropy_partitions_are_bit_identical() {
        // Mathematically equal entropies that naive float evaluation
        // distinguishes in the last bits.
        let pairs: [(&[usize], &[usize]); 3] = [
            (&[6, 2, 1, 1], &[4, 3, 3]),
            (&[4, 2, 1, 1, 1, 1], &[2, 2, 2, 2, 2]),
            (&[4, 1, 1, 1, 1, 1, 1], &[2, 2, 2, 2, 1, 1]),
        ];
        for (a, b) in pairs {
            let ha = shannon_entropy(&answers_with_groups(a)).unwrap();
            let hb = shannon_entropy(&answers_with_groups(b)).unwrap();
            assert_eq!(ha.to_bits(), hb.to_bits(), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn categorical_scores() {
        let corpus = crate::synth::generate_synthetic_corpus(3, 5);
        let r = corpus.record(0);
        assert_eq!(
            categorical_score(r, &[]),
            Err(RankingError::EmptySelections)
        );
        let dff = FacetSelection::new(Category::AnswerDifference, "DFF");
        let rot = FacetSelection::new(Category::QualityIssues, "ROT");
        let want = u32::from(r.count(Category::AnswerDifference, "DFF"))
            + u32::from(r.count(Category::QualityIssues, "ROT"));
        assert_eq!(categorical_score(r, &[dff, rot]).unwrap(), want);
    }

    fn tiny_corpus(names: &[&str]) -> Corpus {
        let records = names
            .iter()
            .map(|n| AnnotatedRecord {
                filename: n.to_string(),
                question: String::new(),
                answers: Default::default(),
                captions: Default::default(),
                category_counts: Default::default(),
                text_present: 0,
            })
            .collect();
        Corpus::new(records, Vocabularies::default_set()).unwrap()
    }

    #[test]
    fn ties_break_by_filename() {
        let corpus = tiny_corpus(&["c.jpg", "a.jpg", "b.jpg"]);
        let cands: Vec<Match> = (0..3)
            .map(|o| Match {
                ordinal: o,
                score: 1,
            })
            .collect();
        for mode in [
            OrderMode::Relevance,
            OrderMode::AnswerDiversity,
            OrderMode::Filename,
        ] {
            assert_eq!(
                order_results(&cands, &corpus, mode, &[]).unwrap(),
                [1, 2, 0]
            );
        }
    }

    #[test]
    fn relevance_by_score() {
        let corpus = tiny_corpus(&["c.jpg", "a.jpg", "b.jpg"]);
        let cands = [
            Match {
                ordinal: 0,
                score: 3,
            },
            Match {
                ordinal: 1,
                score: 1,
            },
            Match {
                ordinal: 2,
                score: 2,
            },
        ];
        assert_eq!(
            order_results(&cands, &corpus, OrderMode::Relevance, &[]).unwrap(),
            [0, 2, 1]
        );
    }

    #[test]
    fn categorical_needs_selection() {
        let corpus = tiny_corpus(&["a.jpg"]);
        let cands = [Match {
            ordinal: 0,
            score: 0,
        }];
        assert!(matches!(
            order_results(&cands, &corpus, OrderMode::Categorical, &[]),
            Err(RankingError::InvalidSpec(_))
        ));
    }

    #[test]
    fn mode_names() {
        for m in OrderMode::ALL {
            assert_eq!(m.as_str().parse::<OrderMode>().unwrap(), m);
        }
        assert!("newest".parse::<OrderMode>().is_err());
        assert_eq!(OrderMode::Filename.direction(), Direction::Ascending);
        assert_eq!(OrderMode::Relevance.direction(), Direction::Descending);
    }
}
