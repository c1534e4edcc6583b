//! Corpus summary statistics.

use serde::Serialize;

use crate::corpus::{Category, Corpus, MAX_WORKER_COUNT};

/// Histogram bins for worker counts 0 through 5.
pub type CountHistogram = [u64; MAX_WORKER_COUNT as usize + 1];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelStats {
    pub code: String,
    /// Sum of worker counts over all records.
    pub votes: u64,
    /// Records with at least one vote.
    pub records: u64,
    pub histogram: CountHistogram,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryStats {
    pub category: Category,
    pub labels: Vec<LabelStats>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropySummary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusStats {
    pub records: usize,
    pub categories: Vec<CategoryStats>,
    pub text_present: CountHistogram,
    /// `None` for an empty corpus.
    pub entropy: Option<EntropySummary>,
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let categories = corpus
        .vocabularies()
        .iter()
        .map(|vocab| CategoryStats {
            category: vocab.category,
            labels: vocab
                .labels
                .iter()
                .map(|label| {
                    let mut stats = LabelStats {
                        code: label.code.clone(),
                        votes: 0,
                        records: 0,
                        histogram: CountHistogram::default(),
                    };
                    for r in corpus.records() {
                        let c = r.count(vocab.category, &label.code);
                        stats.votes += u64::from(c);
                        stats.records += u64::from(c > 0);
                        stats.histogram[c as usize] += 1;
                    }
                    stats
                })
                .collect(),
        })
        .collect();

    let mut text_present = CountHistogram::default();
    for r in corpus.records() {
        text_present[r.text_present as usize] += 1;
    }

    let mut entropies: Vec<f64> = (0..corpus.len() as u32)
        .map(|i| corpus.entropy(i))
        .collect();
    entropies.sort_by(f64::total_cmp);
    let entropy = (!entropies.is_empty()).then(|| {
        let n = entropies.len();
        let median = if n % 2 == 1 {
            entropies[n / 2]
        } else {
            (entropies[n / 2 - 1] + entropies[n / 2]) / 2.0
        };
        EntropySummary {
            min: entropies[0],
            median,
            max: entropies[n - 1],
        }
    });

    CorpusStats {
        records: corpus.len(),
        categories,
        text_present,
        entropy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::generate_synthetic_corpus;

    #[test]
    fn empty_corpus() {
        let s = corpus_stats(&generate_synthetic_corpus(1, 0));
        assert_eq!(s.records, 0);
        assert!(s.entropy.is_none());
        assert!(s
            .categories
            .iter()
            .flat_map(|c| &c.labels)
            .all(|l| l.votes == 0 && l.histogram == [0; 6]));
    }

    #[test]
    fn single_record_matches_its_counts() {
        let corpus = generate_synthetic_corpus(1, 1);
        let record = corpus.record(0);
        let s = corpus_stats(&corpus);
        for cat in &s.categories {
            for l in &cat.labels {
                let c = record.count(cat.category, &l.code);
                assert_eq!(l.votes, u64::from(c));
                assert_eq!(l.histogram[c as usize], 1);
            }
        }
        let e = s.entropy.unwrap();
        assert_eq!(e.min, e.max);
        assert_eq!(e.min, corpus.entropy(0));
    }

    #[test]
    fn entropy_bounds() {
        let s = corpus_stats(&generate_synthetic_corpus(7, 500));
        let e = s.entropy.unwrap();
        assert!(0.0 <= e.min && e.min <= e.median && e.median <= e.max);
        assert!(e.max <= 3.321929);
        assert_eq!(s.text_present.iter().sum::<u64>(), 500);
    }
}
