//! Deterministic synthetic corpora.
//!
//! Output depends only on `(seed, n)`. Records are drawn from fixed word
//! pools that include the marker words `milk` and `glass`, every vocabulary
//! label gets a uniform count in `[0, 5]`, and records are shuffled so that
//! file order differs from filename order.

use std::collections::BTreeMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{
    AnnotatedRecord, Corpus, Vocabularies, ANSWER_COUNT, CAPTION_COUNT, MAX_WORKER_COUNT,
};

const QUESTION_WORDS: &[&str] = &[
    "what",
    "is",
    "this",
    "the",
    "of",
    "color",
    "milk",
    "glass",
    "bottle",
    "can",
    "box",
    "in",
    "my",
    "hand",
    "does",
    "say",
    "label",
    "expired",
    "has",
    "which",
    "flavor",
    "how",
    "many",
    "there",
    "are",
    "a",
    "jar",
    "shirt",
    "screen",
    "tell",
    "me",
    "please",
    "brand",
    "date",
    "expiration",
    "read",
    "kind",
    "food",
    "soup",
    "cereal",
    "coffee",
    "tea",
    "juice",
    "water",
    "cup",
    "door",
    "computer",
    "phone",
    "money",
    "bill",
    "dollar",
    "light",
    "on",
    "off",
    "room",
    "it",
    "do",
    "you",
    "see",
    "here",
];

const ANSWER_POOL: &[&str] = &[
    "yes",
    "no",
    "unanswerable",
    "unsuitable",
    "milk",
    "skim milk",
    "2% milk",
    "glass",
    "a glass",
    "water",
    "coffee",
    "tea",
    "blue",
    "red",
    "white",
    "black",
    "green",
    "soup",
    "chicken soup",
    "cereal",
    "5",
    "10",
    "20 dollars",
    "one dollar",
    "orange juice",
    "juice",
    "coca cola",
    "pepsi",
    "jar",
    "bottle of water",
    "it is expired",
    "not expired",
    "computer",
    "phone",
    "light is on",
    "light is off",
    "shirt",
    "keyboard",
];

const CAPTION_WORDS: &[&str] = &[
    "a", "an", "the", "of", "on", "in", "with", "and", "next", "to", "carton", "milk", "glass",
    "bottle", "table", "counter", "kitchen", "hand", "holding", "person", "blurry", "image",
    "photo", "dark", "bright", "label", "white", "red", "blue", "green", "box", "can", "food",
    "screen", "computer", "laptop", "keyboard", "shirt", "floor", "wall", "jar", "cup", "coffee",
    "water", "sitting", "top", "close", "up", "view", "small", "large",
];

/// Generates a corpus of `n` records using the bundled vocabulary.
pub fn generate_synthetic_corpus(seed: u64, n: usize) -> Corpus {
    generate_with_vocab(seed, n, Vocabularies::default_set())
}

pub fn generate_with_vocab(seed: u64, n: usize, vocabularies: Vocabularies) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records: Vec<AnnotatedRecord> = (0..n)
        .map(|i| synth_record(&mut rng, i, &vocabularies))
        .collect();
    records.shuffle(&mut rng);
    Corpus::new(records, vocabularies).expect("synthetic records are valid")
}

fn words(rng: &mut ChaCha8Rng, pool: &[&str], min: usize, max: usize) -> Vec<String> {
    let len = rng.random_range(min..=max);
    (0..len)
        .map(|_| pool.choose(rng).expect("pool is non-empty").to_string())
        .collect()
}

fn synth_question(rng: &mut ChaCha8Rng) -> String {
    // A few questions are blank, as with untranscribed audio.
    if rng.random_ratio(1, 100) {
        return String::new();
    }
    let mut words = words(rng, QUESTION_WORDS, 3, 9);
    if rng.random_bool(0.5) {
        capitalize(&mut words[0]);
    }
    format!("{}?", words.join(" "))
}

fn synth_answers(rng: &mut ChaCha8Rng) -> [String; ANSWER_COUNT] {
    let distinct = rng.random_range(1..=ANSWER_COUNT);
    let candidates: Vec<&str> = ANSWER_POOL
        .choose_multiple(rng, distinct)
        .copied()
        .collect();
    std::array::from_fn(|_| {
        // Skewed towards the first candidates so some answers agree.
        let pick = rng
            .random_range(0..candidates.len())
            .min(rng.random_range(0..candidates.len()));
        let mut answer = candidates[pick].to_string();
        match rng.random_range(0..10) {
            0 => capitalize(&mut answer),
            1 => answer.push('.'),
            2 => answer = format!("  {answer} "),
            _ => {}
        }
        answer
    })
}

fn synth_caption(rng: &mut ChaCha8Rng) -> String {
    let mut words = words(rng, CAPTION_WORDS, 6, 12);
    capitalize(&mut words[0]);
    format!("{}.", words.join(" "))
}

fn synth_record(rng: &mut ChaCha8Rng, i: usize, vocabularies: &Vocabularies) -> AnnotatedRecord {
    let question = synth_question(rng);
    let answers = synth_answers(rng);
    let captions: [String; CAPTION_COUNT] = std::array::from_fn(|_| synth_caption(rng));
    let category_counts = vocabularies
        .iter()
        .map(|vocab| {
            let counts: BTreeMap<String, u8> = vocab
                .labels
                .iter()
                .map(|l| (l.code.clone(), rng.random_range(0..=MAX_WORKER_COUNT)))
                .collect();
            (vocab.category, counts)
        })
        .collect();
    AnnotatedRecord {
        filename: format!("VizWiz_synth_{i:08}.jpg"),
        question,
        answers,
        captions,
        category_counts,
        text_present: rng.random_range(0..=MAX_WORKER_COUNT),
    }
}

fn capitalize(word: &mut String) {
    if let Some(first) = word.chars().next() {
        let upper: String = first.to_uppercase().collect();
        word.replace_range(..first.len_utf8(), &upper);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus() {
        let corpus = generate_synthetic_corpus(7, 0);
        assert!(corpus.is_empty());
    }

    #[test]
    fn deterministic_bytes() {
        let a = generate_synthetic_corpus(7, 100);
        let b = generate_synthetic_corpus(7, 100);
        assert_eq!(a, b);
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        assert_ne!(a.to_jsonl(), generate_synthetic_corpus(8, 100).to_jsonl());
    }

    #[test]
    fn milk_appears_in_questions() {
        let corpus = generate_synthetic_corpus(7, 1000);
        let with_milk = corpus
            .records()
            .iter()
            .filter(|r| {
                crate::textindex::tokenize(&r.question)
                    .iter()
                    .any(|t| t.text == "milk")
            })
            .count();
        // Pool frequency 1/60 over ~6 words per question gives roughly 10%.
        assert!(with_milk >= 1);
        assert!((50..=200).contains(&with_milk), "{with_milk}");
    }

    #[test]
    fn file_order_differs_from_filename_order() {
        let corpus = generate_synthetic_corpus(7, 50);
        assert!((0..50).any(|i| corpus.filename_rank(i) != i));
    }
}
