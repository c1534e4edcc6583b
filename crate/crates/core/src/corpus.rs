//! Record schema, vocabularies and corpus loading.
//!
//! A corpus directory holds two files:
//!
//! * `records.jsonl`: one JSON object per line with keys `filename`,
//!   `question`, `answers` (10 strings), `captions` (5 strings),
//!   `categories` (category id → label code → worker count) and
//!   `text_present` (worker count).
//! * `vocab.json`: the ordered label vocabulary of each category.
//!
//! Every worker count lies in `[0, 5]`. Loading is all-or-nothing: any
//! violation anywhere in the file fails the load and every violation found
//! is reported.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ranking;

pub const ANSWER_COUNT: usize = 10;
pub const CAPTION_COUNT: usize = 5;
/// Number of crowdworkers voting on each categorical label.
pub const MAX_WORKER_COUNT: u8 = 5;
/// Text counts as present when a majority of workers marked it.
pub const TEXT_PRESENT_MAJORITY: u8 = 3;

pub const RECORDS_FILE: &str = "records.jsonl";
pub const VOCAB_FILE: &str = "vocab.json";
pub const IMAGES_DIR: &str = "images";

/// The vocabulary shipped with the tool.
pub const DEFAULT_VOCAB_JSON: &str = include_str!("../data/vocab.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    AnswerDifference,
    Skills,
    QualityIssues,
}

impl Category {
    pub const ALL: [Category; 3] = [
        Category::AnswerDifference,
        Category::Skills,
        Category::QualityIssues,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::AnswerDifference => "answer_difference",
            Category::Skills => "skills",
            Category::QualityIssues => "quality_issues",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown category `{0}`")]
pub struct UnknownCategory(pub String);

impl FromStr for Category {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownCategory(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Label {
    pub code: String,
    pub name: String,
}

/// Ordered labels of one category. Label order is the heatmap column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryVocabulary {
    pub category: Category,
    pub labels: Vec<Label>,
}

impl CategoryVocabulary {
    pub fn contains(&self, code: &str) -> bool {
        self.labels.iter().any(|l| l.code == code)
    }

    pub fn label(&self, code: &str) -> Option<&Label> {
        self.labels.iter().find(|l| l.code == code)
    }
}

/// On-disk shape of `vocab.json`; field order fixes category order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabFile {
    answer_difference: Vec<Label>,
    skills: Vec<Label>,
    quality_issues: Vec<Label>,
}

/// The three category vocabularies, always in [`Category::ALL`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabularies {
    categories: [CategoryVocabulary; 3],
}

impl Vocabularies {
    pub fn new(
        answer_difference: Vec<Label>,
        skills: Vec<Label>,
        quality_issues: Vec<Label>,
    ) -> Result<Self, CorpusError> {
        let categories = [
            CategoryVocabulary {
                category: Category::AnswerDifference,
                labels: answer_difference,
            },
            CategoryVocabulary {
                category: Category::Skills,
                labels: skills,
            },
            CategoryVocabulary {
                category: Category::QualityIssues,
                labels: quality_issues,
            },
        ];
        for vocab in &categories {
            let mut seen = HashMap::new();
            for label in &vocab.labels {
                if label.code.is_empty() {
                    return Err(CorpusError::Vocab(format!(
                        "{}: empty label code",
                        vocab.category
                    )));
                }
                if seen.insert(label.code.as_str(), ()).is_some() {
                    return Err(CorpusError::Vocab(format!(
                        "{}: duplicate label code `{}`",
                        vocab.category, label.code
                    )));
                }
            }
        }
        Ok(Vocabularies { categories })
    }

    pub fn from_json(text: &str) -> Result<Self, CorpusError> {
        let file: VocabFile =
            serde_json::from_str(text).map_err(|e| CorpusError::Vocab(e.to_string()))?;
        Vocabularies::new(file.answer_difference, file.skills, file.quality_issues)
    }

    pub fn default_set() -> Self {
        Vocabularies::from_json(DEFAULT_VOCAB_JSON).expect("bundled vocab.json is valid")
    }

    pub fn get(&self, category: Category) -> &CategoryVocabulary {
        &self.categories[category.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = &CategoryVocabulary> {
        self.categories.iter()
    }

    pub fn to_json_pretty(&self) -> String {
        let file = VocabFile {
            answer_difference: self.get(Category::AnswerDifference).labels.clone(),
            skills: self.get(Category::Skills).labels.clone(),
            quality_issues: self.get(Category::QualityIssues).labels.clone(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("vocab serializes");
        out.push('\n');
        out
    }
}

impl Serialize for Vocabularies {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(3))?;
        for vocab in &self.categories {
            map.serialize_entry(vocab.category.as_str(), &vocab.labels)?;
        }
        map.end()
    }
}

/// One image with its question, answers, captions and label counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnotatedRecord {
    pub filename: String,
    pub question: String,
    pub answers: [String; ANSWER_COUNT],
    pub captions: [String; CAPTION_COUNT],
    #[serde(rename = "categories")]
    pub category_counts: BTreeMap<Category, BTreeMap<String, u8>>,
    pub text_present: u8,
}

impl AnnotatedRecord {
    /// Worker count for a label; labels absent from the record count as 0.
    pub fn count(&self, category: Category, code: &str) -> u8 {
        self.category_counts
            .get(&category)
            .and_then(|labels| labels.get(code))
            .copied()
            .unwrap_or(0)
    }

    pub fn has_text(&self) -> bool {
        self.text_present >= TEXT_PRESENT_MAJORITY
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// A line of `records.jsonl` before validation.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    filename: String,
    question: String,
    answers: Vec<String>,
    captions: Vec<String>,
    categories: BTreeMap<String, BTreeMap<String, i64>>,
    text_present: i64,
}

/// One problem found while validating records. `line` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MalformedLine {
        line: usize,
        reason: String,
    },
    Schema {
        line: usize,
        filename: String,
        field: String,
        reason: String,
    },
    DuplicateFilename {
        line: usize,
        name: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MalformedLine { line, reason } => {
                write!(f, "line {line}: malformed record: {reason}")
            }
            Violation::Schema {
                line,
                filename,
                field,
                reason,
            } => write!(f, "line {line}: record `{filename}`: {field}: {reason}"),
            Violation::DuplicateFilename { line, name } => {
                write!(f, "line {line}: duplicate filename `{name}`")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid vocabulary: {0}")]
    Vocab(String),
    #[error("{} invalid record(s), first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
}

impl CorpusError {
    /// True for failures of the environment rather than of the data.
    pub fn is_io(&self) -> bool {
        matches!(self, CorpusError::MissingFile(_) | CorpusError::Io { .. })
    }
}

/// Immutable, validated collection of records.
///
/// Record order is file order. Per-record answer entropies and the rank of
/// each filename in ascending order are computed once at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    records: Vec<AnnotatedRecord>,
    vocabularies: Vocabularies,
    image_dir: Option<PathBuf>,
    entropies: Vec<f64>,
    filename_rank: Vec<u32>,
}

impl Corpus {
    pub fn new(
        records: Vec<AnnotatedRecord>,
        vocabularies: Vocabularies,
    ) -> Result<Self, CorpusError> {
        let mut violations = Vec::new();
        let mut seen: HashMap<&str, usize> = HashMap::with_capacity(records.len());
        for (i, record) in records.iter().enumerate() {
            let line = i + 1;
            check_record(line, record, &vocabularies, &mut violations);
            if !record.filename.is_empty() && seen.insert(&record.filename, line).is_some() {
                violations.push(Violation::DuplicateFilename {
                    line,
                    name: record.filename.clone(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(CorpusError::Invalid(violations));
        }
        Ok(Corpus::assemble(records, vocabularies))
    }

    fn assemble(records: Vec<AnnotatedRecord>, vocabularies: Vocabularies) -> Self {
        let entropies = records
            .iter()
            .map(|r| ranking::shannon_entropy(&r.answers).expect("record has ten answers"))
            .collect();
        let mut by_name: Vec<u32> = (0..records.len() as u32).collect();
        by_name.sort_by(|&a, &b| {
            records[a as usize]
                .filename
                .cmp(&records[b as usize].filename)
        });
        let mut filename_rank = vec![0u32; records.len()];
        for (rank, ordinal) in by_name.into_iter().enumerate() {
            filename_rank[ordinal as usize] = rank as u32;
        }
        Corpus {
            records,
            vocabularies,
            image_dir: None,
            entropies,
            filename_rank,
        }
    }

    pub fn with_image_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.image_dir = Some(dir.into());
        self
    }

    pub fn records(&self) -> &[AnnotatedRecord] {
        &self.records
    }

    pub fn record(&self, ordinal: u32) -> &AnnotatedRecord {
        &self.records[ordinal as usize]
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn vocabularies(&self) -> &Vocabularies {
        &self.vocabularies
    }

    pub fn image_dir(&self) -> Option<&Path> {
        self.image_dir.as_deref()
    }

    /// Answer entropy in bits, precomputed at load.
    pub fn entropy(&self, ordinal: u32) -> f64 {
        self.entropies[ordinal as usize]
    }

    /// Position of the record's filename in ascending filename order.
    pub fn filename_rank(&self, ordinal: u32) -> u32 {
        self.filename_rank[ordinal as usize]
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&record.to_json_line());
            out.push('\n');
        }
        out
    }

    /// Writes `records.jsonl` and `vocab.json` into `dir`, creating it.
    pub fn write_dir(&self, dir: &Path) -> Result<(), CorpusError> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CorpusError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let records = dir.join(RECORDS_FILE);
        fs::write(&records, self.to_jsonl()).map_err(io_err(&records))?;
        let vocab = dir.join(VOCAB_FILE);
        fs::write(&vocab, self.vocabularies.to_json_pretty()).map_err(io_err(&vocab))?;
        Ok(())
    }
}

fn check_record(
    line: usize,
    record: &AnnotatedRecord,
    vocabularies: &Vocabularies,
    out: &mut Vec<Violation>,
) {
    let mut violation = |field: String, reason: String| {
        out.push(Violation::Schema {
            line,
            filename: record.filename.clone(),
            field,
            reason,
        })
    };
    if record.filename.is_empty() {
        violation("filename".into(), "must be non-empty".into());
    }
    for (category, labels) in &record.category_counts {
        let vocab = vocabularies.get(*category);
        for (code, &count) in labels {
            if !vocab.contains(code) {
                violation(
                    format!("categories.{category}.{code}"),
                    "label not in vocabulary".into(),
                );
            } else if count > MAX_WORKER_COUNT {
                violation(
                    format!("categories.{category}.{code}"),
                    format!("count out of range [0,5] (got {count})"),
                );
            }
        }
    }
    if record.text_present > MAX_WORKER_COUNT {
        violation(
            "text_present".into(),
            format!("count out of range [0,5] (got {})", record.text_present),
        );
    }
}

/// Converts a parsed line into a record, reporting arity and range problems.
/// Vocabulary and filename checks happen later in [`check_record`].
fn convert_raw(line: usize, raw: RawRecord, out: &mut Vec<Violation>) -> Option<AnnotatedRecord> {
    let before = out.len();
    let filename = raw.filename;
    let mut violation = |field: String, reason: String| {
        out.push(Violation::Schema {
            line,
            filename: filename.clone(),
            field,
            reason,
        })
    };

    let answers: Option<[String; ANSWER_COUNT]> = raw.answers.try_into().map_or_else(
        |v: Vec<String>| {
            violation(
                "answers".into(),
                format!("expected {ANSWER_COUNT}, got {}", v.len()),
            );
            None
        },
        Some,
    );
    let captions: Option<[String; CAPTION_COUNT]> = raw.captions.try_into().map_or_else(
        |v: Vec<String>| {
            violation(
                "captions".into(),
                format!("expected {CAPTION_COUNT}, got {}", v.len()),
            );
            None
        },
        Some,
    );

    let in_range = |count: i64| (0..=i64::from(MAX_WORKER_COUNT)).contains(&count);
    let mut category_counts = BTreeMap::new();
    for (category_id, labels) in raw.categories {
        let Ok(category) = category_id.parse::<Category>() else {
            violation(
                format!("categories.{category_id}"),
                "unknown category".into(),
            );
            continue;
        };
        let mut counts = BTreeMap::new();
        for (code, count) in labels {
            if in_range(count) {
                counts.insert(code, count as u8);
            } else {
                violation(
                    format!("categories.{category_id}.{code}"),
                    format!("count out of range [0,5] (got {count})"),
                );
            }
        }
        category_counts.insert(category, counts);
    }
    if !in_range(raw.text_present) {
        violation(
            "text_present".into(),
            format!("count out of range [0,5] (got {})", raw.text_present),
        );
    }

    if out.len() > before {
        return None;
    }
    Some(AnnotatedRecord {
        filename,
        question: raw.question,
        answers: answers?,
        captions: captions?,
        category_counts,
        text_present: raw.text_present as u8,
    })
}

/// Parses `records.jsonl` content. Blank lines are skipped.
pub fn parse_records<R: BufRead>(
    reader: R,
    vocabularies: &Vocabularies,
) -> Result<Result<Vec<AnnotatedRecord>, Vec<Violation>>, io::Error> {
    let mut records = Vec::new();
    let mut violations = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = match serde_json::from_str(&line) {
            Ok(raw) => raw,
            Err(e) => {
                violations.push(Violation::MalformedLine {
                    line: line_no,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let Some(record) = convert_raw(line_no, raw, &mut violations) else {
            continue;
        };
        check_record(line_no, &record, vocabularies, &mut violations);
        if !record.filename.is_empty() && seen.insert(record.filename.clone(), line_no).is_some() {
            violations.push(Violation::DuplicateFilename {
                line: line_no,
                name: record.filename.clone(),
            });
        }
        records.push(record);
    }
    if violations.is_empty() {
        Ok(Ok(records))
    } else {
        Ok(Err(violations))
    }
}

/// Loads and validates the corpus stored in directory `path`.
///
/// An `images/` subdirectory, when present, becomes the corpus image dir.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let dir = path.as_ref();
    if !dir.is_dir() {
        return Err(CorpusError::MissingFile(dir.to_path_buf()));
    }
    let read_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source: io::Error| {
            if source.kind() == io::ErrorKind::NotFound {
                CorpusError::MissingFile(path)
            } else {
                CorpusError::Io { path, source }
            }
        }
    };

    let vocab_path = dir.join(VOCAB_FILE);
    let vocab_text = fs::read_to_string(&vocab_path).map_err(read_err(&vocab_path))?;
    let vocabularies = Vocabularies::from_json(&vocab_text)?;

    let records_path = dir.join(RECORDS_FILE);
    let file = fs::File::open(&records_path).map_err(read_err(&records_path))?;
    let records = parse_records(BufReader::new(file), &vocabularies)
        .map_err(read_err(&records_path))?
        .map_err(CorpusError::Invalid)?;

    let corpus = Corpus::assemble(records, vocabularies);
    let images = dir.join(IMAGES_DIR);
    Ok(if images.is_dir() {
        corpus.with_image_dir(images)
    } else {
        corpus
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn record_json(filename: &str) -> serde_json::Value {
        json!({
            "filename": filename,
            "question": "has the milk expired?",
            "answers": vec!["yes"; 10],
            "captions": vec!["a carton of milk"; 5],
            "categories": {
                "answer_difference": {"DFF": 2},
                "quality_issues": {"ROT": 1, "BLR": 0}
            },
            "text_present": 4
        })
    }

    fn write_corpus(dir: &Path, lines: &[serde_json::Value]) {
        fs::write(dir.join(VOCAB_FILE), DEFAULT_VOCAB_JSON).unwrap();
        let body: String = lines.iter().map(|l| format!("{l}\n")).collect();
        fs::write(dir.join(RECORDS_FILE), body).unwrap();
    }

    fn violations(err: CorpusError) -> Vec<Violation> {
        match err {
            CorpusError::Invalid(v) => v,
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn empty_records_file_loads_vocab() {
        let dir = tempfile::tempdir().unwrap();
        write_corpus(dir.path(), &[]);
        let corpus = load_corpus(dir.path()).unwrap();
        assert!(corpus.is_empty());
        assert!(corpus
            .vocabularies()
            .get(Category::AnswerDifference)
            .contains("DFF"));
        assert!(corpus
            .vocabularies()
            .get(Category::QualityIssues)
            .contains("ROT"));
    }

    #[test]
    fn nine_answers_is_a_schema_violation() {
        let dir = tempfile::tempdir().unwrap();
        let mut bad = record_json("a.jpg");
        bad["answers"] = json!(vec!["yes"; 9]);
        write_corpus(dir.path(), &[record_json("b.jpg"), bad]);
        let v = violations(load_corpus(dir.path()).unwrap_err());
        assert_eq!(v.len(), 1);
        match &v[0] {
            Violation::Schema {
                line,
                filename,
                field,
                reason,
            } => {
                assert_eq!(*line, 2);
                assert_eq!(filename, "a.jpg");
                assert_eq!(field, "answers");
                assert!(reason.starts_with("expected 10"), "{reason}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn count_six_is_out_of_range() {
        let dir = tempfile::tempdir().unwrap();
        let mut bad = record_json("a.jpg");
        bad["categories"]["answer_difference"]["DFF"] = json!(6);
        write_corpus(dir.path(), &[bad]);
        let v = violations(load_corpus(dir.path()).unwrap_err());
        assert!(matches!(
            &v[0],
            Violation::Schema { field, reason, .. }
                if field == "categories.answer_difference.DFF"
                    && reason.starts_with("count out of range [0,5]")
        ));
    }

    #[test]
    fn every_violation_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let mut a = record_json("a.jpg");
        a["captions"] = json!(vec!["x"; 4]);
        a["text_present"] = json!(-1);
        let mut b = record_json("b.jpg");
        b["categories"]["skills"] = json!({"NOPE": 1});
        let mut c = record_json("c.jpg");
        c["categories"]["colours"] = json!({"RED": 1});
        write_corpus(
            dir.path(),
            &[a, b, c, record_json("d.jpg"), record_json("d.jpg")],
        );
        let fields: Vec<String> = violations(load_corpus(dir.path()).unwrap_err())
            .into_iter()
            .map(|v| match v {
                Violation::Schema { field, .. } => field,
                Violation::DuplicateFilename { name, .. } => format!("dup:{name}"),
                Violation::MalformedLine { .. } => "malformed".into(),
            })
            .collect();
        assert_eq!(
            fields,
            [
                "captions",
                "text_present",
                "categories.skills.NOPE",
                "categories.colours",
                "dup:d.jpg"
            ]
        );
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        write_corpus(dir.path(), &[record_json("a.jpg")]);
        let mut body = fs::read_to_string(dir.path().join(RECORDS_FILE)).unwrap();
        body.push_str("{not json\n");
        fs::write(dir.path().join(RECORDS_FILE), body).unwrap();
        let v = violations(load_corpus(dir.path()).unwrap_err());
        assert!(matches!(v[0], Violation::MalformedLine { line: 2, .. }));
    }

    #[test]
    fn missing_files_are_io_errors() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_corpus(dir.path().join("nope")).unwrap_err();
        assert!(err.is_io());
        let err = load_corpus(dir.path()).unwrap_err();
        assert!(matches!(&err, CorpusError::MissingFile(p) if p.ends_with(VOCAB_FILE)));
        fs::write(dir.path().join(VOCAB_FILE), DEFAULT_VOCAB_JSON).unwrap();
        let err = load_corpus(dir.path()).unwrap_err();
        assert!(matches!(&err, CorpusError::MissingFile(p) if p.ends_with(RECORDS_FILE)));
    }

    #[test]
    fn empty_filename_and_question() {
        let dir = tempfile::tempdir().unwrap();
        let mut ok = record_json("q.jpg");
        ok["question"] = json!("");
        let mut bad = record_json("");
        bad["question"] = json!("");
        write_corpus(dir.path(), &[ok.clone()]);
        assert_eq!(load_corpus(dir.path()).unwrap().len(), 1);
        write_corpus(dir.path(), &[ok, bad]);
        let v = violations(load_corpus(dir.path()).unwrap_err());
        assert!(matches!(&v[0], Violation::Schema { field, .. } if field == "filename"));
    }

    #[test]
    fn duplicate_vocab_codes_rejected() {
        let err = Vocabularies::from_json(
            r#"{"answer_difference":[{"code":"A","name":"a"},{"code":"A","name":"b"}],"skills":[],"quality_issues":[]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CorpusError::Vocab(_)));
    }

    #[test]
    fn images_subdir_becomes_image_dir() {
        let dir = tempfile::tempdir().unwrap();
        write_corpus(dir.path(), &[record_json("a.jpg")]);
        assert!(load_corpus(dir.path()).unwrap().image_dir().is_none());
        fs::create_dir(dir.path().join(IMAGES_DIR)).unwrap();
        let corpus = load_corpus(dir.path()).unwrap();
        assert_eq!(
            corpus.image_dir(),
            Some(dir.path().join(IMAGES_DIR).as_path())
        );
    }

    #[test]
    fn filename_rank_orders_names() {
        let dir = tempfile::tempdir().unwrap();
        write_corpus(
            dir.path(),
            &[
                record_json("c.jpg"),
                record_json("a.jpg"),
                record_json("b.jpg"),
            ],
        );
        let corpus = load_corpus(dir.path()).unwrap();
        let ranks: Vec<u32> = (0..3).map(|i| corpus.filename_rank(i)).collect();
        assert_eq!(ranks, [2, 0, 1]);
    }

    #[test]
    fn category_round_trips_through_str() {
        for c in Category::ALL {
            assert_eq!(c.as_str().parse::<Category>().unwrap(), c);
        }
        assert!("colours".parse::<Category>().is_err());
    }
}
