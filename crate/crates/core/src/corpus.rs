//! Document collections: loading, validation, cleaning, filtering, sampling.
//!
//! A [`Corpus`] is an ordered collection of [`Document`]s, optionally tagged
//! with the [`ScoreScale`] its gold scores live on. Corpora are read from
//! JSON-lines or CSV files sharing one schema (`id`, `text`, `author_id`,
//! `score`, `cefr`, `dataset`; all but `id` optional), cleaned by a fixed
//! rule pipeline ([`clean_corpus`]), subset by proficiency label
//! ([`filter_by_cefr`]), and sampled deterministically ([`sample_documents`]).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// CEFR proficiency label attached to learner texts.
///
/// Only the five levels that occur in the corpora this crate targets are
/// represented; there is deliberately no C2 variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CefrLevel {
    A1,
    A2,
    B1,
    B2,
    C1,
}

impl CefrLevel {
    /// All levels in ascending proficiency order.
    pub const ALL: [CefrLevel; 5] = [
        CefrLevel::A1,
        CefrLevel::A2,
        CefrLevel::B1,
        CefrLevel::B2,
        CefrLevel::C1,
    ];

    /// Canonical uppercase name, e.g. `"B2"`.
    pub fn as_str(self) -> &'static str {
        match self {
            CefrLevel::A1 => "A1",
            CefrLevel::A2 => "A2",
            CefrLevel::B1 => "B1",
            CefrLevel::B2 => "B2",
            CefrLevel::C1 => "C1",
        }
    }
}

impl fmt::Display for CefrLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CefrLevel {
    type Err = Error;

    /// Parses a level name case-insensitively (`"b1"` and `"B1"` both work).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(CefrLevel::A1),
            "A2" => Ok(CefrLevel::A2),
            "B1" => Ok(CefrLevel::B1),
            "B2" => Ok(CefrLevel::B2),
            "C1" => Ok(CefrLevel::C1),
            other => Err(Error::invalid(format!(
                "unknown CEFR level {other:?} (expected A1, A2, B1, B2, or C1)"
            ))),
        }
    }
}

/// The closed scale a dataset's scores live on: bounds plus step size.
///
/// Valid scores are `min`, `min + step`, …, `max`; `max - min` must be an
/// exact multiple of `step`. For example essays marked 0–9 in half-point
/// bands use `ScoreScale::new(0.0, 9.0, 0.5)` (19 valid steps) and a 0–20
/// integer scale uses `ScoreScale::new(0.0, 20.0, 1.0)` (21 steps).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreScale {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

/// Tolerance used when deciding whether a float lands on the scale grid.
const GRID_EPSILON: f64 = 1e-9;

impl ScoreScale {
    /// Validates and builds a scale. `min < max`, `step > 0`, and
    /// `(max - min) / step` must be an integer (within a small tolerance).
    pub fn new(min: f64, max: f64, step: f64) -> Result<ScoreScale> {
        if !(min.is_finite() && max.is_finite() && step.is_finite()) {
            return Err(Error::invalid("score scale bounds and step must be finite"));
        }
        if min >= max {
            return Err(Error::invalid(format!(
                "score scale min ({min}) must be below max ({max})"
            )));
        }
        if step <= 0.0 {
            return Err(Error::invalid(format!("score scale step ({step}) must be positive")));
        }
        let steps = (max - min) / step;
        if (steps - steps.round()).abs() > GRID_EPSILON {
            return Err(Error::invalid(format!(
                "score scale span {min}..{max} is not a whole number of steps of {step}"
            )));
        }
        Ok(ScoreScale { min, max, step })
    }

    /// Number of valid score values on the scale (categories for agreement
    /// statistics). A 0–9 scale with step 0.5 has 19.
    pub fn categories(&self) -> usize {
        ((self.max - self.min) / self.step).round() as usize + 1
    }

    /// Whether `score` lies inside `[min, max]` (it need not be on the grid).
    pub fn contains(&self, score: f64) -> bool {
        score.is_finite() && score >= self.min - GRID_EPSILON && score <= self.max + GRID_EPSILON
    }

    /// Index of the grid value nearest to `score`, clamped into range.
    /// Exact midpoints round away from zero, so 2.5 steps round up.
    pub fn category_index(&self, score: f64) -> usize {
        let raw = ((score - self.min) / self.step).round();
        let clamped = raw.clamp(0.0, (self.categories() - 1) as f64);
        clamped as usize
    }

    /// The grid value for a category index.
    pub fn value_at(&self, index: usize) -> f64 {
        self.min + index as f64 * self.step
    }

    /// Snaps `score` to the nearest valid grid value.
    pub fn snap(&self, score: f64) -> f64 {
        self.value_at(self.category_index(score))
    }

    /// Iterator over every valid score value, ascending.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.categories()).map(move |i| self.value_at(i))
    }

    /// Maps a score on this scale linearly into `[0, 1]`.
    pub fn normalize(&self, score: f64) -> f64 {
        (score - self.min) / (self.max - self.min)
    }

    /// Inverse of [`normalize`](Self::normalize), snapped back onto the
    /// scale grid so that every valid score round-trips exactly. Inputs
    /// outside `[0, 1]` are clamped first.
    pub fn denormalize(&self, normalized: f64) -> f64 {
        let clamped = normalized.clamp(0.0, 1.0);
        self.snap(self.min + clamped * (self.max - self.min))
    }
}

/// One scored (or unscored) text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cefr: Option<CefrLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
}

impl Document {
    /// Minimal constructor used heavily in tests: id and text only.
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Document {
        Document {
            id: id.into(),
            text: text.into(),
            author_id: None,
            score: None,
            cefr: None,
            dataset: None,
        }
    }
}

/// Named, ordered document collection with an optional declared score scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub documents: Vec<Document>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScoreScale>,
}

impl Corpus {
    /// Builds a corpus after checking that ids are unique.
    pub fn new(name: impl Into<String>, documents: Vec<Document>) -> Result<Corpus> {
        let mut seen = HashSet::with_capacity(documents.len());
        for doc in &documents {
            if !seen.insert(doc.id.as_str()) {
                return Err(Error::invalid(format!("duplicate document id {:?}", doc.id)));
            }
        }
        Ok(Corpus {
            name: name.into(),
            documents,
            scale: None,
        })
    }

    /// Attaches a score scale, checking every present score falls within it.
    pub fn with_scale(mut self, scale: ScoreScale) -> Result<Corpus> {
        for doc in &self.documents {
            if let Some(score) = doc.score {
                if !scale.contains(score) {
                    return Err(Error::invalid(format!(
                        "document {:?} has score {score} outside the declared scale {}..{}",
                        doc.id, scale.min, scale.max
                    )));
                }
            }
        }
        self.scale = Some(scale);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    /// Looks a document up by id.
    pub fn get(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }
}

/// On-disk serialization of a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    /// One JSON object per line with the shared document keys.
    Jsonl,
    /// RFC 4180 CSV whose header row names the same keys.
    Csv,
}

impl FileFormat {
    /// Guesses a format from a path extension (`.jsonl`/`.json` vs `.csv`).
    pub fn from_path(path: &Path) -> Result<FileFormat> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Ok(FileFormat::Jsonl),
            Some("csv") => Ok(FileFormat::Csv),
            other => Err(Error::invalid(format!(
                "cannot infer corpus format from extension {other:?}; expected .jsonl or .csv"
            ))),
        }
    }
}

/// Raw record shape shared by both file formats. Everything except `id` is
/// optional at load time; missing text becomes the empty string and is left
/// for the cleaning pipeline to drop, so that loading never silently skips
/// records.
#[derive(Debug, Deserialize)]
struct RawRecord {
    id: Option<String>,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    author_id: Option<String>,
    #[serde(default)]
    score: Option<f64>,
    #[serde(default)]
    cefr: Option<String>,
    #[serde(default)]
    dataset: Option<String>,
}

fn finish_record(raw: RawRecord, path: &Path, line: usize) -> Result<Document> {
    let id = match raw.id {
        Some(id) if !id.trim().is_empty() => id,
        _ => return Err(Error::record(path, line, "record is missing an id")),
    };
    let cefr = match raw.cefr.as_deref().map(str::trim) {
        None | Some("") => None,
        Some(label) => Some(
            label
                .parse::<CefrLevel>()
                .map_err(|e| Error::record(path, line, e.to_string()))?,
        ),
    };
    if let Some(score) = raw.score {
        if !score.is_finite() {
            return Err(Error::record(path, line, format!("score {score} is not finite")));
        }
    }
    Ok(Document {
        id,
        text: raw.text.unwrap_or_default(),
        author_id: raw.author_id.filter(|a| !a.trim().is_empty()),
        score: raw.score,
        cefr,
        dataset: raw.dataset.filter(|d| !d.trim().is_empty()),
    })
}

/// Loads a corpus from disk. The corpus is named after the file stem.
///
/// Errors carry the path and 1-based line (or CSV record) number of the
/// offending record; duplicate ids are rejected.
pub fn load_corpus(path: &Path, format: FileFormat) -> Result<Corpus> {
    let documents = match format {
        FileFormat::Jsonl => load_jsonl(path)?,
        FileFormat::Csv => load_csv(path)?,
    };
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("corpus")
        .to_string();
    let mut seen: HashMap<String, usize> = HashMap::with_capacity(documents.len());
    for (index, doc) in documents.iter().enumerate() {
        if let Some(first) = seen.insert(doc.id.clone(), index + 1) {
            return Err(Error::record(
                path,
                index + 1,
                format!("duplicate document id {:?} (first seen at record {first})", doc.id),
            ));
        }
    }
    Ok(Corpus {
        name,
        documents,
        scale: None,
    })
}

fn load_jsonl(path: &Path) -> Result<Vec<Document>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut documents = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawRecord = serde_json::from_str(&line)
            .map_err(|e| Error::record(path, line_no, format!("invalid JSON: {e}")))?;
        documents.push(finish_record(raw, path, line_no)?);
    }
    Ok(documents)
}

fn load_csv(path: &Path) -> Result<Vec<Document>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(path)
        .map_err(|e| Error::record(path, 1, e.to_string()))?;
    let mut documents = Vec::new();
    for (i, row) in reader.deserialize::<RawRecord>().enumerate() {
        // Header occupies line 1, so the first record is line 2.
        let line_no = i + 2;
        let raw = row.map_err(|e| Error::record(path, line_no, trim_csv_error(&e)))?;
        documents.push(finish_record(raw, path, line_no)?);
    }
    Ok(documents)
}

/// The csv crate prefixes errors with its own position text; keep the gist.
fn trim_csv_error(error: &csv::Error) -> String {
    match error.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
        _ => error.to_string(),
    }
}

/// Writes a corpus in the given format. JSON-lines rows omit absent optional
/// fields; CSV always writes the full six-column header.
pub fn write_corpus(corpus: &Corpus, path: &Path, format: FileFormat) -> Result<()> {
    match format {
        FileFormat::Jsonl => {
            let mut out = Vec::new();
            for doc in &corpus.documents {
                serde_json::to_writer(&mut out, doc)
                    .map_err(|e| Error::invalid(format!("cannot serialize document: {e}")))?;
                out.push(b'\n');
            }
            std::fs::write(path, out).map_err(|e| Error::io(path, e))
        }
        FileFormat::Csv => {
            let mut writer = csv::Writer::from_path(path).map_err(|e| Error::invalid(e.to_string()))?;
            writer
                .write_record(["id", "text", "author_id", "score", "cefr", "dataset"])
                .map_err(|e| Error::invalid(e.to_string()))?;
            for doc in &corpus.documents {
                let score = doc.score.map(|s| format_score(s)).unwrap_or_default();
                let cefr = doc.cefr.map(|c| c.as_str().to_string()).unwrap_or_default();
                writer
                    .write_record([
                        doc.id.as_str(),
                        doc.text.as_str(),
                        doc.author_id.as_deref().unwrap_or(""),
                        score.as_str(),
                        cefr.as_str(),
                        doc.dataset.as_deref().unwrap_or(""),
                    ])
                    .map_err(|e| Error::invalid(e.to_string()))?;
            }
            writer
                .flush()
                .map_err(|e| Error::io(path, e))
        }
    }
}

/// Formats a score without trailing noise: integers print bare, halves keep
/// one decimal, anything else falls back to shortest round-trip formatting.
pub fn format_score(score: f64) -> String {
    if (score - score.round()).abs() < 1e-9 {
        format!("{}", score.round() as i64)
    } else {
        format!("{score}")
    }
}

/// Counts produced by [`clean_corpus`]. `input_documents` equals
/// `output_documents` plus the four drop counts; each dropped document is
/// counted once, under the first rule that rejected it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub input_documents: usize,
    pub output_documents: usize,
    pub dropped_missing: usize,
    pub dropped_duplicate: usize,
    pub dropped_short: usize,
    pub dropped_foreign: usize,
}

/// Default minimum character count for [`clean_corpus`].
pub const DEFAULT_MIN_CHARS: usize = 100;

/// Share of alphabetic characters that must be ASCII for a text to count as
/// English-like; below this it is dropped as foreign.
const FOREIGN_LATIN_THRESHOLD: f64 = 0.60;

/// Heuristic foreign-text detector: true when fewer than 60% of the text's
/// alphabetic characters fall in the basic Latin (ASCII) range. Texts with no
/// alphabetic characters at all are not flagged.
pub fn is_foreign(text: &str) -> bool {
    let mut alphabetic = 0u64;
    let mut latin = 0u64;
    for c in text.chars() {
        if c.is_alphabetic() {
            alphabetic += 1;
            if c.is_ascii() {
                latin += 1;
            }
        }
    }
    alphabetic > 0 && (latin as f64) < FOREIGN_LATIN_THRESHOLD * alphabetic as f64
}

/// Collapses all whitespace runs to single spaces and trims the ends; the
/// key under which duplicate texts are detected.
fn normalized_text(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Applies the cleaning pipeline, preserving the relative order of survivors.
///
/// Each document is tested against four rules in a fixed order and dropped at
/// the first failure:
///
/// 1. missing/empty (all-whitespace) text, or a missing score when the corpus
///    declares a score scale;
/// 2. exact duplicate of an earlier document's whitespace-normalized text
///    (the first occurrence is kept — even if a later rule then drops it,
///    subsequent copies still count as duplicates);
/// 3. shorter than `min_chars` Unicode scalar characters;
/// 4. foreign per [`is_foreign`].
///
/// Cleaning is idempotent: running it again on its own output drops nothing.
pub fn clean_corpus(corpus: &Corpus, min_chars: usize) -> (Corpus, CleaningReport) {
    let require_score = corpus.scale.is_some();
    let mut seen_texts: HashSet<String> = HashSet::new();
    let mut kept = Vec::new();
    let mut report = CleaningReport {
        input_documents: corpus.documents.len(),
        output_documents: 0,
        dropped_missing: 0,
        dropped_duplicate: 0,
        dropped_short: 0,
        dropped_foreign: 0,
    };
    for doc in &corpus.documents {
        if doc.text.trim().is_empty() || (require_score && doc.score.is_none()) {
            report.dropped_missing += 1;
            continue;
        }
        if !seen_texts.insert(normalized_text(&doc.text)) {
            report.dropped_duplicate += 1;
            continue;
        }
        if doc.text.chars().count() < min_chars {
            report.dropped_short += 1;
            continue;
        }
        if is_foreign(&doc.text) {
            report.dropped_foreign += 1;
            continue;
        }
        kept.push(doc.clone());
    }
    report.output_documents = kept.len();
    let cleaned = Corpus {
        name: corpus.name.clone(),
        documents: kept,
        scale: corpus.scale,
    };
    (cleaned, report)
}

/// Keeps only documents whose CEFR label is in `levels`, preserving order.
/// Documents without a label are excluded. An empty `levels` is an error.
pub fn filter_by_cefr(corpus: &Corpus, levels: &[CefrLevel]) -> Result<Corpus> {
    if levels.is_empty() {
        return Err(Error::invalid("filter_by_cefr requires at least one CEFR level"));
    }
    let wanted: HashSet<CefrLevel> = levels.iter().copied().collect();
    let documents = corpus
        .documents
        .iter()
        .filter(|d| d.cefr.is_some_and(|c| wanted.contains(&c)))
        .cloned()
        .collect();
    Ok(Corpus {
        name: corpus.name.clone(),
        documents,
        scale: corpus.scale,
    })
}

/// Draws a seeded uniform sample of `n` documents without replacement.
///
/// The sampled corpus lists documents in draw order (the prefix of the seeded
/// shuffle), so for a fixed seed the size-`n` sample is a prefix of the
/// size-`n+1` sample.
pub fn sample_documents(corpus: &Corpus, n: usize, seed: u64) -> Result<Corpus> {
    if n > corpus.documents.len() {
        return Err(Error::invalid(format!(
            "cannot sample {n} documents from a corpus of {}",
            corpus.documents.len()
        )));
    }
    let indices = rng::sample_indices(seed, corpus.documents.len(), n);
    let documents = indices.iter().map(|&i| corpus.documents[i].clone()).collect();
    Ok(Corpus {
        name: corpus.name.clone(),
        documents,
        scale: corpus.scale,
    })
}
