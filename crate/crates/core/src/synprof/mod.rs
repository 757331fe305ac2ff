//! Syntactic profiling: counting structural units in parsed sentences and
//! summarising them as complexity indices.
//!
//! The unit inventory follows the conventions of second-language
//! syntactic-complexity analysis: clauses (C), T-units (T, the minimal
//! terminable unit: a main clause with everything attached to it),
//! dependent clauses (DC), complex T-units (CT), coordinate phrases (CP),
//! complex nominals (CN), and verb phrases (VP). Each unit is defined by
//! one or more tree queries (see [`pattern`]); the defaults ship with the
//! crate and can be replaced by a user-supplied pattern file.
//!
//! From the raw counts, seven indices are derived:
//!
//! | index | meaning                       |
//! |-------|-------------------------------|
//! | MLT   | words per T-unit              |
//! | MLC   | words per clause              |
//! | C/T   | clauses per T-unit            |
//! | DC/C  | dependent clauses per clause  |
//! | CT/T  | complex T-units per T-unit    |
//! | CP/T  | coordinate phrases per T-unit |
//! | CN/T  | complex nominals per T-unit   |
//!
//! A word is a terminal whose part-of-speech tag contains at least one
//! alphanumeric character; terminals under pure punctuation tags (`.`,
//! `,`, `:`, …) are not words. A ratio with a zero denominator is reported
//! as 0 and flagged rather than poisoning downstream aggregation.

mod pattern;
mod tree;

pub use pattern::{match_pattern, TreePattern};
pub use tree::{parse_bracketed, read_tree_file, ParseTree, TreeBank};

use std::collections::BTreeSet;
use std::fmt;
use std::ops::AddAssign;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::lexalign::sha256_hex;

/// The seven structural unit kinds a pattern file must define.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Clause,
    TUnit,
    DependentClause,
    ComplexTUnit,
    CoordinatePhrase,
    ComplexNominal,
    VerbPhrase,
}

impl UnitKind {
    pub const ALL: [UnitKind; 7] = [
        UnitKind::Clause,
        UnitKind::TUnit,
        UnitKind::DependentClause,
        UnitKind::ComplexTUnit,
        UnitKind::CoordinatePhrase,
        UnitKind::ComplexNominal,
        UnitKind::VerbPhrase,
    ];

    /// The name used in pattern files.
    pub fn short_name(&self) -> &'static str {
        match self {
            UnitKind::Clause => "C",
            UnitKind::TUnit => "T",
            UnitKind::DependentClause => "DC",
            UnitKind::ComplexTUnit => "CT",
            UnitKind::CoordinatePhrase => "CP",
            UnitKind::ComplexNominal => "CN",
            UnitKind::VerbPhrase => "VP",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            UnitKind::Clause => "clause",
            UnitKind::TUnit => "T-unit",
            UnitKind::DependentClause => "dependent clause",
            UnitKind::ComplexTUnit => "complex T-unit",
            UnitKind::CoordinatePhrase => "coordinate phrase",
            UnitKind::ComplexNominal => "complex nominal",
            UnitKind::VerbPhrase => "verb phrase",
        }
    }

    pub fn from_short_name(name: &str) -> Option<UnitKind> {
        UnitKind::ALL.iter().copied().find(|k| k.short_name() == name)
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Raw unit tallies for a text (or a pool of texts).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitCounts {
    pub words: u64,
    pub sentences: u64,
    pub clauses: u64,
    pub t_units: u64,
    pub dependent_clauses: u64,
    pub complex_t_units: u64,
    pub coordinate_phrases: u64,
    pub complex_nominals: u64,
    pub verb_phrases: u64,
}

impl UnitCounts {
    pub fn get(&self, kind: UnitKind) -> u64 {
        match kind {
            UnitKind::Clause => self.clauses,
            UnitKind::TUnit => self.t_units,
            UnitKind::DependentClause => self.dependent_clauses,
            UnitKind::ComplexTUnit => self.complex_t_units,
            UnitKind::CoordinatePhrase => self.coordinate_phrases,
            UnitKind::ComplexNominal => self.complex_nominals,
            UnitKind::VerbPhrase => self.verb_phrases,
        }
    }

    fn add(&mut self, kind: UnitKind, n: u64) {
        match kind {
            UnitKind::Clause => self.clauses += n,
            UnitKind::TUnit => self.t_units += n,
            UnitKind::DependentClause => self.dependent_clauses += n,
            UnitKind::ComplexTUnit => self.complex_t_units += n,
            UnitKind::CoordinatePhrase => self.coordinate_phrases += n,
            UnitKind::ComplexNominal => self.complex_nominals += n,
            UnitKind::VerbPhrase => self.verb_phrases += n,
        }
    }
}

impl AddAssign for UnitCounts {
    fn add_assign(&mut self, other: UnitCounts) {
        self.words += other.words;
        self.sentences += other.sentences;
        self.clauses += other.clauses;
        self.t_units += other.t_units;
        self.dependent_clauses += other.dependent_clauses;
        self.complex_t_units += other.complex_t_units;
        self.coordinate_phrases += other.coordinate_phrases;
        self.complex_nominals += other.complex_nominals;
        self.verb_phrases += other.verb_phrases;
    }
}

/// True when terminals under this part-of-speech tag count as words.
pub fn is_word_tag(tag: &str) -> bool {
    tag.chars().any(|c| c.is_alphanumeric())
}

const DEFAULT_PATTERNS: &str = include_str!("../../data/patterns.txt");

/// A named collection of compiled unit patterns. Every [`UnitKind`] must be
/// covered; a kind may have several patterns, whose counts are summed.
#[derive(Debug, Clone)]
pub struct PatternSet {
    entries: Vec<(UnitKind, TreePattern)>,
    checksum: String,
}

impl PatternSet {
    /// Parses `NAME: pattern` lines (see the default file for the format).
    pub fn parse(text: &str) -> Result<PatternSet> {
        let mut entries = Vec::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, pattern_text) = line.split_once(':').ok_or_else(|| {
                Error::invalid(format!(
                    "line {line_no}: missing ':' separator (expected \"NAME: pattern\")"
                ))
            })?;
            let name = name.trim();
            let kind = UnitKind::from_short_name(name).ok_or_else(|| {
                Error::invalid(format!(
                    "line {line_no}: unknown unit name {name:?} (expected one of C, T, DC, CT, CP, CN, VP)"
                ))
            })?;
            let pattern = TreePattern::parse(pattern_text.trim())
                .map_err(|e| Error::invalid(format!("line {line_no}: {e}")))?;
            entries.push((kind, pattern));
        }
        for kind in UnitKind::ALL {
            if !entries.iter().any(|(k, _)| *k == kind) {
                return Err(Error::invalid(format!(
                    "no pattern defined for unit {} ({})",
                    kind.short_name(),
                    kind.description()
                )));
            }
        }
        Ok(PatternSet {
            entries,
            checksum: sha256_hex(text.as_bytes()),
        })
    }

    /// Loads a pattern file from disk.
    pub fn from_file(path: &Path) -> Result<PatternSet> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PatternSet::parse(&text)
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
    }

    /// The pattern set shipped with the crate.
    pub fn default_set() -> &'static PatternSet {
        static SET: OnceLock<PatternSet> = OnceLock::new();
        SET.get_or_init(|| {
            PatternSet::parse(DEFAULT_PATTERNS).expect("bundled pattern file is valid")
        })
    }

    /// The text of the bundled default pattern file.
    pub fn default_source() -> &'static str {
        DEFAULT_PATTERNS
    }

    /// SHA-256 of the pattern file text this set was built from.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    /// `(kind, pattern)` pairs in file order.
    pub fn entries(&self) -> impl Iterator<Item = (UnitKind, &TreePattern)> {
        self.entries.iter().map(|(k, p)| (*k, p))
    }

    /// Counts words, sentences, and every pattern-defined unit over a
    /// text's parse trees (one tree per sentence).
    pub fn count_units(&self, trees: &[ParseTree]) -> UnitCounts {
        let mut counts = UnitCounts {
            sentences: trees.len() as u64,
            ..UnitCounts::default()
        };
        for tree in trees {
            counts.words += tree
                .tagged_terminals()
                .iter()
                .filter(|(tag, _)| is_word_tag(tag))
                .count() as u64;
            let index = pattern::TreeIndex::build(tree);
            for (kind, pattern) in &self.entries {
                counts.add(*kind, pattern.count_in_index(&index) as u64);
            }
        }
        counts
    }
}

/// Counts units in `trees` using `patterns`.
pub fn count_units(trees: &[ParseTree], patterns: &PatternSet) -> UnitCounts {
    patterns.count_units(trees)
}

/// Display names of the seven indices, in report order.
pub const INDEX_NAMES: [&str; 7] = ["MLT", "MLC", "C/T", "DC/C", "CT/T", "CP/T", "CN/T"];

/// The seven complexity indices computed from [`UnitCounts`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntacticProfile {
    pub mlt: f64,
    pub mlc: f64,
    pub c_per_t: f64,
    pub dc_per_c: f64,
    pub ct_per_t: f64,
    pub cp_per_t: f64,
    pub cn_per_t: f64,
    /// Indices whose denominator was zero (their value is reported as 0).
    pub zero_denominators: Vec<String>,
}

impl SyntacticProfile {
    /// Index values in [`INDEX_NAMES`] order.
    pub fn values(&self) -> [f64; 7] {
        [
            self.mlt,
            self.mlc,
            self.c_per_t,
            self.dc_per_c,
            self.ct_per_t,
            self.cp_per_t,
            self.cn_per_t,
        ]
    }
}

/// Derives the seven indices from raw counts.
pub fn profile(counts: &UnitCounts) -> SyntacticProfile {
    let mut flags = Vec::new();
    let mut ratio = |numerator: u64, denominator: u64, name: &str| -> f64 {
        if denominator == 0 {
            flags.push(name.to_string());
            0.0
        } else {
            numerator as f64 / denominator as f64
        }
    };
    let mlt = ratio(counts.words, counts.t_units, "MLT");
    let mlc = ratio(counts.words, counts.clauses, "MLC");
    let c_per_t = ratio(counts.clauses, counts.t_units, "C/T");
    let dc_per_c = ratio(counts.dependent_clauses, counts.clauses, "DC/C");
    let ct_per_t = ratio(counts.complex_t_units, counts.t_units, "CT/T");
    let cp_per_t = ratio(counts.coordinate_phrases, counts.t_units, "CP/T");
    let cn_per_t = ratio(counts.complex_nominals, counts.t_units, "CN/T");
    SyntacticProfile {
        mlt,
        mlc,
        c_per_t,
        dc_per_c,
        ct_per_t,
        cp_per_t,
        cn_per_t,
        zero_denominators: flags,
    }
}

/// How per-document results are combined into a corpus figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// Compute each document's indices, then average them (every document
    /// weighs the same regardless of length). The default.
    MeanOfTexts,
    /// Sum the unit counts over all documents, then compute the indices
    /// once from the pooled counts.
    Pooled,
}

impl Aggregation {
    pub fn label(&self) -> &'static str {
        match self {
            Aggregation::MeanOfTexts => "mean of texts",
            Aggregation::Pooled => "pooled",
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One document's counts and indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentProfile {
    pub id: String,
    pub counts: UnitCounts,
    pub indices: SyntacticProfile,
}

/// A corpus-level syntactic profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusProfile {
    /// Corpus name the profile describes.
    pub source: String,
    pub documents: usize,
    pub sentences: u64,
    pub words: u64,
    pub aggregation: Aggregation,
    pub indices: SyntacticProfile,
    pub per_document: Vec<DocumentProfile>,
}

/// Profiles every document of `corpus` using its parse trees in `bank`,
/// then aggregates. Every document must have trees; a missing id is an
/// error naming the document.
pub fn profile_corpus(
    corpus: &Corpus,
    bank: &TreeBank,
    patterns: &PatternSet,
    aggregation: Aggregation,
) -> Result<CorpusProfile> {
    if corpus.documents.is_empty() {
        return Err(Error::invalid(format!(
            "corpus {:?} has no documents to profile",
            corpus.name
        )));
    }
    let mut per_document = Vec::with_capacity(corpus.documents.len());
    let mut pooled = UnitCounts::default();
    for doc in &corpus.documents {
        let trees = bank.get(&doc.id).ok_or_else(|| {
            Error::invalid(format!(
                "no parse trees for document {:?} in corpus {:?}",
                doc.id, corpus.name
            ))
        })?;
        let counts = patterns.count_units(trees);
        pooled += counts;
        per_document.push(DocumentProfile {
            id: doc.id.clone(),
            indices: profile(&counts),
            counts,
        });
    }
    let indices = match aggregation {
        Aggregation::Pooled => profile(&pooled),
        Aggregation::MeanOfTexts => {
            let n = per_document.len() as f64;
            let mut sums = [0.0f64; 7];
            let mut flags = BTreeSet::new();
            for doc in &per_document {
                for (sum, value) in sums.iter_mut().zip(doc.indices.values()) {
                    *sum += value;
                }
                flags.extend(doc.indices.zero_denominators.iter().cloned());
            }
            let mean = |i: usize| sums[i] / n;
            SyntacticProfile {
                mlt: mean(0),
                mlc: mean(1),
                c_per_t: mean(2),
                dc_per_c: mean(3),
                ct_per_t: mean(4),
                cp_per_t: mean(5),
                cn_per_t: mean(6),
                zero_denominators: flags.into_iter().collect(),
            }
        }
    };
    Ok(CorpusProfile {
        source: corpus.name.clone(),
        documents: per_document.len(),
        sentences: pooled.sentences,
        words: pooled.words,
        aggregation,
        indices,
        per_document,
    })
}

/// Renders corpus profiles as CSV (three decimal places).
pub fn profiles_csv(rows: &[CorpusProfile]) -> String {
    let mut out = String::from("source,documents,sentences,words,MLT,MLC,C/T,DC/C,CT/T,CP/T,CN/T\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}",
            row.source, row.documents, row.sentences, row.words
        ));
        for value in row.indices.values() {
            out.push_str(&format!(",{value:.3}"));
        }
        out.push('\n');
    }
    out
}

/// Renders corpus profiles as an aligned text table with a footer noting
/// the aggregation mode and the pattern file checksum.
pub fn profiles_table(rows: &[CorpusProfile], pattern_checksum: &str) -> String {
    let mut header: Vec<String> = vec!["source".to_string()];
    header.extend(INDEX_NAMES.iter().map(|s| s.to_string()));
    let mut grid: Vec<Vec<String>> = vec![header];
    for row in rows {
        let mut cells = vec![row.source.clone()];
        cells.extend(row.indices.values().iter().map(|v| format!("{v:.3}")));
        grid.push(cells);
    }
    let widths: Vec<usize> = (0..grid[0].len())
        .map(|c| grid.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in grid.iter().enumerate() {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            if c == 0 {
                line.push_str(&format!("{cell:<width$}", width = widths[c]));
            } else {
                line.push_str(&format!("{cell:>width$}", width = widths[c]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if i == 0 {
            let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    if let Some(first) = rows.first() {
        out.push_str(&format!("aggregation: {}\n", first.aggregation.label()));
    }
    out.push_str(&format!("patterns sha256: {pattern_checksum}\n"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, Document};

    /// Ten hand-annotated sentences; expected counts were derived by hand
    /// from the unit definitions, not from program output. Columns:
    /// words, C, T, DC, CT, CP, CN, VP.
    const SUITE: [(&str, [u64; 8]); 10] = [
        (
            "(ROOT (S (NP (DT The) (NN dog)) (VP (VBD barked)) (. .)))",
            [3, 1, 1, 0, 0, 0, 0, 1],
        ),
        (
            "(ROOT (S (S (NP (DT The) (NN dog)) (VP (VBD barked))) (CC and) (S (NP (DT the) (NN cat)) (VP (VBD slept))) (. .)))",
            [7, 2, 2, 0, 0, 0, 0, 2],
        ),
        (
            "(ROOT (S (NP (PRP I)) (VP (VBP know) (SBAR (IN that) (S (NP (PRP he)) (VP (VBD left))))) (. .)))",
            [5, 2, 1, 1, 1, 0, 1, 2],
        ),
        (
            "(ROOT (S (NP (NP (DT The) (JJ tall) (NN man)) (PP (IN in) (NP (DT the) (NN garden)))) (VP (VBD smiled)) (. .)))",
            [7, 1, 1, 0, 0, 0, 1, 1],
        ),
        (
            "(ROOT (S (NP (NP (NNP John) (POS 's)) (JJ old) (NN friend)) (VP (VBD bought) (NP (NP (NNS apples)) (CC and) (NP (NNS oranges)))) (. .)))",
            [8, 1, 1, 0, 0, 1, 1, 1],
        ),
        (
            "(ROOT (SQ (VBZ Is) (NP (DT the) (NN teacher)) (VP (VBG coming) (NP (NN today))) (. ?)))",
            [5, 1, 1, 0, 0, 0, 0, 1],
        ),
        (
            "(ROOT (S (S (VP (VBG Swimming) (PP (IN in) (NP (DT the) (NN lake))))) (VP (VBZ is) (ADJP (JJ fun))) (. .)))",
            [6, 1, 1, 0, 0, 0, 1, 2],
        ),
        (
            "(ROOT (S (NP (NP (DT The) (NN book)) (SBAR (WHNP (WDT that)) (S (NP (PRP she)) (VP (VBD wrote))))) (VP (VBD won) (NP (DT a) (NN prize))) (. .)))",
            [8, 2, 1, 1, 1, 0, 1, 2],
        ),
        (
            "(ROOT (S (NP (NP (PRP$ My) (NN friend)) (, ,) (NP (DT a) (NN doctor)) (, ,)) (VP (VBZ lives) (PP (IN in) (NP (NNP Paris))) (SBAR (IN because) (S (NP (PRP she)) (VP (VBZ likes) (NP (DT the) (NN city)))))) (. .)))",
            [12, 2, 1, 1, 1, 0, 1, 2],
        ),
        (
            "(ROOT (S (S (NP (PRP He)) (VP (VBD wanted) (S (VP (TO to) (VP (VB win)))))) (, ,) (CC but) (S (NP (DT the) (NN race)) (VP (VBD was) (ADJP (ADJP (JJ long)) (CC and) (ADJP (RB very) (JJ hard))))) (. .)))",
            [12, 2, 2, 0, 0, 1, 0, 3],
        ),
    ];

    fn suite_trees() -> Vec<ParseTree> {
        SUITE
            .iter()
            .map(|(text, _)| parse_bracketed(text).unwrap().remove(0))
            .collect()
    }

    #[test]
    fn shipped_suite_file_matches_the_embedded_sentences() {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/suite.trees");
        let bank = read_tree_file(&path).unwrap();
        assert_eq!(bank.len(), SUITE.len());
        for (i, (text, _)) in SUITE.iter().enumerate() {
            let id = format!("s{:02}", i + 1);
            let from_file = bank.get(&id).unwrap_or_else(|| panic!("file lacks {id}"));
            let embedded = parse_bracketed(text).unwrap();
            assert_eq!(from_file, embedded.as_slice(), "{id} drifted from the embedded suite");
        }
    }

    #[test]
    fn each_suite_sentence_counts_as_annotated() {
        let patterns = PatternSet::default_set();
        for (i, (text, expected)) in SUITE.iter().enumerate() {
            let trees = parse_bracketed(text).unwrap();
            let c = patterns.count_units(&trees);
            let got = [
                c.words,
                c.clauses,
                c.t_units,
                c.dependent_clauses,
                c.complex_t_units,
                c.coordinate_phrases,
                c.complex_nominals,
                c.verb_phrases,
            ];
            assert_eq!(
                got,
                *expected,
                "sentence {} ({text}): [words, C, T, DC, CT, CP, CN, VP]",
                i + 1
            );
            assert_eq!(c.sentences, 1);
        }
    }

    #[test]
    fn suite_totals_and_indices() {
        let patterns = PatternSet::default_set();
        let counts = patterns.count_units(&suite_trees());
        assert_eq!(counts.sentences, 10);
        assert_eq!(counts.words, 73);
        assert_eq!(counts.clauses, 15);
        assert_eq!(counts.t_units, 12);
        assert_eq!(counts.dependent_clauses, 3);
        assert_eq!(counts.complex_t_units, 3);
        assert_eq!(counts.coordinate_phrases, 2);
        assert_eq!(counts.complex_nominals, 6);
        assert_eq!(counts.verb_phrases, 17);

        let p = profile(&counts);
        let expect = [
            73.0 / 12.0,
            73.0 / 15.0,
            15.0 / 12.0,
            3.0 / 15.0,
            3.0 / 12.0,
            2.0 / 12.0,
            6.0 / 12.0,
        ];
        for (got, want) in p.values().iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
        assert!(p.zero_denominators.is_empty());
    }

    #[test]
    fn punctuation_tags_do_not_yield_words() {
        assert!(is_word_tag("NN"));
        assert!(is_word_tag("POS"));
        assert!(is_word_tag("PRP$"));
        assert!(is_word_tag("-LRB-"));
        assert!(!is_word_tag("."));
        assert!(!is_word_tag(","));
        assert!(!is_word_tag(":"));
        assert!(!is_word_tag("''"));
        assert!(!is_word_tag("``"));
    }

    #[test]
    fn zero_denominators_flag_instead_of_failing() {
        let patterns = PatternSet::default_set();
        let empty = patterns.count_units(&[]);
        let p = profile(&empty);
        assert_eq!(p.values(), [0.0; 7]);
        assert_eq!(p.zero_denominators, INDEX_NAMES.map(String::from).to_vec());

        let fragment = parse_bracketed("(FRAG (NP (NN Nice)))").unwrap();
        let c = patterns.count_units(&fragment);
        assert_eq!((c.words, c.clauses, c.t_units), (1, 0, 0));
        let p = profile(&c);
        assert_eq!(p.mlt, 0.0);
        assert!(p.zero_denominators.contains(&"MLT".to_string()));
    }

    #[test]
    fn default_pattern_file_is_pinned() {
        let set = PatternSet::default_set();
        assert_eq!(set.entries().count(), 9);
        assert_eq!(
            set.checksum(),
            "029339a0fd688af787080f7a1019eaf74ce6787de66e2db34638c4a1faf184ad",
            "update this pin when data/patterns.txt deliberately changes"
        );
    }

    const MINIMAL: &str = "C: S\nT: S > ROOT\nDC: SBAR\nCT: S << SBAR\nCP: NP < CC\nCN: NP < JJ\nVP: VP > S\n";

    #[test]
    fn pattern_file_requires_every_unit() {
        assert!(PatternSet::parse(MINIMAL).is_ok());
        let missing_vp = MINIMAL.lines().take(6).collect::<Vec<_>>().join("\n");
        let err = PatternSet::parse(&missing_vp).unwrap_err().to_string();
        assert!(err.contains("VP"), "got: {err}");
    }

    #[test]
    fn pattern_file_rejects_unknown_names_and_bad_lines() {
        let err = PatternSet::parse(&format!("X: NP\n{MINIMAL}")).unwrap_err().to_string();
        assert!(err.contains("line 1") && err.contains("unknown unit name"), "got: {err}");
        let err = PatternSet::parse(&format!("{MINIMAL}C NP\n")).unwrap_err().to_string();
        assert!(err.contains("line 8") && err.contains("':'"), "got: {err}");
        let err = PatternSet::parse(&format!("{MINIMAL}C: NP <\n")).unwrap_err().to_string();
        assert!(err.contains("line 8"), "got: {err}");
    }

    #[test]
    fn repeated_names_sum_their_counts() {
        let doubled = format!("{MINIMAL}VP: VP > S\n");
        let set = PatternSet::parse(&doubled).unwrap();
        let trees = parse_bracketed(SUITE[0].0).unwrap();
        assert_eq!(set.count_units(&trees).verb_phrases, 2);
    }

    #[test]
    fn pattern_file_errors_carry_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pat.txt");
        std::fs::write(&path, "C: NP <\n").unwrap();
        let err = PatternSet::from_file(&path).unwrap_err().to_string();
        assert!(err.contains("pat.txt"), "got: {err}");
    }

    fn two_doc_corpus() -> (Corpus, TreeBank) {
        let corpus = Corpus::new(
            "mini",
            vec![Document::new("a", "The dog barked."), Document::new("b", "More text.")],
        )
        .unwrap();
        let mut bank = TreeBank::new();
        bank.insert("a", parse_bracketed(SUITE[0].0).unwrap()).unwrap();
        let mut b_trees = parse_bracketed(SUITE[2].0).unwrap();
        b_trees.extend(parse_bracketed(SUITE[7].0).unwrap());
        bank.insert("b", b_trees).unwrap();
        (corpus, bank)
    }

    #[test]
    fn mean_of_texts_and_pooled_aggregate_differently() {
        let (corpus, bank) = two_doc_corpus();
        let patterns = PatternSet::default_set();
        // doc a: 3 words / 1 T-unit; doc b: 13 words / 2 T-units.
        let mean = profile_corpus(&corpus, &bank, patterns, Aggregation::MeanOfTexts).unwrap();
        assert!((mean.indices.mlt - (3.0 + 6.5) / 2.0).abs() < 1e-12);
        let pooled = profile_corpus(&corpus, &bank, patterns, Aggregation::Pooled).unwrap();
        assert!((pooled.indices.mlt - 16.0 / 3.0).abs() < 1e-12);
        assert_eq!(mean.documents, 2);
        assert_eq!(mean.words, 16);
        assert_eq!(mean.sentences, 3);
        assert_eq!(mean.per_document.len(), 2);
        assert_eq!(mean.per_document[0].id, "a");
    }

    #[test]
    fn missing_trees_error_names_the_document() {
        let (mut corpus, bank) = two_doc_corpus();
        corpus.documents.push(Document::new("c", "No trees here."));
        let err = profile_corpus(&corpus, &bank, PatternSet::default_set(), Aggregation::MeanOfTexts)
            .unwrap_err()
            .to_string();
        assert!(err.contains("\"c\""), "got: {err}");
    }

    #[test]
    fn empty_corpus_cannot_be_profiled() {
        let corpus = Corpus::new("empty", vec![]).unwrap();
        let bank = TreeBank::new();
        assert!(profile_corpus(&corpus, &bank, PatternSet::default_set(), Aggregation::MeanOfTexts).is_err());
    }

    #[test]
    fn renderers_emit_header_values_and_footer() {
        let (corpus, bank) = two_doc_corpus();
        let patterns = PatternSet::default_set();
        let row = profile_corpus(&corpus, &bank, patterns, Aggregation::MeanOfTexts).unwrap();
        let csv = profiles_csv(&[row.clone()]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "source,documents,sentences,words,MLT,MLC,C/T,DC/C,CT/T,CP/T,CN/T"
        );
        let data = lines.next().unwrap();
        assert!(data.starts_with("mini,2,3,16,4.750,"), "got: {data}");

        let table = profiles_table(&[row], patterns.checksum());
        assert!(table.contains("MLT"));
        assert!(table.contains("4.750"));
        assert!(table.contains("aggregation: mean of texts"));
        assert!(table.contains(patterns.checksum()));
    }
}
