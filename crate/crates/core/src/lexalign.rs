//! Lexical alignment: tokenization, vocabulary distributions, divergence.
//!
//! A corpus is reduced to a vocabulary probability distribution
//! ([`FrequencyDistribution`]) and corpora are compared with Jensen–Shannon
//! divergence ([`jsd`]), the symmetrised, bounded relative entropy
//!
//! ```text
//! JSD(P ‖ Q) = ½·KL(P ‖ M) + ½·KL(Q ‖ M),   M = (P + Q) / 2
//! ```
//!
//! computed over the union vocabulary with **no smoothing**: tokens absent
//! from one side simply contribute through the mixture. With natural
//! logarithms (the default) values fall in `[0, ln 2 ≈ 0.6931]`; with base-2
//! logarithms in `[0, 1]`. Every report states which base was used.
//!
//! Tokenization is deliberately plain and fully specified here: lowercase
//! the text, split on any character that is neither a letter, a digit, nor
//! an apostrophe, then strip leading/trailing apostrophes from each piece.
//! Contractions such as `i'm` therefore survive as single tokens.
//!
//! The optional stopword filter uses a fixed list shipped with the crate
//! (see [`stopwords`]); its SHA-256 is exposed so results can be tied to the
//! exact list in use.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Logarithm base for divergence computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum LogBase {
    /// Natural logarithm; JSD is bounded by `ln 2`.
    #[default]
    Natural,
    /// Base-2 logarithm; JSD is bounded by 1 (bits).
    Base2,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Base2 => x.log2(),
        }
    }

    /// The least upper bound of JSD under this base.
    pub fn divergence_ceiling(self) -> f64 {
        match self {
            LogBase::Natural => std::f64::consts::LN_2,
            LogBase::Base2 => 1.0,
        }
    }

    /// Human-readable name used in report footers.
    pub fn label(self) -> &'static str {
        match self {
            LogBase::Natural => "natural",
            LogBase::Base2 => "base 2",
        }
    }
}

/// Splits text into lowercase word tokens.
///
/// Rules, in order: lowercase the input; split on every character that is
/// not a letter, digit, or apostrophe; strip leading and trailing
/// apostrophes from each piece; drop pieces that end up empty.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let flush = |current: &mut String, tokens: &mut Vec<String>| {
        let trimmed = current.trim_matches('\'');
        if !trimmed.is_empty() {
            tokens.push(trimmed.to_string());
        }
        current.clear();
    };
    for c in text.chars() {
        if c.is_alphanumeric() || c == '\'' {
            current.extend(c.to_lowercase());
        } else {
            flush(&mut current, &mut tokens);
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}

/// The fixed stopword list and its checksum.
pub mod stopwords {
    use std::collections::HashSet;
    use std::sync::OnceLock;

    /// Raw bytes of the shipped list (comment lines start with `#`).
    pub const RAW: &str = include_str!("../data/stopwords.txt");

    fn set() -> &'static HashSet<&'static str> {
        static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
        SET.get_or_init(|| {
            RAW.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .collect()
        })
    }

    /// Whether `token` (already lowercased by the tokenizer) is a stopword.
    pub fn contains(token: &str) -> bool {
        set().contains(token)
    }

    /// Number of entries in the list.
    pub fn len() -> usize {
        set().len()
    }

    /// Lowercase hex SHA-256 of the shipped list file, recorded in reports.
    pub fn checksum() -> String {
        crate::lexalign::sha256_hex(RAW.as_bytes())
    }
}

/// Lowercase hex SHA-256 of a byte slice; used to fingerprint shipped data
/// files in reports.
pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

/// Counts tokens across a whole corpus, optionally dropping stopwords.
pub fn count_tokens(corpus: &Corpus, remove_stopwords: bool) -> BTreeMap<String, u64> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for doc in &corpus.documents {
        for token in tokenize(&doc.text) {
            if remove_stopwords && stopwords::contains(&token) {
                continue;
            }
            *counts.entry(token).or_insert(0) += 1;
        }
    }
    counts
}

/// A vocabulary probability distribution: token → probability, plus the
/// token total it was estimated from. Probabilities are maximum-likelihood
/// (count / total) with no smoothing, so they are strictly positive and sum
/// to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyDistribution {
    probs: BTreeMap<String, f64>,
    total_tokens: u64,
}

impl FrequencyDistribution {
    /// Builds a distribution from raw counts. Zero-count entries are
    /// dropped; an empty or all-zero count map is an error.
    pub fn from_counts(counts: &BTreeMap<String, u64>) -> Result<FrequencyDistribution> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::invalid("cannot build a distribution from zero tokens"));
        }
        let probs = counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(t, &c)| (t.clone(), c as f64 / total as f64))
            .collect();
        Ok(FrequencyDistribution {
            probs,
            total_tokens: total,
        })
    }

    /// Probability of `token`; zero when outside the support.
    pub fn prob(&self, token: &str) -> f64 {
        self.probs.get(token).copied().unwrap_or(0.0)
    }

    /// Number of distinct tokens in the support.
    pub fn vocabulary_size(&self) -> usize {
        self.probs.len()
    }

    /// Total token count the distribution was estimated from.
    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// Iterates `(token, probability)` in lexicographic token order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.probs.iter().map(|(t, &p)| (t.as_str(), p))
    }

    /// The equal-weight mixture `(self + other) / 2` over the union
    /// vocabulary; its support covers both inputs by construction.
    pub fn mixture(&self, other: &FrequencyDistribution) -> FrequencyDistribution {
        let mut probs: BTreeMap<String, f64> = BTreeMap::new();
        for (token, p) in self.iter() {
            probs.insert(token.to_string(), 0.5 * p);
        }
        for (token, q) in other.iter() {
            *probs.entry(token.to_string()).or_insert(0.0) += 0.5 * q;
        }
        FrequencyDistribution {
            probs,
            total_tokens: self.total_tokens + other.total_tokens,
        }
    }
}

/// Tokenizes a corpus and estimates its vocabulary distribution.
///
/// Errors if the corpus yields no tokens at all (after stopword removal,
/// when enabled).
pub fn build_distribution(corpus: &Corpus, remove_stopwords: bool) -> Result<FrequencyDistribution> {
    let counts = count_tokens(corpus, remove_stopwords);
    FrequencyDistribution::from_counts(&counts).map_err(|_| {
        Error::invalid(format!(
            "corpus {:?} has no tokens{}",
            corpus.name,
            if remove_stopwords { " after stopword removal" } else { "" }
        ))
    })
}

/// Kullback–Leibler divergence `KL(p ‖ m) = Σ p(t)·log(p(t) / m(t))`.
///
/// Requires `support(p) ⊆ support(m)`; a token of `p` missing from `m`
/// makes the divergence infinite and is reported as an error naming the
/// token. `KL(p ‖ p)` is exactly zero.
pub fn kl_divergence(
    p: &FrequencyDistribution,
    m: &FrequencyDistribution,
    base: LogBase,
) -> Result<f64> {
    let mut sum = 0.0;
    for (token, p_t) in p.iter() {
        let m_t = m.prob(token);
        if m_t <= 0.0 {
            return Err(Error::invalid(format!(
                "KL divergence is undefined: token {token:?} has probability 0 in the reference distribution"
            )));
        }
        sum += p_t * base.log(p_t / m_t);
    }
    Ok(sum)
}

/// Jensen–Shannon divergence between two distributions (see module docs).
///
/// Symmetric; zero exactly when the distributions are identical; bounded by
/// [`LogBase::divergence_ceiling`] (attained for disjoint vocabularies).
pub fn jsd(p: &FrequencyDistribution, q: &FrequencyDistribution, base: LogBase) -> Result<f64> {
    let m = p.mixture(q);
    Ok(0.5 * kl_divergence(p, &m, base)? + 0.5 * kl_divergence(q, &m, base)?)
}

/// A row/column-labeled grid of pairwise JSD values, with the provenance
/// needed to reproduce it (log base, stopword handling).
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceMatrix {
    pub row_names: Vec<String>,
    pub col_names: Vec<String>,
    /// `values[r][c]` is the divergence between row corpus `r` and column
    /// corpus `c`.
    pub values: Vec<Vec<f64>>,
    pub log_base: LogBase,
    pub stopwords_removed: bool,
}

impl DivergenceMatrix {
    /// CSV rendering: header `subset,<col>,…`, one row per subset, values
    /// with four decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("subset");
        for col in &self.col_names {
            let _ = write!(out, ",{col}");
        }
        out.push('\n');
        for (row, values) in self.row_names.iter().zip(&self.values) {
            let _ = write!(out, "{row}");
            for v in values {
                let _ = write!(out, ",{v:.4}");
            }
            out.push('\n');
        }
        out
    }

    /// Aligned-text rendering with a provenance footer.
    pub fn to_text(&self) -> String {
        let name_width = self
            .row_names
            .iter()
            .map(|n| n.len())
            .chain(["subset".len()])
            .max()
            .unwrap_or(6);
        let col_width = self.col_names.iter().map(|n| n.len()).chain([6]).max().unwrap_or(6) + 2;
        let mut out = format!("{:<name_width$}", "subset");
        for col in &self.col_names {
            let _ = write!(out, "{col:>col_width$}");
        }
        out.push('\n');
        for (row, values) in self.row_names.iter().zip(&self.values) {
            let _ = write!(out, "{row:<name_width$}");
            for v in values {
                let _ = write!(out, "{:>col_width$}", format!("{v:.4}"));
            }
            out.push('\n');
        }
        let _ = write!(
            out,
            "\nlog base: {}; stopwords: {}; stopword list sha256: {}\n",
            self.log_base.label(),
            if self.stopwords_removed { "removed" } else { "kept" },
            stopwords::checksum(),
        );
        out
    }
}

/// Computes the JSD between every subset (rows) and every target (columns).
pub fn divergence_matrix(
    subsets: &[Corpus],
    targets: &[Corpus],
    remove_stopwords: bool,
    base: LogBase,
) -> Result<DivergenceMatrix> {
    let subset_dists: Vec<FrequencyDistribution> = subsets
        .iter()
        .map(|c| build_distribution(c, remove_stopwords))
        .collect::<Result<_>>()?;
    let target_dists: Vec<FrequencyDistribution> = targets
        .iter()
        .map(|c| build_distribution(c, remove_stopwords))
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(subsets.len());
    for p in &subset_dists {
        let mut row = Vec::with_capacity(targets.len());
        for q in &target_dists {
            row.push(jsd(p, q, base)?);
        }
        values.push(row);
    }
    Ok(DivergenceMatrix {
        row_names: subsets.iter().map(|c| c.name.clone()).collect(),
        col_names: targets.iter().map(|c| c.name.clone()).collect(),
        values,
        log_base: base,
        stopwords_removed: remove_stopwords,
    })
}

/// The `k` most frequent tokens with their counts, most frequent first;
/// count ties break lexicographically. Asking for more tokens than the
/// vocabulary holds returns the whole vocabulary.
pub fn top_k_tokens(corpus: &Corpus, k: usize, remove_stopwords: bool) -> Vec<(String, u64)> {
    let counts = count_tokens(corpus, remove_stopwords);
    let mut entries: Vec<(String, u64)> = counts.into_iter().collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    entries.truncate(k);
    entries
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Document;

    fn corpus_of(texts: &[&str]) -> Corpus {
        let docs = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Document::new(format!("d{i}"), *t))
            .collect();
        Corpus::new("test", docs).unwrap()
    }

    fn dist(counts: &[(&str, u64)]) -> FrequencyDistribution {
        let map: BTreeMap<String, u64> = counts.iter().map(|(t, c)| (t.to_string(), *c)).collect();
        FrequencyDistribution::from_counts(&map).unwrap()
    }

    // ── Tokenizer ──────────────────────────────────────────────────────

    #[test]
    fn tokenize_keeps_internal_apostrophes() {
        assert_eq!(tokenize("The dog's day."), vec!["the", "dog's", "day"]);
    }

    #[test]
    fn tokenize_lowercases_and_splits_on_punctuation() {
        assert_eq!(
            tokenize("I'm happy, I'm HAPPY"),
            vec!["i'm", "happy", "i'm", "happy"]
        );
    }

    #[test]
    fn tokenize_strips_edge_apostrophes() {
        assert_eq!(tokenize("'tis the dogs' day"), vec!["tis", "the", "dogs", "day"]);
        assert_eq!(tokenize("'' ' '''"), Vec::<String>::new());
    }

    #[test]
    fn tokenize_keeps_digits_and_unicode_letters() {
        assert_eq!(tokenize("room 42 café!"), vec!["room", "42", "café"]);
        assert_eq!(tokenize(""), Vec::<String>::new());
    }

    // ── Distributions ──────────────────────────────────────────────────

    #[test]
    fn distribution_probabilities_sum_to_one() {
        let d = dist(&[("a", 3), ("b", 1), ("c", 6)]);
        let sum: f64 = d.iter().map(|(_, p)| p).sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert_eq!(d.total_tokens(), 10);
        assert_eq!(d.vocabulary_size(), 3);
        assert_eq!(d.prob("a"), 0.3);
        assert_eq!(d.prob("missing"), 0.0);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let corpus = corpus_of(&["", "..."]);
        assert!(build_distribution(&corpus, false).is_err());
    }

    #[test]
    fn all_stopword_corpus_is_an_error_only_when_filtering() {
        let corpus = corpus_of(&["the a of and"]);
        assert!(build_distribution(&corpus, false).is_ok());
        assert!(build_distribution(&corpus, true).is_err());
    }

    // ── KL and JSD fixed values ────────────────────────────────────────
    //
    // Expected numbers below were worked by hand from the definition:
    // KL({a:1} ‖ {a:3/4, b:1/4})          = ln(4/3)
    // KL({a:1/2, b:1/2} ‖ {a:3/4, b:1/4}) = ½·ln(2/3) + ½·ln 2
    // JSD({a:1}, {a:1/2, b:1/2})          = average of the two above

    const KL_POINT_VS_MIX: f64 = 0.287_682_072_451_780_9;
    const KL_HALF_VS_MIX: f64 = 0.143_841_036_225_890_4;
    const JSD_POINT_VS_HALF: f64 = 0.215_761_554_338_835_6;

    #[test]
    fn kl_matches_hand_computed_values() {
        let p = dist(&[("a", 1)]);
        let q = dist(&[("a", 1), ("b", 1)]);
        let m = dist(&[("a", 3), ("b", 1)]);
        assert!((kl_divergence(&p, &m, LogBase::Natural).unwrap() - KL_POINT_VS_MIX).abs() < 1e-12);
        assert!((kl_divergence(&q, &m, LogBase::Natural).unwrap() - KL_HALF_VS_MIX).abs() < 1e-12);
    }

    #[test]
    fn kl_rejects_support_violations() {
        let p = dist(&[("a", 1), ("b", 1)]);
        let m = dist(&[("a", 1)]);
        let err = kl_divergence(&p, &m, LogBase::Natural).unwrap_err().to_string();
        assert!(err.contains("\"b\""), "unexpected error: {err}");
    }

    #[test]
    fn jsd_matches_hand_computed_value() {
        let p = dist(&[("a", 1)]);
        let q = dist(&[("a", 1), ("b", 1)]);
        assert!((jsd(&p, &q, LogBase::Natural).unwrap() - JSD_POINT_VS_HALF).abs() < 1e-12);
    }

    #[test]
    fn jsd_of_identical_distributions_is_exactly_zero() {
        let p = dist(&[("a", 2), ("b", 3), ("c", 5)]);
        assert_eq!(jsd(&p, &p, LogBase::Natural).unwrap(), 0.0);
    }

    #[test]
    fn jsd_of_disjoint_vocabularies_hits_the_ceiling() {
        let p = dist(&[("a", 1), ("b", 2)]);
        let q = dist(&[("c", 5), ("d", 1)]);
        let natural = jsd(&p, &q, LogBase::Natural).unwrap();
        assert!((natural - std::f64::consts::LN_2).abs() < 1e-12);
        let bits = jsd(&p, &q, LogBase::Base2).unwrap();
        assert!((bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jsd_is_symmetric() {
        let p = dist(&[("a", 3), ("b", 1), ("c", 9)]);
        let q = dist(&[("b", 4), ("c", 1), ("d", 2)]);
        let pq = jsd(&p, &q, LogBase::Natural).unwrap();
        let qp = jsd(&q, &p, LogBase::Natural).unwrap();
        assert!((pq - qp).abs() < 1e-15);
        assert!(pq > 0.0);
    }

    #[test]
    fn base2_jsd_is_natural_over_ln2() {
        let p = dist(&[("a", 3), ("b", 1)]);
        let q = dist(&[("a", 1), ("b", 1), ("c", 2)]);
        let nat = jsd(&p, &q, LogBase::Natural).unwrap();
        let bits = jsd(&p, &q, LogBase::Base2).unwrap();
        assert!((bits - nat / std::f64::consts::LN_2).abs() < 1e-12);
    }

    // ── Top-k ──────────────────────────────────────────────────────────

    #[test]
    fn top_k_orders_by_count_then_token() {
        let corpus = corpus_of(&["b b a a a"]);
        assert_eq!(
            top_k_tokens(&corpus, 2, false),
            vec![("a".to_string(), 3), ("b".to_string(), 2)]
        );
        let tied = corpus_of(&["cat ant cat ant"]);
        assert_eq!(
            top_k_tokens(&tied, 2, false),
            vec![("ant".to_string(), 2), ("cat".to_string(), 2)]
        );
    }

    #[test]
    fn top_k_larger_than_vocabulary_returns_everything() {
        let corpus = corpus_of(&["x y z"]);
        assert_eq!(top_k_tokens(&corpus, 50, false).len(), 3);
    }

    #[test]
    fn top_k_can_drop_stopwords() {
        let corpus = corpus_of(&["the dog the dog wins"]);
        let with = top_k_tokens(&corpus, 1, false);
        let without = top_k_tokens(&corpus, 1, true);
        assert_eq!(with[0], ("dog".to_string(), 2));
        assert_eq!(without[0], ("dog".to_string(), 2));
        assert!(top_k_tokens(&corpus, 10, true)
            .iter()
            .all(|(t, _)| t != "the"));
    }

    // ── Stopword list ──────────────────────────────────────────────────

    #[test]
    fn stopword_list_contains_expected_entries() {
        for token in ["the", "i'm", "don't", "very", "should've"] {
            assert!(stopwords::contains(token), "{token} should be a stopword");
        }
        for token in ["like", "would", "people", "however", "dog"] {
            assert!(!stopwords::contains(token), "{token} should not be a stopword");
        }
    }

    /// The list is part of the reproducibility contract; deliberate edits
    /// must update this pin (and invalidate previously recorded reports).
    #[test]
    fn stopword_list_is_pinned() {
        assert_eq!(stopwords::len(), 204);
        assert_eq!(stopwords::checksum().len(), 64);
        assert_eq!(
            stopwords::checksum(),
            "a27f6bb3c0c59ac6eecdaeedc0d11edc2f93f79d50e010e8e3e7968c3288516a"
        );
    }

    // ── Matrix rendering ───────────────────────────────────────────────

    #[test]
    fn divergence_matrix_layout() {
        let subsets = vec![
            {
                let mut c = corpus_of(&["alpha beta beta"]);
                c.name = "A1".into();
                c
            },
            {
                let mut c = corpus_of(&["gamma gamma beta"]);
                c.name = "A2".into();
                c
            },
        ];
        let targets = vec![{
            let mut c = corpus_of(&["alpha beta gamma"]);
            c.name = "target".into();
            c
        }];
        let matrix = divergence_matrix(&subsets, &targets, false, LogBase::Natural).unwrap();
        assert_eq!(matrix.values.len(), 2);
        assert_eq!(matrix.values[0].len(), 1);
        let csv = matrix.to_csv();
        assert!(csv.starts_with("subset,target\n"));
        assert!(csv.lines().nth(1).unwrap().starts_with("A1,0."));
        let text = matrix.to_text();
        assert!(text.contains("log base: natural"));
        assert!(text.contains("stopwords: kept"));
    }
}
