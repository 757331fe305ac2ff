//! A built-in essay scorer: hand-crafted lexical and syntactic features
//! feeding a ridge regression, so the whole evaluation pipeline can run
//! end to end without any external model.
//!
//! The model works on the normalized score scale: callers normalize gold
//! scores to `[0, 1]` before fitting (see
//! [`ScoreScale::normalize`](crate::corpus::ScoreScale::normalize)), and
//! predictions come back clamped to `[0, 1]` ready for
//! [`ScoreScale::denormalize`](crate::corpus::ScoreScale::denormalize).
//!
//! Fitting standardizes each feature column (drops columns that are
//! constant in the training data, recording their names), fixes the
//! intercept at the mean target, and solves the ridge normal equations.
//! Few-shot adaptation refits on the target examples with the penalty
//! centered on the source weights instead of zero, so with few shots the
//! model stays close to the source scorer and with many it approaches a
//! plain target fit.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::lexalign::{stopwords, tokenize};
use crate::synprof::{count_units, profile, ParseTree, PatternSet, TreeBank};

/// Number of features the scorer extracts per document.
pub const FEATURE_COUNT: usize = 11;

/// Feature names, in the order they appear in [`Features::values`]: four
/// lexical statistics followed by the seven syntactic complexity indices.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "token_count",
    "type_token_ratio",
    "mean_word_length",
    "stopword_ratio",
    "MLT",
    "MLC",
    "C/T",
    "DC/C",
    "CT/T",
    "CP/T",
    "CN/T",
];

/// One document's feature vector. When no parse trees are available the
/// seven syntactic entries are zero and `has_trees` is false (a corpus
/// with no trees at all then drops those columns as constants at fit
/// time, degrading gracefully to a lexical-only model).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Features {
    pub values: [f64; FEATURE_COUNT],
    pub has_trees: bool,
}

/// Extracts the feature vector for one text, using `trees` for the
/// syntactic indices when given (an empty tree list counts as absent).
pub fn featurize(text: &str, trees: Option<&[ParseTree]>) -> Features {
    let tokens = tokenize(text);
    let n = tokens.len() as f64;
    let (ttr, mean_len, stop_ratio) = if tokens.is_empty() {
        (0.0, 0.0, 0.0)
    } else {
        let mut distinct: Vec<&str> = tokens.iter().map(String::as_str).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let chars: usize = tokens.iter().map(|t| t.chars().count()).sum();
        let stops = tokens.iter().filter(|t| stopwords::contains(t)).count();
        (
            distinct.len() as f64 / n,
            chars as f64 / n,
            stops as f64 / n,
        )
    };
    let mut values = [0.0; FEATURE_COUNT];
    values[0] = n;
    values[1] = ttr;
    values[2] = mean_len;
    values[3] = stop_ratio;
    let has_trees = matches!(trees, Some(t) if !t.is_empty());
    if let Some(trees) = trees {
        if !trees.is_empty() {
            let indices = profile(&count_units(trees, PatternSet::default_set()));
            values[4..].copy_from_slice(&indices.values());
        }
    }
    Features { values, has_trees }
}

/// [`featurize`] for a corpus document, looking its trees up by id.
pub fn featurize_document(doc: &Document, trees: Option<&TreeBank>) -> Features {
    featurize(&doc.text, trees.and_then(|bank| bank.get(&doc.id)))
}

/// A fitted ridge scorer. The artifact is self-describing: it records
/// which features were kept (by name), the standardization statistics,
/// and the weights, so a saved model scores new documents without the
/// training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    /// Regularization strength used for the most recent (re)fit.
    pub lambda: f64,
    /// Retained features, in weight order.
    pub feature_names: Vec<String>,
    /// Features dropped at fit time for being constant in training data.
    pub dropped: Vec<String>,
    /// Per retained feature: training mean and standard deviation.
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Weights in the standardized feature space.
    pub weights: Vec<f64>,
    /// Fixed at the mean training target.
    pub intercept: f64,
}

fn check_training_input(rows: &[Features], golds: &[f64], lambda: f64) -> Result<()> {
    if rows.len() < 2 {
        return Err(Error::invalid(format!(
            "fitting a scorer needs at least 2 documents, got {}",
            rows.len()
        )));
    }
    if rows.len() != golds.len() {
        return Err(Error::invalid(format!(
            "{} feature rows but {} gold scores",
            rows.len(),
            golds.len()
        )));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::invalid(format!(
            "regularization strength must be a finite non-negative number, got {lambda}"
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("feature row {i} has a non-finite value")));
        }
    }
    if let Some(i) = golds.iter().position(|g| !(0.0..=1.0).contains(g)) {
        return Err(Error::invalid(format!(
            "gold score {i} is {}; scores must be normalized into [0, 1] before fitting",
            golds[i]
        )));
    }
    Ok(())
}

fn solve_ridge(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    a.lu().solve(&b).ok_or_else(|| {
        Error::invalid(
            "ridge normal equations are singular; use a positive regularization strength",
        )
    })
}

impl RidgeModel {
    /// Fits a ridge scorer on feature rows and normalized gold scores.
    pub fn fit(rows: &[Features], golds: &[f64], lambda: f64) -> Result<RidgeModel> {
        check_training_input(rows, golds, lambda)?;
        let n = rows.len();
        let mut feature_names = Vec::new();
        let mut dropped = Vec::new();
        let mut retained = Vec::new();
        for (j, name) in FEATURE_NAMES.iter().enumerate() {
            let first = rows[0].values[j];
            if rows.iter().all(|r| r.values[j] == first) {
                dropped.push(name.to_string());
            } else {
                retained.push(j);
                feature_names.push(name.to_string());
            }
        }
        let d = retained.len();
        let mut means = vec![0.0; d];
        let mut stds = vec![0.0; d];
        for (k, &j) in retained.iter().enumerate() {
            let mean = rows.iter().map(|r| r.values[j]).sum::<f64>() / n as f64;
            let var = rows
                .iter()
                .map(|r| (r.values[j] - mean).powi(2))
                .sum::<f64>()
                / n as f64;
            means[k] = mean;
            stds[k] = var.sqrt();
        }
        let intercept = golds.iter().sum::<f64>() / n as f64;
        let weights = if d == 0 {
            Vec::new()
        } else {
            let z = DMatrix::from_fn(n, d, |i, k| {
                (rows[i].values[retained[k]] - means[k]) / stds[k]
            });
            let r = DVector::from_fn(n, |i, _| golds[i] - intercept);
            let a = z.transpose() * &z + DMatrix::identity(d, d) * lambda;
            let b = z.transpose() * r;
            solve_ridge(a, b)?.iter().copied().collect()
        };
        Ok(RidgeModel {
            lambda,
            feature_names,
            dropped,
            means,
            stds,
            weights,
            intercept,
        })
    }

    /// Refits on a few scored target examples, penalizing deviation from
    /// this model's weights instead of from zero. The feature space,
    /// standardization, and dropped-column set stay those of the source
    /// fit; the intercept moves to the target mean. Large `lambda` keeps
    /// the source weights (only rescaling the score distribution), small
    /// `lambda` approaches a plain fit on the shots.
    pub fn adapt(&self, shots: &[Features], golds: &[f64], lambda: f64) -> Result<RidgeModel> {
        check_training_input(shots, golds, lambda)?;
        let n = shots.len();
        let d = self.weights.len();
        let retained = self.retained_indices();
        let intercept = golds.iter().sum::<f64>() / n as f64;
        let weights = if d == 0 {
            Vec::new()
        } else {
            let z = DMatrix::from_fn(n, d, |i, k| {
                (shots[i].values[retained[k]] - self.means[k]) / self.stds[k]
            });
            let r = DVector::from_fn(n, |i, _| golds[i] - intercept);
            let w_src = DVector::from_fn(d, |k, _| self.weights[k]);
            let a = z.transpose() * &z + DMatrix::identity(d, d) * lambda;
            let b = z.transpose() * r + w_src * lambda;
            solve_ridge(a, b)?.iter().copied().collect()
        };
        Ok(RidgeModel {
            lambda,
            feature_names: self.feature_names.clone(),
            dropped: self.dropped.clone(),
            means: self.means.clone(),
            stds: self.stds.clone(),
            weights,
            intercept,
        })
    }

    /// Predicted normalized score for one feature row, clamped to `[0, 1]`.
    pub fn predict(&self, row: &Features) -> f64 {
        let retained = self.retained_indices();
        let mut score = self.intercept;
        for (k, &j) in retained.iter().enumerate() {
            score += self.weights[k] * (row.values[j] - self.means[k]) / self.stds[k];
        }
        score.clamp(0.0, 1.0)
    }

    /// [`RidgeModel::predict`] over a batch.
    pub fn predict_batch(&self, rows: &[Features]) -> Vec<f64> {
        rows.iter().map(|r| self.predict(r)).collect()
    }

    fn retained_indices(&self) -> Vec<usize> {
        self.feature_names
            .iter()
            .map(|name| {
                FEATURE_NAMES
                    .iter()
                    .position(|n| n == name)
                    .expect("feature names validated at construction")
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        for name in self.feature_names.iter().chain(&self.dropped) {
            if !FEATURE_NAMES.contains(&name.as_str()) {
                return Err(Error::invalid(format!("unknown feature {name:?} in model")));
            }
        }
        let d = self.feature_names.len();
        if self.means.len() != d || self.stds.len() != d || self.weights.len() != d {
            return Err(Error::invalid(
                "model feature names, means, stds, and weights must all have the same length",
            ));
        }
        if self.stds.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::invalid("model standard deviations must be positive"));
        }
        if !self.intercept.is_finite() || self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("model parameters must be finite"));
        }
        Ok(())
    }

    /// Pretty JSON with a trailing newline; stable byte-for-byte.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<RidgeModel> {
        let model: RidgeModel = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("invalid model file: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<RidgeModel> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RidgeModel::from_json(&text).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
    }
}

// ---------------------------------------------------------------------------
// Prediction files
// ---------------------------------------------------------------------------

/// One scored document from a prediction file. Scores are on the
/// dataset's own scale (not normalized).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub gold: Option<f64>,
    pub pred: f64,
}

/// Reads a prediction CSV with header `id,pred` or `id,gold,pred`.
/// Duplicate ids and unparseable numbers are errors naming the line.
pub fn load_predictions(path: &Path) -> Result<Vec<Prediction>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_predictions(&text).map_err(|e| match e {
        Error::Record { line, message, .. } => Error::record(path, line, message),
        other => Error::invalid(format!("{}: {other}", path.display())),
    })
}

/// Parses prediction CSV text (see [`load_predictions`]).
pub fn parse_predictions(text: &str) -> Result<Vec<Prediction>> {
    let anon = Path::new("predictions");
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::invalid(format!("predictions: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let has_gold = match headers.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["id", "pred"] => false,
        ["id", "gold", "pred"] => true,
        _ => {
            return Err(Error::invalid(format!(
                "predictions header must be id,pred or id,gold,pred, found {:?}",
                headers.join(",")
            )))
        }
    };
    let mut seen = std::collections::HashMap::new();
    let mut predictions = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::record(anon, line, e.to_string()))?;
        if row.len() != headers.len() {
            return Err(Error::record(
                anon,
                line,
                format!("expected {} fields, found {}", headers.len(), row.len()),
            ));
        }
        let id = row[0].trim().to_string();
        if id.is_empty() {
            return Err(Error::record(anon, line, "empty document id"));
        }
        if let Some(first) = seen.insert(id.clone(), line) {
            return Err(Error::record(
                anon,
                line,
                format!("duplicate id {id:?} first seen on line {first}"),
            ));
        }
        let number = |cell: &str, what: &str| -> Result<f64> {
            cell.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::record(anon, line, format!("bad {what} value {:?}", cell.trim())))
        };
        let (gold, pred) = if has_gold {
            let gold = if row[1].trim().is_empty() {
                None
            } else {
                Some(number(&row[1], "gold")?)
            };
            (gold, number(&row[2], "pred")?)
        } else {
            (None, number(&row[1], "pred")?)
        };
        predictions.push(Prediction { id, gold, pred });
    }
    Ok(predictions)
}

/// Renders predictions with the `id,gold,pred` header at full precision;
/// the output re-parses to equal predictions.
pub fn predictions_csv(predictions: &[Prediction]) -> String {
    let mut out = String::from("id,gold,pred\n");
    for p in predictions {
        let gold = p.gold.map(|g| g.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", p.id, gold, p.pred);
    }
    out
}

/// Pairs each prediction with a gold score, preferring the one in the
/// prediction file and falling back to the dataset's document score.
/// Returns `(golds, preds)` in file order.
pub fn paired_scores(
    predictions: &[Prediction],
    corpus: Option<&Corpus>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if predictions.is_empty() {
        return Err(Error::invalid("prediction file has no rows"));
    }
    let mut golds = Vec::with_capacity(predictions.len());
    let mut preds = Vec::with_capacity(predictions.len());
    for p in predictions {
        let gold = match (p.gold, corpus) {
            (Some(g), _) => g,
            (None, Some(corpus)) => {
                let doc = corpus.get(&p.id).ok_or_else(|| {
                    Error::invalid(format!(
                        "predicted document {:?} is not in dataset {:?}",
                        p.id, corpus.name
                    ))
                })?;
                doc.score.ok_or_else(|| {
                    Error::invalid(format!(
                        "document {:?} in dataset {:?} has no gold score",
                        p.id, corpus.name
                    ))
                })?
            }
            (None, None) => {
                return Err(Error::invalid(format!(
                    "prediction for {:?} has no gold score and no dataset was given",
                    p.id
                )))
            }
        };
        golds.push(gold);
        preds.push(p.pred);
    }
    Ok((golds, preds))
}
