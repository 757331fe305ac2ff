//! Scoring metrics: error and agreement statistics between gold scores and
//! predictions, plus score-scale conversion helpers.
//!
//! Four statistics are computed, reported in the fixed order RMSE, QWK,
//! Spearman, Pearson:
//!
//! * **RMSE** — root mean squared error, in raw score units.
//! * **QWK** — quadratic weighted kappa. Both sides are first snapped onto
//!   the scale's grid (nearest valid value, midpoints rounding away from
//!   zero, out-of-range values clamped); kappa is then computed over the
//!   scale's categories with weights `(i−j)²/(N−1)²`.
//! * **Spearman** — Pearson correlation of average ranks (ties share the
//!   mean rank of their block).
//! * **Pearson** — plain product-moment correlation on the raw values.
//!
//! Degenerate inputs (constant sequences for the correlations, fewer than
//! two distinct categories for kappa) produce an error stating why rather
//! than NaN; [`evaluate`] converts those errors into `None` entries with an
//! explanatory note so batch runs keep going.
//!
//! [`FceScoreTable`] converts two-part `band.mark` exam scores onto a
//! single 0–20 points scale via a CSV lookup table; the default table
//! ships with the crate.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::ScoreScale;
use crate::error::{Error, Result};
use crate::lexalign::sha256_hex;

fn validate_pairs(golds: &[f64], preds: &[f64]) -> Result<()> {
    if golds.len() != preds.len() {
        return Err(Error::invalid(format!(
            "gold and predicted score counts differ: {} vs {}",
            golds.len(),
            preds.len()
        )));
    }
    if golds.is_empty() {
        return Err(Error::invalid("no score pairs to evaluate"));
    }
    for (i, v) in golds.iter().chain(preds.iter()).enumerate() {
        if !v.is_finite() {
            let (side, at) = if i < golds.len() {
                ("gold", i)
            } else {
                ("predicted", i - golds.len())
            };
            return Err(Error::invalid(format!(
                "{side} score at index {at} is not finite"
            )));
        }
    }
    Ok(())
}

/// Root mean squared error.
pub fn rmse(golds: &[f64], preds: &[f64]) -> Result<f64> {
    validate_pairs(golds, preds)?;
    let sum_sq: f64 = golds
        .iter()
        .zip(preds)
        .map(|(g, p)| (g - p) * (g - p))
        .sum();
    Ok((sum_sq / golds.len() as f64).sqrt())
}

/// Pearson product-moment correlation. Errors if either side has zero
/// variance.
pub fn pearson(golds: &[f64], preds: &[f64]) -> Result<f64> {
    validate_pairs(golds, preds)?;
    pearson_validated(golds, preds, "gold", "predicted")
}

fn pearson_validated(xs: &[f64], ys: &[f64], x_name: &str, y_name: &str) -> Result<f64> {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 {
        return Err(Error::Degenerate(format!(
            "correlation needs variation, but all {x_name} scores are equal"
        )));
    }
    if var_y == 0.0 {
        return Err(Error::Degenerate(format!(
            "correlation needs variation, but all {y_name} scores are equal"
        )));
    }
    Ok(cov / (var_x.sqrt() * var_y.sqrt()))
}

/// Average ranks (1-based); tied values share the mean rank of their block.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite scores"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) hold equal values; 1-based ranks i+1..=j+1
        let mean_rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation: Pearson over average ranks. Errors if either
/// side is constant (its ranks carry no order information).
pub fn spearman(golds: &[f64], preds: &[f64]) -> Result<f64> {
    validate_pairs(golds, preds)?;
    let gold_ranks = average_ranks(golds);
    let pred_ranks = average_ranks(preds);
    pearson_validated(&gold_ranks, &pred_ranks, "gold", "predicted").map_err(|_| {
        let side = if gold_ranks.iter().all(|&r| r == gold_ranks[0]) {
            "gold"
        } else {
            "predicted"
        };
        Error::Degenerate(format!(
            "rank correlation needs variation, but all {side} scores are equal"
        ))
    })
}

/// Quadratic weighted kappa over the categories of `scale`.
///
/// Gold and predicted scores are snapped onto the scale grid first (QWK is
/// the only metric that snaps). Errors if, after snapping, gold and
/// predictions together cover fewer than two distinct categories.
pub fn qwk(golds: &[f64], preds: &[f64], scale: &ScoreScale) -> Result<f64> {
    validate_pairs(golds, preds)?;
    let n_cat = scale.categories();
    let gold_cats: Vec<usize> = golds.iter().map(|&v| scale.category_index(v)).collect();
    let pred_cats: Vec<usize> = preds.iter().map(|&v| scale.category_index(v)).collect();
    let mut seen = vec![false; n_cat];
    for &c in gold_cats.iter().chain(pred_cats.iter()) {
        seen[c] = true;
    }
    if seen.iter().filter(|&&s| s).count() < 2 {
        return Err(Error::Degenerate(
            "quadratic weighted kappa needs at least two distinct score categories".to_string(),
        ));
    }
    let mut observed = vec![vec![0.0f64; n_cat]; n_cat];
    let mut gold_marginal = vec![0.0f64; n_cat];
    let mut pred_marginal = vec![0.0f64; n_cat];
    for (&g, &p) in gold_cats.iter().zip(&pred_cats) {
        observed[g][p] += 1.0;
        gold_marginal[g] += 1.0;
        pred_marginal[p] += 1.0;
    }
    let total = golds.len() as f64;
    let denom = ((n_cat - 1) * (n_cat - 1)) as f64;
    let mut weighted_observed = 0.0;
    let mut weighted_expected = 0.0;
    for i in 0..n_cat {
        for j in 0..n_cat {
            let weight = ((i as f64 - j as f64) * (i as f64 - j as f64)) / denom;
            weighted_observed += weight * observed[i][j];
            weighted_expected += weight * gold_marginal[i] * pred_marginal[j] / total;
        }
    }
    if weighted_expected == 0.0 {
        return Err(Error::Degenerate(
            "quadratic weighted kappa needs at least two distinct score categories".to_string(),
        ));
    }
    Ok(1.0 - weighted_observed / weighted_expected)
}

/// The four statistics for one gold/prediction set, in report order
/// RMSE, QWK, Spearman, Pearson. Statistics that could not be computed are
/// `None`, with the reason recorded in `notes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub rmse: f64,
    pub qwk: Option<f64>,
    pub spearman: Option<f64>,
    pub pearson: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Column headers for the four statistics, in report order.
pub const METRIC_HEADERS: [&str; 4] = ["RMSE", "QWK", "Sp.", "Pe."];

impl MetricReport {
    /// Values in [`METRIC_HEADERS`] order (RMSE is always present).
    pub fn values(&self) -> [Option<f64>; 4] {
        [Some(self.rmse), self.qwk, self.spearman, self.pearson]
    }

    /// Fixed-precision cells in header order; `n/a` for missing statistics.
    pub fn formatted(&self) -> [String; 4] {
        self.values()
            .map(|v| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.3}")))
    }
}

/// Computes every statistic that is defined for the input, collecting the
/// reasons for any that are not. QWK needs a scale; without one it is
/// `None` with a note. A hard error is returned only for structurally
/// invalid input (length mismatch, empty, non-finite values).
pub fn evaluate(golds: &[f64], preds: &[f64], scale: Option<&ScoreScale>) -> Result<MetricReport> {
    validate_pairs(golds, preds)?;
    let mut notes = Vec::new();
    let rmse_value = rmse(golds, preds)?;
    let qwk_value = match scale {
        None => {
            notes.push("QWK skipped: no score scale declared".to_string());
            None
        }
        Some(scale) => match qwk(golds, preds, scale) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(format!("QWK skipped: {e}"));
                None
            }
        },
    };
    let spearman_value = match spearman(golds, preds) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("Spearman skipped: {e}"));
            None
        }
    };
    let pearson_value = match pearson(golds, preds) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("Pearson skipped: {e}"));
            None
        }
    };
    Ok(MetricReport {
        rmse: rmse_value,
        qwk: qwk_value,
        spearman: spearman_value,
        pearson: pearson_value,
        notes,
    })
}

const DEFAULT_FCE_MAP: &str = include_str!("../data/fce_score_map.csv");

/// Conversion table from two-part `band.mark` scores to a single points
/// scale. The raw score `4.2` means band 4, mark 2; each `(band, mark)`
/// pair maps to one points value.
#[derive(Debug, Clone)]
pub struct FceScoreTable {
    map: BTreeMap<(u32, u32), f64>,
    checksum: String,
}

impl FceScoreTable {
    /// Parses a `band,mark,score` CSV. Rows must be sorted ascending by
    /// `(band, mark)` with strictly increasing scores, and pairs must be
    /// unique.
    pub fn parse(text: &str) -> Result<FceScoreTable> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::invalid(format!("score map: {e}")))?
            .clone();
        let expect = ["band", "mark", "score"];
        let got: Vec<&str> = headers.iter().map(str::trim).collect();
        if got != expect {
            return Err(Error::invalid(format!(
                "score map header must be \"band,mark,score\", found {:?}",
                got.join(",")
            )));
        }
        let mut map = BTreeMap::new();
        let mut previous: Option<((u32, u32), f64)> = None;
        for (i, row) in reader.records().enumerate() {
            let line = i + 2; // 1-based, after the header
            let row = row.map_err(|e| Error::invalid(format!("score map line {line}: {e}")))?;
            if row.len() != 3 {
                return Err(Error::invalid(format!(
                    "score map line {line}: expected 3 fields, found {}",
                    row.len()
                )));
            }
            let band: u32 = row[0]
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("score map line {line}: bad band {:?}", &row[0])))?;
            let mark: u32 = row[1]
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("score map line {line}: bad mark {:?}", &row[1])))?;
            let score: f64 = row[2]
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("score map line {line}: bad score {:?}", &row[2])))?;
            if !score.is_finite() {
                return Err(Error::invalid(format!(
                    "score map line {line}: score must be finite"
                )));
            }
            if mark >= 10 {
                return Err(Error::invalid(format!(
                    "score map line {line}: mark must be a single digit, found {mark}"
                )));
            }
            if let Some(((prev_band, prev_mark), prev_score)) = previous {
                if (band, mark) <= (prev_band, prev_mark) {
                    return Err(Error::invalid(format!(
                        "score map line {line}: (band, mark) pairs must be strictly ascending"
                    )));
                }
                if score <= prev_score {
                    return Err(Error::invalid(format!(
                        "score map line {line}: scores must be strictly increasing"
                    )));
                }
            }
            previous = Some(((band, mark), score));
            map.insert((band, mark), score);
        }
        if map.is_empty() {
            return Err(Error::invalid("score map has no rows"));
        }
        Ok(FceScoreTable {
            map,
            checksum: sha256_hex(text.as_bytes()),
        })
    }

    /// Loads a table from disk.
    pub fn from_file(path: &Path) -> Result<FceScoreTable> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        FceScoreTable::parse(&text)
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
    }

    /// The table shipped with the crate: `(0,0)` then bands 1–5 with marks
    /// 0–3, mapped onto 0–20.
    pub fn default_table() -> &'static FceScoreTable {
        static TABLE: OnceLock<FceScoreTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            FceScoreTable::parse(DEFAULT_FCE_MAP).expect("bundled score map is valid")
        })
    }

    /// SHA-256 of the CSV text this table was built from.
    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    /// Converts a raw `band.mark` value (for example `4.2`) to its points
    /// score. The raw value must be non-negative, carry at most one
    /// fractional digit, and its `(band, mark)` pair must be in the table.
    pub fn convert(&self, raw: f64) -> Result<f64> {
        if !raw.is_finite() || raw < 0.0 {
            return Err(Error::invalid(format!(
                "raw score {raw} is not a valid band.mark value"
            )));
        }
        let tenths = (raw * 10.0).round();
        if (raw * 10.0 - tenths).abs() > 1e-6 {
            return Err(Error::invalid(format!(
                "raw score {raw} is not in band.mark form (one fractional digit)"
            )));
        }
        let tenths = tenths as u32;
        let band = tenths / 10;
        let mark = tenths % 10;
        self.map.get(&(band, mark)).copied().ok_or_else(|| {
            Error::invalid(format!(
                "no conversion for band {band} mark {mark} (raw score {raw})"
            ))
        })
    }

    /// `(band, mark, score)` rows in ascending order.
    pub fn rows(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.map.iter().map(|(&(b, m), &s)| (b, m, s))
    }
}
