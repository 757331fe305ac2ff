//! Experiment bookkeeping: dataset splits, few-shot sampling, run records,
//! and the transfer-advantage ledger.
//!
//! The evaluation protocol distinguishes two run conditions:
//!
//! * **in-domain** — a model trained and evaluated on the same dataset's
//!   own splits;
//! * **transfer** — a model trained on a source dataset, given `n` scored
//!   examples from the target's training split ("n-shot"), and evaluated
//!   on the target's test split.
//!
//! For a transfer run, its *change* is `transfer − in-domain` per metric,
//! where the in-domain reference is the same model's in-domain run on the
//! transfer's **target** dataset (that is the scale the transfer metrics
//! live on). For an (adapted, base) model pair, the *adaptation advantage*
//! is `adapted_change − base_change`, sign-flipped for RMSE so that a
//! positive value always means the adapted model transfers better.
//!
//! Splits are deterministic: author groups (or single-document groups) are
//! shuffled with a seeded generator and assigned greedily to the split
//! currently furthest below its 70/15/15 target. Few-shot samples are
//! prefixes of one seeded shuffle, so the 50-shot sample is a subset of
//! the 100-shot sample for the same seed.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::metrics::{MetricReport, METRIC_HEADERS};
use crate::rng::{sample_indices, seeded, shuffle};

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

/// Train/dev/test fractions used by [`make_split`].
pub const SPLIT_FRACTIONS: [f64; 3] = [0.70, 0.15, 0.15];

/// A reproducible dataset split. Document ids within each part are sorted,
/// and serialization field order is fixed, so the JSON form is
/// byte-identical across runs for the same inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Name of the corpus this split was derived from.
    pub corpus: String,
    pub seed: u64,
    /// Whether documents were grouped by author before assignment.
    pub grouped: bool,
    pub train: Vec<String>,
    pub dev: Vec<String>,
    pub test: Vec<String>,
}

impl SplitSpec {
    /// Pretty JSON with a trailing newline; stable byte-for-byte.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("split serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<SplitSpec> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("invalid split file: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<SplitSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SplitSpec::from_json(&text)
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.dev.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks that the split is exactly a partition of `corpus`'s ids.
    pub fn validate_against(&self, corpus: &Corpus) -> Result<()> {
        let mut seen: HashMap<&str, &str> = HashMap::new();
        for (part, ids) in [("train", &self.train), ("dev", &self.dev), ("test", &self.test)] {
            for id in ids {
                if corpus.get(id).is_none() {
                    return Err(Error::invalid(format!(
                        "split names document {id:?} which is not in corpus {:?}",
                        corpus.name
                    )));
                }
                if let Some(earlier) = seen.insert(id, part) {
                    return Err(Error::invalid(format!(
                        "document {id:?} appears in both {earlier} and {part}"
                    )));
                }
            }
        }
        if seen.len() != corpus.len() {
            return Err(Error::invalid(format!(
                "split covers {} documents but corpus {:?} has {}",
                seen.len(),
                corpus.name,
                corpus.len()
            )));
        }
        Ok(())
    }
}

/// Splits a corpus 70/15/15 into train/dev/test.
///
/// With `group_by_author`, all documents sharing an `author_id` land in the
/// same part (documents without an author form single-document groups).
/// Groups are shuffled with the seed, then assigned greedily: each group
/// goes to the part whose document count is furthest below its target,
/// ties resolved in train, dev, test order. Corpora with fewer than 3
/// documents cannot be split.
pub fn make_split(corpus: &Corpus, seed: u64, group_by_author: bool) -> Result<SplitSpec> {
    if corpus.len() < 3 {
        return Err(Error::invalid(format!(
            "corpus {:?} has {} documents; at least 3 are needed to split",
            corpus.name,
            corpus.len()
        )));
    }
    // Build groups in first-appearance order.
    let mut group_index: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<Vec<&str>> = Vec::new();
    for doc in &corpus.documents {
        let key = if group_by_author {
            doc.author_id.clone()
        } else {
            None
        };
        match key {
            Some(author) => {
                let idx = *group_index.entry(author).or_insert_with(|| {
                    groups.push(Vec::new());
                    groups.len() - 1
                });
                groups[idx].push(&doc.id);
            }
            None => groups.push(vec![&doc.id]),
        }
    }
    let mut order: Vec<usize> = (0..groups.len()).collect();
    let mut rng = seeded(seed);
    shuffle(&mut rng, &mut order);

    let total = corpus.len() as f64;
    let targets = SPLIT_FRACTIONS.map(|f| f * total);
    let mut assigned = [0usize; 3];
    let mut parts: [Vec<String>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for &g in &order {
        let deficits = [0, 1, 2].map(|i| targets[i] - assigned[i] as f64);
        let mut best = 0;
        for i in 1..3 {
            if deficits[i] > deficits[best] {
                best = i;
            }
        }
        assigned[best] += groups[g].len();
        parts[best].extend(groups[g].iter().map(|id| id.to_string()));
    }
    let [mut train, mut dev, mut test] = parts;
    train.sort();
    dev.sort();
    test.sort();
    Ok(SplitSpec {
        corpus: corpus.name.clone(),
        seed,
        grouped: group_by_author,
        train,
        dev,
        test,
    })
}

/// Draws an `n`-document few-shot sample from `pool_ids` (typically a
/// train split). The sample is the prefix of one seeded shuffle, so for a
/// fixed seed the `n`-shot sample is always a prefix-subset of any larger
/// sample.
pub fn few_shot_sample(pool_ids: &[String], n: usize, seed: u64) -> Result<Vec<String>> {
    if n > pool_ids.len() {
        return Err(Error::invalid(format!(
            "cannot sample {n} documents from a pool of {}",
            pool_ids.len()
        )));
    }
    Ok(sample_indices(seed, pool_ids.len(), n)
        .into_iter()
        .map(|i| pool_ids[i].clone())
        .collect())
}

// ---------------------------------------------------------------------------
// Run records
// ---------------------------------------------------------------------------

/// Experimental condition of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "condition")]
pub enum Condition {
    /// Trained and evaluated on the same dataset.
    InDomain,
    /// Trained on `source`, adapted with `shots` target examples,
    /// evaluated on `target`.
    Transfer { shots: usize },
}

/// One evaluated run: a model, where it was trained and evaluated, the
/// condition, and its metrics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub model: String,
    /// Dataset the model was trained on.
    pub source: String,
    /// Dataset the run was evaluated on.
    pub target: String,
    #[serde(flatten)]
    pub condition: Condition,
    #[serde(flatten)]
    pub metrics: MetricReport,
}

impl RunRecord {
    fn key(&self) -> (String, String, String, Option<usize>) {
        let shots = match self.condition {
            Condition::InDomain => None,
            Condition::Transfer { shots } => Some(shots),
        };
        (self.model.clone(), self.source.clone(), self.target.clone(), shots)
    }

    fn validate(&self) -> Result<()> {
        if self.model.trim().is_empty() || self.source.trim().is_empty() || self.target.trim().is_empty() {
            return Err(Error::invalid("run record needs model, source, and target names"));
        }
        if matches!(self.condition, Condition::InDomain) && self.source != self.target {
            return Err(Error::invalid(format!(
                "in-domain run for model {:?} has source {:?} but target {:?}; they must match",
                self.model, self.source, self.target
            )));
        }
        Ok(())
    }

    /// A short human-readable run label, e.g. `ielts->fce@50` or
    /// `fce (in-domain)`.
    pub fn label(&self) -> String {
        match self.condition {
            Condition::InDomain => format!("{} (in-domain)", self.target),
            Condition::Transfer { shots } => format!("{}->{}@{}", self.source, self.target, shots),
        }
    }
}

/// Reads run records from CSV with header
/// `model,source,target,condition,shots,rmse,qwk,spearman,pearson`.
/// `condition` is `in_domain` (empty `shots`) or `transfer` (integer `shots`);
/// metric cells other than `rmse` may be empty for statistics that were
/// undefined. Duplicate run keys are rejected.
pub fn load_records_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_records_csv(&text).map_err(|e| match e {
        Error::Record { line, message, .. } => Error::record(path, line, message),
        other => Error::invalid(format!("{}: {other}", path.display())),
    })
}

/// Parses run-record CSV text (see [`load_records_csv`]).
pub fn parse_records_csv(text: &str) -> Result<Vec<RunRecord>> {
    let anon = Path::new("records");
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::invalid(format!("records: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let expect = ["model", "source", "target", "condition", "shots", "rmse", "qwk", "spearman", "pearson"];
    if headers != expect {
        return Err(Error::invalid(format!(
            "records header must be {:?}, found {:?}",
            expect.join(","),
            headers.join(",")
        )));
    }
    let mut records = Vec::new();
    let mut seen: HashMap<(String, String, String, Option<usize>), usize> = HashMap::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::record(anon, line, e.to_string()))?;
        if row.len() != 9 {
            return Err(Error::record(
                anon,
                line,
                format!("expected 9 fields, found {}", row.len()),
            ));
        }
        let field = |idx: usize| row[idx].trim().to_string();
        let opt_metric = |idx: usize| -> Result<Option<f64>> {
            let cell = row[idx].trim();
            if cell.is_empty() {
                return Ok(None);
            }
            cell.parse::<f64>()
                .map_err(|_| Error::record(anon, line, format!("bad {} value {cell:?}", expect[idx])))
                .map(Some)
        };
        let condition = match field(3).as_str() {
            "in_domain" => {
                if !row[4].trim().is_empty() {
                    return Err(Error::record(anon, line, "in_domain runs must leave shots empty"));
                }
                Condition::InDomain
            }
            "transfer" => {
                let shots: usize = row[4].trim().parse().map_err(|_| {
                    Error::record(anon, line, format!("bad shots value {:?}", row[4].trim()))
                })?;
                Condition::Transfer { shots }
            }
            other => {
                return Err(Error::record(
                    anon,
                    line,
                    format!("condition must be in_domain or transfer, found {other:?}"),
                ))
            }
        };
        let rmse = opt_metric(5)?.ok_or_else(|| Error::record(anon, line, "rmse is required"))?;
        let record = RunRecord {
            model: field(0),
            source: field(1),
            target: field(2),
            condition,
            metrics: MetricReport {
                rmse,
                qwk: opt_metric(6)?,
                spearman: opt_metric(7)?,
                pearson: opt_metric(8)?,
                notes: Vec::new(),
            },
        };
        record.validate().map_err(|e| Error::record(anon, line, e.to_string()))?;
        if let Some(first) = seen.insert(record.key(), line) {
            return Err(Error::record(
                anon,
                line,
                format!("duplicate run (same model, source, target, condition) first seen on line {first}"),
            ));
        }
        records.push(record);
    }
    Ok(records)
}

/// Renders run records back to the CSV schema of [`load_records_csv`],
/// with full-precision metric values (the output re-parses to equal
/// records).
pub fn records_csv(records: &[RunRecord]) -> String {
    let mut out = String::from("model,source,target,condition,shots,rmse,qwk,spearman,pearson\n");
    for r in records {
        let (cond, shots) = match r.condition {
            Condition::InDomain => ("in_domain", String::new()),
            Condition::Transfer { shots } => ("transfer", shots.to_string()),
        };
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.model,
            r.source,
            r.target,
            cond,
            shots,
            r.metrics.rmse,
            cell(r.metrics.qwk),
            cell(r.metrics.spearman),
            cell(r.metrics.pearson),
        );
    }
    out
}

// ---------------------------------------------------------------------------
// Changes and advantages
// ---------------------------------------------------------------------------

/// Per-metric differences between two runs (or two changes). Entries are
/// `None` when either operand was undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDelta {
    pub rmse: f64,
    pub qwk: Option<f64>,
    pub spearman: Option<f64>,
    pub pearson: Option<f64>,
}

impl MetricDelta {
    /// Values in [`METRIC_HEADERS`] order.
    pub fn values(&self) -> [Option<f64>; 4] {
        [Some(self.rmse), self.qwk, self.spearman, self.pearson]
    }

    /// Signed fixed-precision cells (`+0.087`), `n/a` when undefined.
    pub fn formatted(&self) -> [String; 4] {
        self.values()
            .map(|v| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:+.3}")))
    }
}

fn opt_sub(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    }
}

/// How a transfer run compares to the model's own in-domain run on the
/// transfer's target dataset: `transfer − in-domain`, per metric.
///
/// The in-domain record must be for the same model and for the transfer's
/// target dataset; anything else is an error.
pub fn transfer_change(transfer: &RunRecord, in_domain: &RunRecord) -> Result<MetricDelta> {
    let Condition::Transfer { .. } = transfer.condition else {
        return Err(Error::invalid(format!(
            "change needs a transfer run, but {:?} {} is in-domain",
            transfer.model,
            transfer.label()
        )));
    };
    if !matches!(in_domain.condition, Condition::InDomain) {
        return Err(Error::invalid(format!(
            "change needs an in-domain reference, but {:?} {} is a transfer run",
            in_domain.model,
            in_domain.label()
        )));
    }
    if transfer.model != in_domain.model {
        return Err(Error::invalid(format!(
            "change compares runs of one model, got {:?} and {:?}",
            transfer.model, in_domain.model
        )));
    }
    if in_domain.target != transfer.target {
        return Err(Error::invalid(format!(
            "in-domain reference must be on the transfer target {:?}, got {:?}",
            transfer.target, in_domain.target
        )));
    }
    Ok(MetricDelta {
        rmse: transfer.metrics.rmse - in_domain.metrics.rmse,
        qwk: opt_sub(transfer.metrics.qwk, in_domain.metrics.qwk),
        spearman: opt_sub(transfer.metrics.spearman, in_domain.metrics.spearman),
        pearson: opt_sub(transfer.metrics.pearson, in_domain.metrics.pearson),
    })
}

/// The adaptation advantage of an (adapted, base) pair given each model's
/// transfer change: `adapted − base`, with the RMSE entry sign-flipped so
/// a positive value always means the adapted model transfers better.
pub fn dapt_advantage(adapted_change: &MetricDelta, base_change: &MetricDelta) -> MetricDelta {
    MetricDelta {
        rmse: -(adapted_change.rmse - base_change.rmse),
        qwk: opt_sub(adapted_change.qwk, base_change.qwk),
        spearman: opt_sub(adapted_change.spearman, base_change.spearman),
        pearson: opt_sub(adapted_change.pearson, base_change.pearson),
    }
}

/// An (adapted, base) model pairing to compare.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelPair {
    pub adapted: String,
    pub base: String,
    /// Display label for reports; e.g. the base model family name.
    pub label: String,
}

/// One row of the advantage ledger: a pair, a transfer setting, and the
/// computed advantage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdvantageRecord {
    pub pair: String,
    pub adapted: String,
    pub base: String,
    pub source: String,
    pub target: String,
    pub shots: usize,
    pub advantage: MetricDelta,
}

/// Builds the full advantage ledger: for every pair and every transfer run
/// of the adapted model, finds the matching base transfer and both
/// in-domain references, computes both changes, and takes the advantage.
/// Rows follow the adapted model's record order. Missing counterpart runs
/// are errors naming exactly what is absent.
pub fn build_ledger(records: &[RunRecord], pairs: &[ModelPair]) -> Result<Vec<AdvantageRecord>> {
    for r in records {
        r.validate()?;
    }
    let mut by_key: HashMap<(&str, &str, &str, Option<usize>), &RunRecord> = HashMap::new();
    for r in records {
        let shots = match r.condition {
            Condition::InDomain => None,
            Condition::Transfer { shots } => Some(shots),
        };
        if by_key
            .insert((r.model.as_str(), r.source.as_str(), r.target.as_str(), shots), r)
            .is_some()
        {
            return Err(Error::invalid(format!(
                "duplicate run record for model {:?} ({})",
                r.model,
                r.label()
            )));
        }
    }
    let find = |model: &str, source: &str, target: &str, shots: Option<usize>, what: &str| {
        by_key
            .get(&(model, source, target, shots))
            .copied()
            .ok_or_else(|| {
                let setting = match shots {
                    Some(n) => format!("{source}->{target}@{n}"),
                    None => format!("{target} (in-domain)"),
                };
                Error::invalid(format!("missing {what} run: model {model:?}, {setting}"))
            })
    };
    let mut ledger = Vec::new();
    for pair in pairs {
        let mut found_any = false;
        for r in records {
            if r.model != pair.adapted {
                continue;
            }
            let Condition::Transfer { shots } = r.condition else {
                continue;
            };
            found_any = true;
            let adapted_in =
                find(&pair.adapted, &r.target, &r.target, None, "in-domain reference")?;
            let base_transfer =
                find(&pair.base, &r.source, &r.target, Some(shots), "base transfer")?;
            let base_in = find(&pair.base, &r.target, &r.target, None, "base in-domain reference")?;
            let adapted_change = transfer_change(r, adapted_in)?;
            let base_change = transfer_change(base_transfer, base_in)?;
            ledger.push(AdvantageRecord {
                pair: pair.label.clone(),
                adapted: pair.adapted.clone(),
                base: pair.base.clone(),
                source: r.source.clone(),
                target: r.target.clone(),
                shots,
                advantage: dapt_advantage(&adapted_change, &base_change),
            });
        }
        if !found_any {
            return Err(Error::invalid(format!(
                "no transfer runs found for adapted model {:?} (pair {:?})",
                pair.adapted, pair.label
            )));
        }
    }
    Ok(ledger)
}

/// Ranks models by their in-domain runs on `target`: ascending RMSE, ties
/// broken by descending QWK, then by model name. Returns model names in
/// rank order.
pub fn rank_ablation(records: &[RunRecord], target: &str) -> Result<Vec<String>> {
    let mut rows: Vec<&RunRecord> = records
        .iter()
        .filter(|r| matches!(r.condition, Condition::InDomain) && r.target == target)
        .collect();
    if rows.is_empty() {
        return Err(Error::invalid(format!(
            "no in-domain runs on dataset {target:?} to rank"
        )));
    }
    rows.sort_by(|a, b| {
        a.metrics
            .rmse
            .total_cmp(&b.metrics.rmse)
            .then_with(|| {
                let qa = a.metrics.qwk.unwrap_or(f64::NEG_INFINITY);
                let qb = b.metrics.qwk.unwrap_or(f64::NEG_INFINITY);
                qb.total_cmp(&qa)
            })
            .then_with(|| a.model.cmp(&b.model))
    });
    Ok(rows.into_iter().map(|r| r.model.clone()).collect())
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

/// Advantage ledger as CSV (three decimals, signed).
pub fn ledger_csv(ledger: &[AdvantageRecord]) -> String {
    let mut out = String::from("pair,adapted,base,source,target,shots,RMSE,QWK,Sp.,Pe.\n");
    for row in ledger {
        let cells = row.advantage.formatted();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            row.pair,
            row.adapted,
            row.base,
            row.source,
            row.target,
            row.shots,
            cells[0],
            cells[1],
            cells[2],
            cells[3],
        );
    }
    out
}

fn render_grid(grid: &[Vec<String>]) -> String {
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
            if c < 2 && grid[0].len() > 4 {
                line.push_str(&format!("{cell:<width$}", width = widths[c]));
            } else if c == 0 {
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
    out
}

/// Advantage ledger as an aligned text table, grouped by direction.
pub fn ledger_table(ledger: &[AdvantageRecord]) -> String {
    let mut header = vec!["pair".to_string(), "transfer".to_string()];
    header.extend(METRIC_HEADERS.iter().map(|h| h.to_string()));
    let mut grid = vec![header];
    for row in ledger {
        let mut cells = vec![
            row.pair.clone(),
            format!("{}->{}@{}", row.source, row.target, row.shots),
        ];
        cells.extend(row.advantage.formatted());
        grid.push(cells);
    }
    render_grid(&grid)
}

/// Run records as an aligned text table. Transfer rows show each metric
/// with its change against the model's in-domain reference on the
/// transfer target in parentheses, when that reference exists.
pub fn runs_table(records: &[RunRecord]) -> String {
    let mut in_domain: BTreeMap<(&str, &str), &RunRecord> = BTreeMap::new();
    for r in records {
        if matches!(r.condition, Condition::InDomain) {
            in_domain.insert((r.model.as_str(), r.target.as_str()), r);
        }
    }
    let mut header = vec!["model".to_string(), "run".to_string()];
    header.extend(METRIC_HEADERS.iter().map(|h| h.to_string()));
    let mut grid = vec![header];
    for r in records {
        let mut cells = vec![r.model.clone(), r.label()];
        let reference = match r.condition {
            Condition::InDomain => None,
            Condition::Transfer { .. } => in_domain.get(&(r.model.as_str(), r.target.as_str())),
        };
        match reference {
            Some(reference) => {
                let delta = transfer_change(r, reference).expect("matched reference");
                for (value, change) in r.metrics.values().iter().zip(delta.values()) {
                    cells.push(match (value, change) {
                        (Some(v), Some(d)) => format!("{v:.3} ({d:+.3})"),
                        (Some(v), None) => format!("{v:.3}"),
                        (None, _) => "n/a".to_string(),
                    });
                }
            }
            None => {
                cells.extend(r.metrics.formatted());
            }
        }
        grid.push(cells);
    }
    render_grid(&grid)
}
