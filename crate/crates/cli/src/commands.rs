//! Implementations of the `scorealign` subcommands.
//!
//! Shared conventions: reports go to stdout, diagnostics and artifact
//! paths to stderr; every output file is computed fully before anything
//! is written; paths inside a config file resolve relative to the config
//! file's directory.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use scorealign::corpus::{
    clean_corpus, load_corpus, sample_documents, write_corpus, Corpus, FileFormat,
};
use scorealign::harness::{
    build_ledger, few_shot_sample, ledger_csv, ledger_table, load_records_csv, make_split,
    rank_ablation, records_csv, runs_table, Condition, RunRecord, SplitSpec,
};
use scorealign::lexalign::{divergence_matrix, top_k_tokens};
use scorealign::metrics::{evaluate, MetricReport, METRIC_HEADERS};
use scorealign::scorer::{
    featurize_document, load_predictions, paired_scores, predictions_csv, Features, Prediction,
    RidgeModel,
};
use scorealign::synprof::{
    profile_corpus, profiles_csv, profiles_table, read_tree_file, PatternSet, TreeBank,
};
use scorealign::ScoreScale;

use crate::config::{ExperimentConfig, ModelConfig, ModelKind, RunKey, DEFAULT_LAMBDA};
use crate::failure::{CmdResult, Failure};
use crate::output::{commit, Artifact};
use crate::{
    CleanArgs, EvalArgs, ExperimentArgs, JsdArgs, ProfileArgs, ScoreAdaptArgs, ScorePredictArgs,
    ScoreTrainArgs, SplitArgs, TopkArgs,
};

fn load_corpus_at(path: &Path) -> CmdResult<Corpus> {
    let format = FileFormat::from_path(path).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(load_corpus(path, format)?)
}

fn load_trees_at(path: &Path) -> CmdResult<TreeBank> {
    Ok(read_tree_file(path)?)
}

/// Renders one metric report as an aligned two-line block plus any notes.
fn metric_block(report: &MetricReport) -> String {
    let cells = report.formatted();
    let widths: Vec<usize> = METRIC_HEADERS
        .iter()
        .zip(&cells)
        .map(|(h, c)| h.len().max(c.len()))
        .collect();
    let mut out = String::new();
    for (i, header) in METRIC_HEADERS.iter().enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        let _ = write!(out, "{header:>width$}", width = widths[i]);
    }
    out.push('\n');
    for (i, cell) in cells.iter().enumerate() {
        if i > 0 {
            out.push_str("  ");
        }
        let _ = write!(out, "{cell:>width$}", width = widths[i]);
    }
    out.push('\n');
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

// ---------------------------------------------------------------------------
// clean
// ---------------------------------------------------------------------------

pub fn clean(args: CleanArgs) -> CmdResult<()> {
    let out_format = FileFormat::from_path(&args.output).map_err(|e| Failure::usage(e.to_string()))?;
    let corpus = load_corpus_at(&args.input)?;
    let corpus = match args.scale {
        Some(scale) => corpus.with_scale(scale)?,
        None => corpus,
    };
    let (cleaned, report) = clean_corpus(&corpus, args.min_chars);
    // write_corpus renders to an in-memory buffer via a temp file path so
    // the final artifact still appears atomically
    let dir = tempfile::tempdir().map_err(|e| Failure::Data(format!("cannot create temp dir: {e}")))?;
    let staging = dir.path().join("cleaned");
    write_corpus(&cleaned, &staging, out_format)?;
    let bytes = std::fs::read(&staging).map_err(|e| Failure::Data(format!("staging failed: {e}")))?;
    commit(vec![Artifact::new(&args.output, bytes)])?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{json}");
    Ok(())
}

// ---------------------------------------------------------------------------
// jsd
// ---------------------------------------------------------------------------

pub fn jsd(args: JsdArgs) -> CmdResult<()> {
    let rows: Vec<Corpus> = args
        .corpora
        .iter()
        .map(|p| load_corpus_at(p))
        .collect::<CmdResult<_>>()?;
    let cols: Vec<Corpus> = if args.targets.is_empty() {
        rows.clone()
    } else {
        args.targets
            .iter()
            .map(|p| load_corpus_at(p))
            .collect::<CmdResult<_>>()?
    };
    let matrix = divergence_matrix(&rows, &cols, args.remove_stopwords, args.log_base.into())?;
    print!("{}", matrix.to_text());
    if let Some(path) = args.csv {
        commit(vec![Artifact::new(path, matrix.to_csv())])?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// topk
// ---------------------------------------------------------------------------

pub fn topk(args: TopkArgs) -> CmdResult<()> {
    if args.k == 0 {
        return Err(Failure::usage("--k must be at least 1"));
    }
    let corpus = load_corpus_at(&args.input)?;
    let entries = top_k_tokens(&corpus, args.k, args.remove_stopwords);
    if entries.is_empty() {
        return Err(Failure::Data(format!(
            "corpus {:?} has no tokens to count",
            corpus.name
        )));
    }
    let token_width = entries
        .iter()
        .map(|(t, _)| t.len())
        .max()
        .unwrap_or(5)
        .max("token".len());
    let mut out = String::new();
    let _ = writeln!(out, "rank  {:<token_width$}  count", "token");
    for (rank, (token, count)) in entries.iter().enumerate() {
        let _ = writeln!(out, "{:>4}  {token:<token_width$}  {count}", rank + 1);
    }
    print!("{out}");
    if let Some(path) = args.csv {
        let mut csv = String::from("rank,token,count\n");
        for (rank, (token, count)) in entries.iter().enumerate() {
            let _ = writeln!(csv, "{},{token},{count}", rank + 1);
        }
        commit(vec![Artifact::new(path, csv)])?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// profile
// ---------------------------------------------------------------------------

pub fn profile(args: ProfileArgs) -> CmdResult<()> {
    let corpus = load_corpus_at(&args.input)?;
    let corpus = match args.sample {
        Some(n) => sample_documents(&corpus, n, args.seed)?,
        None => corpus,
    };
    let bank = load_trees_at(&args.trees)?;
    let custom;
    let patterns: &PatternSet = match &args.patterns {
        Some(path) => {
            custom = PatternSet::from_file(path)?;
            &custom
        }
        None => PatternSet::default_set(),
    };
    let row = profile_corpus(&corpus, &bank, patterns, args.agg.into())?;
    print!("{}", profiles_table(std::slice::from_ref(&row), patterns.checksum()));
    if let Some(path) = args.csv {
        commit(vec![Artifact::new(path, profiles_csv(std::slice::from_ref(&row)))])?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

pub fn split(args: SplitArgs) -> CmdResult<()> {
    let corpus = load_corpus_at(&args.input)?;
    let spec = make_split(&corpus, args.seed, args.group_author)?;
    match args.output {
        Some(path) => commit(vec![Artifact::new(path, spec.to_json())])?,
        None => print!("{}", spec.to_json()),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

pub fn eval(args: EvalArgs) -> CmdResult<()> {
    let predictions = load_predictions(&args.predictions)?;
    let corpus = match &args.dataset {
        Some(path) => Some(load_corpus_at(path)?),
        None => None,
    };
    let (golds, preds) = paired_scores(&predictions, corpus.as_ref())?;
    let report = evaluate(&golds, &preds, args.scale.as_ref())?;
    print!("{}", metric_block(&report));
    Ok(())
}

// ---------------------------------------------------------------------------
// score train / adapt / predict
// ---------------------------------------------------------------------------

/// Features plus normalized golds for every document of a scored corpus;
/// errors name the first unscored document. Returns how many documents
/// lacked parse trees (when a tree bank was supplied).
fn scored_features(
    corpus: &Corpus,
    trees: Option<&TreeBank>,
    scale: &ScoreScale,
) -> CmdResult<(Vec<Features>, Vec<f64>, usize)> {
    let mut rows = Vec::with_capacity(corpus.len());
    let mut golds = Vec::with_capacity(corpus.len());
    let mut missing_trees = 0;
    for doc in &corpus.documents {
        let score = doc.score.ok_or_else(|| {
            Failure::Data(format!(
                "document {:?} in corpus {:?} has no gold score",
                doc.id, corpus.name
            ))
        })?;
        let features = featurize_document(doc, trees);
        if trees.is_some() && !features.has_trees {
            missing_trees += 1;
        }
        rows.push(features);
        golds.push(scale.normalize(score));
    }
    Ok((rows, golds, missing_trees))
}

fn warn_missing_trees(missing: usize, total: usize, corpus: &str) {
    if missing > 0 {
        eprintln!(
            "warning: {missing} of {total} documents in {corpus:?} have no parse trees; their syntactic features are zero"
        );
    }
}

fn fit_summary(action: &str, model: &RidgeModel, documents: usize) -> String {
    let mut out = format!(
        "{action} ridge scorer on {documents} documents (lambda {})\n",
        model.lambda
    );
    let _ = writeln!(out, "features: {}", model.feature_names.join(", "));
    if model.dropped.is_empty() {
        out.push_str("dropped (constant): none\n");
    } else {
        let _ = writeln!(out, "dropped (constant): {}", model.dropped.join(", "));
    }
    out
}

pub fn score_train(args: ScoreTrainArgs) -> CmdResult<()> {
    let corpus = load_corpus_at(&args.input)?.with_scale(args.scale)?;
    let bank = match &args.trees {
        Some(path) => Some(load_trees_at(path)?),
        None => None,
    };
    let (rows, golds, missing) = scored_features(&corpus, bank.as_ref(), &args.scale)?;
    warn_missing_trees(missing, corpus.len(), &corpus.name);
    let model = RidgeModel::fit(&rows, &golds, args.lambda)?;
    print!("{}", fit_summary("fitted", &model, rows.len()));
    commit(vec![Artifact::new(&args.output, model.to_json())])
}

pub fn score_adapt(args: ScoreAdaptArgs) -> CmdResult<()> {
    let source = RidgeModel::load(&args.model)?;
    let corpus = load_corpus_at(&args.input)?.with_scale(args.scale)?;
    let bank = match &args.trees {
        Some(path) => Some(load_trees_at(path)?),
        None => None,
    };
    let (rows, golds, missing) = scored_features(&corpus, bank.as_ref(), &args.scale)?;
    warn_missing_trees(missing, corpus.len(), &corpus.name);
    let adapted = source.adapt(&rows, &golds, args.lambda)?;
    print!("{}", fit_summary("adapted", &adapted, rows.len()));
    commit(vec![Artifact::new(&args.output, adapted.to_json())])
}

pub fn score_predict(args: ScorePredictArgs) -> CmdResult<()> {
    let model = RidgeModel::load(&args.model)?;
    let corpus = load_corpus_at(&args.input)?.with_scale(args.scale)?;
    let bank = match &args.trees {
        Some(path) => Some(load_trees_at(path)?),
        None => None,
    };
    if corpus.is_empty() {
        return Err(Failure::Data(format!(
            "corpus {:?} has no documents to score",
            corpus.name
        )));
    }
    let mut missing = 0;
    let predictions: Vec<Prediction> = corpus
        .documents
        .iter()
        .map(|doc| {
            let features = featurize_document(doc, bank.as_ref());
            if bank.is_some() && !features.has_trees {
                missing += 1;
            }
            Prediction {
                id: doc.id.clone(),
                gold: doc.score,
                pred: args.scale.denormalize(model.predict(&features)),
            }
        })
        .collect();
    warn_missing_trees(missing, corpus.len(), &corpus.name);
    println!("predicted {} documents", predictions.len());
    commit(vec![Artifact::new(&args.output, predictions_csv(&predictions))])
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

/// Resolves a path from the config file relative to the config's directory.
fn resolve(config_path: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        match config_path.parent() {
            Some(dir) if !dir.as_os_str().is_empty() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}

/// One loaded, split, and featurized dataset of the pipeline.
struct PreparedDataset {
    name: String,
    corpus: Corpus,
    scale: ScoreScale,
    split: SplitSpec,
    train_rows: Vec<Features>,
    train_golds: Vec<f64>,
    test_rows: Vec<Features>,
    test_golds: Vec<f64>,
    features_by_id: BTreeMap<String, (Features, f64)>,
}

fn prepare_dataset(
    name: &str,
    config_path: &Path,
    cfg: &crate::config::DatasetConfig,
    seed: u64,
) -> CmdResult<PreparedDataset> {
    let scale = cfg.scale.to_scale()?;
    let corpus = load_corpus_at(&resolve(config_path, &cfg.path))?.with_scale(scale)?;
    let bank = match &cfg.trees {
        Some(path) => Some(load_trees_at(&resolve(config_path, path))?),
        None => None,
    };
    let split = make_split(&corpus, seed, cfg.group_by_author)?;
    let (all_rows, all_golds, missing) = scored_features(&corpus, bank.as_ref(), &scale)?;
    warn_missing_trees(missing, corpus.len(), name);
    let features_by_id: BTreeMap<String, (Features, f64)> = corpus
        .documents
        .iter()
        .zip(all_rows.iter().zip(&all_golds))
        .map(|(doc, (row, gold))| (doc.id.clone(), (*row, *gold)))
        .collect();
    let collect = |ids: &[String]| -> (Vec<Features>, Vec<f64>) {
        ids.iter().map(|id| features_by_id[id]).unzip()
    };
    let (train_rows, train_golds) = collect(&split.train);
    let (test_rows, test_golds) = collect(&split.test);
    Ok(PreparedDataset {
        name: name.to_string(),
        corpus,
        scale,
        split,
        train_rows,
        train_golds,
        test_rows,
        test_golds,
        features_by_id,
    })
}

impl PreparedDataset {
    /// Evaluates normalized test-set predictions on this dataset's scale.
    fn evaluate_test(&self, normalized: &[f64]) -> CmdResult<MetricReport> {
        let preds: Vec<f64> = normalized.iter().map(|p| self.scale.denormalize(*p)).collect();
        let golds: Vec<f64> = self.test_golds.iter().map(|g| self.scale.denormalize(*g)).collect();
        Ok(evaluate(&golds, &preds, Some(&self.scale))?)
    }
}

fn internal_model_runs(
    model_cfg: &ModelConfig,
    datasets: &[PreparedDataset],
    shots: &[usize],
    seed: u64,
) -> CmdResult<Vec<RunRecord>> {
    let lambda = model_cfg.lambda.unwrap_or(DEFAULT_LAMBDA);
    let mut fitted = Vec::new();
    let mut records = Vec::new();
    for dataset in datasets {
        let model = RidgeModel::fit(&dataset.train_rows, &dataset.train_golds, lambda)?;
        let predictions = model.predict_batch(&dataset.test_rows);
        let metrics = dataset.evaluate_test(&predictions)?;
        records.push(RunRecord {
            model: model_cfg.name.clone(),
            source: dataset.name.clone(),
            target: dataset.name.clone(),
            condition: Condition::InDomain,
            metrics,
        });
        fitted.push(model);
    }
    for (source, source_model) in datasets.iter().zip(&fitted) {
        for target in datasets {
            if source.name == target.name {
                continue;
            }
            for &n in shots {
                let ids = few_shot_sample(&target.split.train, n, seed)?;
                let (rows, golds): (Vec<Features>, Vec<f64>) =
                    ids.iter().map(|id| target.features_by_id[id]).unzip();
                let adapted = source_model.adapt(&rows, &golds, lambda)?;
                let predictions = adapted.predict_batch(&target.test_rows);
                let metrics = target.evaluate_test(&predictions)?;
                records.push(RunRecord {
                    model: model_cfg.name.clone(),
                    source: source.name.clone(),
                    target: target.name.clone(),
                    condition: Condition::Transfer { shots: n },
                    metrics,
                });
            }
        }
    }
    Ok(records)
}

fn external_model_runs(
    model_cfg: &ModelConfig,
    config_path: &Path,
    datasets: &[PreparedDataset],
) -> CmdResult<Vec<RunRecord>> {
    let dataset = |name: &str| -> CmdResult<&PreparedDataset> {
        datasets
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Failure::usage(format!("unknown dataset {name:?}")))
    };
    let mut records = Vec::new();
    for (key, path) in &model_cfg.predictions {
        let run = RunKey::parse(key)?;
        let (target_name, source_name, condition) = match &run {
            RunKey::InDomain { dataset } => (dataset.clone(), dataset.clone(), Condition::InDomain),
            RunKey::Transfer { source, target, shots } => {
                (target.clone(), source.clone(), Condition::Transfer { shots: *shots })
            }
        };
        let target = dataset(&target_name)?;
        let predictions = load_predictions(&resolve(config_path, path))?;
        let (golds, preds) = paired_scores(&predictions, Some(&target.corpus))?;
        let metrics = evaluate(&golds, &preds, Some(&target.scale))?;
        records.push(RunRecord {
            model: model_cfg.name.clone(),
            source: source_name,
            target: target_name,
            condition,
            metrics,
        });
    }
    Ok(records)
}

/// Deterministic report order: models as configured, in-domain runs before
/// transfers, then by source, target, and shot count.
fn sort_records(records: &mut [RunRecord], model_order: &[String]) {
    let rank = |name: &str| {
        model_order
            .iter()
            .position(|m| m == name)
            .unwrap_or(model_order.len())
    };
    records.sort_by(|a, b| {
        let ka = (
            rank(&a.model),
            matches!(a.condition, Condition::Transfer { .. }) as u8,
            a.source.clone(),
            a.target.clone(),
            match a.condition {
                Condition::InDomain => 0,
                Condition::Transfer { shots } => shots,
            },
        );
        let kb = (
            rank(&b.model),
            matches!(b.condition, Condition::Transfer { .. }) as u8,
            b.source.clone(),
            b.target.clone(),
            match b.condition {
                Condition::InDomain => 0,
                Condition::Transfer { shots } => shots,
            },
        );
        ka.cmp(&kb)
    });
}

fn rankings_text(records: &[RunRecord]) -> Option<String> {
    let targets: BTreeSet<&str> = records
        .iter()
        .filter(|r| matches!(r.condition, Condition::InDomain))
        .map(|r| r.target.as_str())
        .collect();
    if targets.is_empty() {
        return None;
    }
    let mut out = String::new();
    for target in targets {
        let ranked = rank_ablation(records, target).ok()?;
        let _ = writeln!(out, "in-domain ranking on {target} (ascending RMSE):");
        for (i, name) in ranked.iter().enumerate() {
            let _ = writeln!(out, "  {}. {name}", i + 1);
        }
    }
    Some(out)
}

pub fn experiment(args: ExperimentArgs) -> CmdResult<()> {
    let config = ExperimentConfig::load(&args.config)?;
    let mut artifacts = Vec::new();
    let records = match &config.records {
        Some(records_cfg) => load_records_csv(&resolve(&args.config, &records_cfg.path))?,
        None => {
            let seed = config.seed();
            let shots = config.shots();
            let datasets: Vec<PreparedDataset> = config
                .datasets
                .iter()
                .map(|(name, cfg)| prepare_dataset(name, &args.config, cfg, seed))
                .collect::<CmdResult<_>>()?;
            for dataset in &datasets {
                artifacts.push(Artifact::new(
                    args.out_dir.join(format!("{}.split.json", dataset.name)),
                    dataset.split.to_json(),
                ));
            }
            let mut records = Vec::new();
            for model_cfg in &config.models {
                let runs = match model_cfg.kind {
                    ModelKind::Internal => {
                        internal_model_runs(model_cfg, &datasets, &shots, seed)?
                    }
                    ModelKind::External => {
                        external_model_runs(model_cfg, &args.config, &datasets)?
                    }
                };
                records.extend(runs);
            }
            let order: Vec<String> = config.models.iter().map(|m| m.name.clone()).collect();
            sort_records(&mut records, &order);
            records
        }
    };
    if records.is_empty() {
        return Err(Failure::Data("the experiment produced no runs".into()));
    }
    let pairs = config.pairs();
    for pair in &pairs {
        for (role, name) in [("adapted", &pair.adapted), ("base", &pair.base)] {
            if !records.iter().any(|r| &r.model == name) {
                return Err(Failure::usage(format!(
                    "config declares pair {:?} but there are no runs for its {role} model {name:?}",
                    pair.label
                )));
            }
        }
    }
    artifacts.push(Artifact::new(args.out_dir.join("records.csv"), records_csv(&records)));
    let runs = runs_table(&records);
    artifacts.push(Artifact::new(args.out_dir.join("runs.txt"), runs.clone()));
    let mut stdout = String::from("== runs ==\n");
    stdout.push_str(&runs);
    if let Some(rankings) = rankings_text(&records) {
        artifacts.push(Artifact::new(args.out_dir.join("rankings.txt"), rankings.clone()));
        stdout.push_str("\n== in-domain rankings ==\n");
        stdout.push_str(&rankings);
    }
    if pairs.is_empty() {
        stdout.push_str("\nno model pairs declared; skipping advantage tables\n");
    } else {
        let ledger = build_ledger(&records, &pairs)?;
        artifacts.push(Artifact::new(args.out_dir.join("advantages.csv"), ledger_csv(&ledger)));
        let table = ledger_table(&ledger);
        artifacts.push(Artifact::new(args.out_dir.join("advantages.txt"), table.clone()));
        stdout.push_str("\n== transfer advantages ==\n");
        stdout.push_str(&table);
    }
    print!("{stdout}");
    commit(artifacts)
}
