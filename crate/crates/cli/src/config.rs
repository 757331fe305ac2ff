//! TOML configuration for the `experiment` command.
//!
//! Two mutually exclusive modes share one file format:
//!
//! * **records mode** — a `[records]` table pointing at a CSV of already
//!   evaluated runs; the command builds the advantage ledger and report
//!   tables from those.
//! * **pipeline mode** — `[datasets.<name>]` tables plus `[[models]]`
//!   entries; the command splits each dataset, obtains predictions from
//!   the built-in ridge scorer (`kind = "internal"`) or from prediction
//!   files (`kind = "external"`), evaluates every run, and then builds
//!   the same ledger.
//!
//! `[[pairs]]` entries declare which (adapted, base) model pairings the
//! advantage tables should cover; model names are opaque strings and
//! pairings never come from name parsing.
//!
//! ```toml
//! seed = 42
//! shots = [50, 100, 200]
//!
//! [datasets.ielts]
//! path = "data/ielts.csv"
//! scale = { min = 0.0, max = 9.0, step = 0.5 }
//! trees = "data/ielts.trees"      # optional
//! group_by_author = false          # default
//!
//! [[models]]
//! name = "ridge"
//! kind = "internal"
//! lambda = 1.0                     # default
//!
//! [[models]]
//! name = "bert"
//! kind = "external"
//! [models.predictions]
//! "ielts" = "preds/bert_ielts.csv"          # in-domain run
//! "ielts->fce@50" = "preds/bert_i2f_50.csv" # transfer run
//!
//! [[pairs]]
//! adapted = "dapt-bert"
//! base = "bert"
//! label = "bert"                   # defaults to the base name
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use scorealign::harness::ModelPair;
use scorealign::ScoreScale;

use crate::failure::{CmdResult, Failure};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SHOTS: [usize; 3] = [50, 100, 200];
pub const DEFAULT_LAMBDA: f64 = 1.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Seed for splits and few-shot sampling; one seed shared by every
    /// model so all runs see identical splits.
    pub seed: Option<u64>,
    /// Few-shot grid; defaults to 50/100/200.
    pub shots: Option<Vec<usize>>,
    pub records: Option<RecordsConfig>,
    #[serde(default)]
    pub datasets: BTreeMap<String, DatasetConfig>,
    #[serde(default)]
    pub models: Vec<ModelConfig>,
    #[serde(default)]
    pub pairs: Vec<PairConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordsConfig {
    pub path: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    pub scale: ScaleConfig,
    pub trees: Option<PathBuf>,
    #[serde(default)]
    pub group_by_author: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleConfig {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl ScaleConfig {
    pub fn to_scale(self) -> CmdResult<ScoreScale> {
        ScoreScale::new(self.min, self.max, self.step)
            .map_err(|e| Failure::usage(format!("invalid scale in config: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    pub kind: ModelKind,
    /// Ridge regularization strength (internal models only).
    pub lambda: Option<f64>,
    /// External models: run key → prediction CSV. Keys are a dataset name
    /// for in-domain runs or `source->target@shots` for transfer runs.
    #[serde(default)]
    pub predictions: BTreeMap<String, PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Internal,
    External,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub adapted: String,
    pub base: String,
    pub label: Option<String>,
}

impl PairConfig {
    pub fn to_pair(&self) -> ModelPair {
        ModelPair {
            adapted: self.adapted.clone(),
            base: self.base.clone(),
            label: self.label.clone().unwrap_or_else(|| self.base.clone()),
        }
    }
}

/// A parsed external-run key: either a dataset name (in-domain) or
/// `source->target@shots` (transfer).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunKey {
    InDomain { dataset: String },
    Transfer { source: String, target: String, shots: usize },
}

impl RunKey {
    pub fn parse(key: &str) -> CmdResult<RunKey> {
        let key = key.trim();
        if key.is_empty() {
            return Err(Failure::usage("empty run key in model predictions"));
        }
        match key.split_once("->") {
            None => Ok(RunKey::InDomain { dataset: key.to_string() }),
            Some((source, rest)) => {
                let (target, shots) = rest.split_once('@').ok_or_else(|| {
                    Failure::usage(format!(
                        "transfer run key {key:?} must look like source->target@shots"
                    ))
                })?;
                let shots: usize = shots.trim().parse().map_err(|_| {
                    Failure::usage(format!("run key {key:?} has a non-numeric shot count"))
                })?;
                let source = source.trim();
                let target = target.trim();
                if source.is_empty() || target.is_empty() {
                    return Err(Failure::usage(format!(
                        "transfer run key {key:?} is missing a dataset name"
                    )));
                }
                Ok(RunKey::Transfer {
                    source: source.to_string(),
                    target: target.to_string(),
                    shots,
                })
            }
        }
    }
}

impl ExperimentConfig {
    /// Reads and validates a config file. IO failures are data errors;
    /// everything wrong *inside* the file is a usage error.
    pub fn load(path: &Path) -> CmdResult<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Data(format!("cannot read config {}: {e}", path.display())))?;
        let config: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| Failure::usage(format!("invalid config {}: {e}", path.display())))?;
        config.validate(path)?;
        Ok(config)
    }

    fn validate(&self, path: &Path) -> CmdResult<()> {
        let at = |msg: String| Failure::usage(format!("{}: {msg}", path.display()));
        if let Some(records) = &self.records {
            if !self.datasets.is_empty() || !self.models.is_empty() {
                return Err(at(
                    "config mixes a [records] fixture table with pipeline [datasets]/[[models]] sections; use one or the other"
                        .into(),
                ));
            }
            if records.path.as_os_str().is_empty() {
                return Err(at("[records] path must not be empty".into()));
            }
            return Ok(());
        }
        if self.datasets.is_empty() {
            return Err(at(
                "config needs either a [records] table or at least one [datasets.<name>] table".into(),
            ));
        }
        if self.models.is_empty() {
            return Err(at("pipeline config needs at least one [[models]] entry".into()));
        }
        if let Some(shots) = &self.shots {
            if shots.is_empty() || shots.iter().any(|&n| n == 0) {
                return Err(at("shots must be a non-empty list of positive counts".into()));
            }
        }
        let mut names = std::collections::HashSet::new();
        for model in &self.models {
            if model.name.trim().is_empty() {
                return Err(at("model names must not be empty".into()));
            }
            if !names.insert(model.name.as_str()) {
                return Err(at(format!("duplicate model name {:?}", model.name)));
            }
            match model.kind {
                ModelKind::Internal => {
                    if !model.predictions.is_empty() {
                        return Err(at(format!(
                            "internal model {:?} must not declare prediction files",
                            model.name
                        )));
                    }
                    if let Some(lambda) = model.lambda {
                        if !lambda.is_finite() || lambda < 0.0 {
                            return Err(at(format!(
                                "model {:?} lambda must be a finite non-negative number",
                                model.name
                            )));
                        }
                    }
                }
                ModelKind::External => {
                    if model.lambda.is_some() {
                        return Err(at(format!(
                            "external model {:?} does not take a lambda",
                            model.name
                        )));
                    }
                    if model.predictions.is_empty() {
                        return Err(at(format!(
                            "external model {:?} declares no prediction files",
                            model.name
                        )));
                    }
                    for key in model.predictions.keys() {
                        let parsed = RunKey::parse(key)?;
                        let datasets: Vec<&str> = match &parsed {
                            RunKey::InDomain { dataset } => vec![dataset],
                            RunKey::Transfer { source, target, .. } => vec![source, target],
                        };
                        for dataset in datasets {
                            if !self.datasets.contains_key(dataset) {
                                return Err(at(format!(
                                    "model {:?} run {key:?} refers to unknown dataset {dataset:?}",
                                    model.name
                                )));
                            }
                        }
                    }
                }
            }
        }
        for pair in &self.pairs {
            for (role, name) in [("adapted", &pair.adapted), ("base", &pair.base)] {
                if !self.models.iter().any(|m| &m.name == name) {
                    return Err(at(format!(
                        "pair declares {role} model {name:?} but no [[models]] entry defines it"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn shots(&self) -> Vec<usize> {
        self.shots.clone().unwrap_or_else(|| DEFAULT_SHOTS.to_vec())
    }

    pub fn pairs(&self) -> Vec<ModelPair> {
        self.pairs.iter().map(PairConfig::to_pair).collect()
    }
}
