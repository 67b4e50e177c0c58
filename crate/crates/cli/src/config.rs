//! Run configuration: a JSON file (`--config`) overlaid with command-line
//! flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use xg_core::bayes::SamplerConfig;
use xg_core::dists::PriorDist;
use xg_core::model_spec::{Grouping, ModelSpec, PredictorSet, PriorSet};

use crate::ValidationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Baseline,
    Extended,
}

impl ModelKind {
    pub fn predictors(self) -> PredictorSet {
        match self {
            ModelKind::Baseline => PredictorSet::Baseline,
            ModelKind::Extended => PredictorSet::Extended,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Freq,
    Bayes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GroupingKind {
    None,
    Position,
    Player,
}

/// Single-level model the hierarchical predictions are compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    Freq,
    Bayes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PriorSetArg {
    Existing,
    WideUniform,
    TightUniform,
    WideNormal,
    TightNormal,
    IllSuited,
}

impl From<PriorSetArg> for PriorSet {
    fn from(p: PriorSetArg) -> Self {
        match p {
            PriorSetArg::Existing => PriorSet::Existing,
            PriorSetArg::WideUniform => PriorSet::WideUniform,
            PriorSetArg::TightUniform => PriorSet::TightUniform,
            PriorSetArg::WideNormal => PriorSet::WideNormal,
            PriorSetArg::TightNormal => PriorSet::TightNormal,
            PriorSetArg::IllSuited => PriorSet::IllSuited,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// StatsBomb open-data root.
    pub data_dir: Option<PathBuf>,
    /// Canonical shots CSV; used instead of `data_dir` when set.
    pub shots: Option<PathBuf>,
    /// Competition ids to keep; all men's competitions when absent.
    pub competitions: Option<Vec<u32>>,
    pub model: ModelKind,
    pub method: Method,
    pub grouping: GroupingKind,
    pub players: Vec<String>,
    pub prior_set: PriorSet,
    pub prior_overrides: BTreeMap<String, PriorDist>,
    pub sampler: SamplerConfig,
    pub baseline: BaselineKind,
    pub min_shots: usize,
    /// Random subset size applied after loading; all shots when absent.
    pub subsample: Option<usize>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data_dir: None,
            shots: None,
            competitions: None,
            model: ModelKind::Baseline,
            method: Method::Freq,
            grouping: GroupingKind::None,
            players: Vec::new(),
            prior_set: PriorSet::Existing,
            prior_overrides: BTreeMap::new(),
            sampler: SamplerConfig::default(),
            baseline: BaselineKind::Freq,
            min_shots: xg_core::analysis::MIN_SHOTS,
            subsample: None,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| ValidationError(format!("invalid config {}: {e}", path.display())).into())
    }

    pub fn grouping(&self) -> Grouping {
        match self.grouping {
            GroupingKind::None => Grouping::None,
            GroupingKind::Position => Grouping::Position,
            GroupingKind::Player => Grouping::Player {
                selected: self.players.clone(),
            },
        }
    }

    /// Spec for the configured model with the given grouping.
    pub fn spec_with(&self, grouping: Grouping) -> ModelSpec {
        let mut spec = ModelSpec::new(self.model.predictors(), grouping).with_prior_set(self.prior_set);
        spec.prior_overrides = self.prior_overrides.clone();
        spec
    }

    pub fn spec(&self) -> ModelSpec {
        self.spec_with(self.grouping())
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.method == Method::Freq && self.grouping != GroupingKind::None {
            return Err(ValidationError(format!(
                "--method freq cannot be combined with --grouping {}",
                self.grouping_label()
            )));
        }
        if self.grouping == GroupingKind::Player && self.players.is_empty() {
            return Err(ValidationError("--grouping player needs a non-empty --players list".into()));
        }
        if self.shots.is_none() && self.data_dir.is_none() {
            return Err(ValidationError("one of --shots or --data-dir is required".into()));
        }
        if self.subsample == Some(0) {
            return Err(ValidationError("--subsample must be positive".into()));
        }
        self.sampler.validate().map_err(|e| ValidationError(e.to_string()))?;
        self.spec().validate().map_err(|e| ValidationError(e.to_string()))?;
        Ok(())
    }

    pub fn grouping_label(&self) -> &'static str {
        match self.grouping {
            GroupingKind::None => "none",
            GroupingKind::Position => "position",
            GroupingKind::Player => "player",
        }
    }
}
