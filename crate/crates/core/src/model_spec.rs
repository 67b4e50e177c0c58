//! Model specifications: predictor sets, grouping and prior assignments.
//!
//! Priors are stated on the raw predictor scale (coefficients per unit of
//! distance, per degree of angle, ...) so that a model means the same thing
//! whatever internal standardization the fitter uses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dists::PriorDist;
use crate::error::{Error, Result};
use crate::features::design::{ColumnKind, ContinuousFeature, CountFeature, DesignColumn, FlagFeature};
use crate::shot::GeneralPosition;

/// Engineered predictors in canonical order; the feature-count sweep adds
/// them one at a time in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    DistanceToGoal,
    ShotAngle,
    DistanceAngleInteraction,
    GkDistanceToGoal,
    PlayersInShotTriangle,
    OpponentsInRadius,
    BodyPart,
    FirstTime,
    GkInShotTriangle,
    OneOnOne,
    OpenGoal,
    Technique,
    UnderPressure,
}

impl Feature {
    pub const CANONICAL: [Feature; 13] = [
        Feature::DistanceToGoal,
        Feature::ShotAngle,
        Feature::DistanceAngleInteraction,
        Feature::GkDistanceToGoal,
        Feature::PlayersInShotTriangle,
        Feature::OpponentsInRadius,
        Feature::BodyPart,
        Feature::FirstTime,
        Feature::GkInShotTriangle,
        Feature::OneOnOne,
        Feature::OpenGoal,
        Feature::Technique,
        Feature::UnderPressure,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictorSet {
    /// Distance, angle and their interaction.
    Baseline,
    /// All engineered predictors.
    Extended,
    Custom(Vec<Feature>),
}

impl PredictorSet {
    pub fn features(&self) -> Vec<Feature> {
        match self {
            PredictorSet::Baseline => Feature::CANONICAL[..3].to_vec(),
            PredictorSet::Extended => Feature::CANONICAL.to_vec(),
            PredictorSet::Custom(f) => f.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PredictorSet::Baseline => "baseline".into(),
            PredictorSet::Extended => "extended".into(),
            PredictorSet::Custom(f) => format!("custom{}", f.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "by")]
pub enum Grouping {
    None,
    Position,
    /// Selected players each get a level; everyone else shares `"other"`.
    Player { selected: Vec<String> },
}

impl Grouping {
    pub fn is_grouped(&self) -> bool {
        !matches!(self, Grouping::None)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Grouping::None => "none",
            Grouping::Position => "position",
            Grouping::Player { .. } => "player",
        }
    }
}

/// Named prior configurations for the fixed effects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorSet {
    /// Direction-aware skew-normal / normal priors with scale 5.
    Existing,
    WideUniform,
    TightUniform,
    WideNormal,
    TightNormal,
    /// Narrow priors with several skews pointing the wrong way.
    IllSuited,
}

impl PriorSet {
    pub const ALL: [PriorSet; 6] = [
        PriorSet::Existing,
        PriorSet::WideUniform,
        PriorSet::TightUniform,
        PriorSet::WideNormal,
        PriorSet::TightNormal,
        PriorSet::IllSuited,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            PriorSet::Existing => "existing",
            PriorSet::WideUniform => "wide_uniform",
            PriorSet::TightUniform => "tight_uniform",
            PriorSet::WideNormal => "wide_normal",
            PriorSet::TightNormal => "tight_normal",
            PriorSet::IllSuited => "ill_suited",
        }
    }

    pub fn intercept_prior(&self) -> PriorDist {
        match self {
            PriorSet::Existing => PriorDist::normal(0.0, 5.0),
            PriorSet::IllSuited => PriorDist::skew_normal(0.0, 0.25, 2.0),
            other => other.flat_prior().expect("uniform or normal set"),
        }
    }

    fn flat_prior(&self) -> Option<PriorDist> {
        match self {
            PriorSet::WideUniform => Some(PriorDist::uniform(-100.0, 100.0)),
            PriorSet::TightUniform => Some(PriorDist::uniform(-1.0, 1.0)),
            PriorSet::WideNormal => Some(PriorDist::normal(0.0, 10.0)),
            PriorSet::TightNormal => Some(PriorDist::normal(0.0, 0.25)),
            PriorSet::Existing | PriorSet::IllSuited => None,
        }
    }

    pub fn column_prior(&self, kind: &ColumnKind) -> PriorDist {
        if let Some(p) = self.flat_prior() {
            return p;
        }
        match self {
            PriorSet::Existing => existing_prior(kind),
            PriorSet::IllSuited => ill_suited_prior(kind),
            _ => unreachable!(),
        }
    }
}

fn existing_prior(kind: &ColumnKind) -> PriorDist {
    const S: f64 = 5.0;
    match *kind {
        ColumnKind::Continuous { feature } => match feature {
            ContinuousFeature::DistanceToGoal => PriorDist::skew_normal(-1.0, S, -1.0),
            ContinuousFeature::ShotAngle => PriorDist::skew_normal(1.0, S, 1.0),
            ContinuousFeature::DistanceAngleInteraction | ContinuousFeature::GkDistanceToGoal => {
                PriorDist::normal(0.0, S)
            }
        },
        // 0 players → α = 5, 1 → 4, ... ; 0 opponents → α = 1, 1 → 0, ...
        ColumnKind::CountLevel { feature, level } => match feature {
            CountFeature::PlayersInShotTriangle => PriorDist::skew_normal(-1.0, S, 5.0 - level as f64),
            CountFeature::OpponentsInRadius => PriorDist::skew_normal(-1.0, S, 1.0 - level as f64),
        },
        ColumnKind::BodyPart { .. } | ColumnKind::Technique { .. } => PriorDist::normal(0.0, S),
        ColumnKind::Flag { feature } => match feature {
            FlagFeature::FirstTime => PriorDist::normal(0.0, S),
            FlagFeature::GkInShotTriangle => PriorDist::skew_normal(0.0, S, -2.0),
            FlagFeature::OneOnOne => PriorDist::skew_normal(0.0, S, 2.0),
            FlagFeature::OpenGoal => PriorDist::skew_normal(0.0, S, 4.0),
            FlagFeature::UnderPressure => PriorDist::skew_normal(0.0, S, -2.0),
        },
    }
}

fn ill_suited_prior(kind: &ColumnKind) -> PriorDist {
    const S: f64 = 0.25;
    match *kind {
        ColumnKind::Continuous { feature } => match feature {
            ContinuousFeature::DistanceToGoal => PriorDist::skew_normal(0.0, S, 2.0),
            ContinuousFeature::ShotAngle | ContinuousFeature::GkDistanceToGoal => PriorDist::normal(0.0, S),
            ContinuousFeature::DistanceAngleInteraction => PriorDist::skew_normal(0.0, S, -2.0),
        },
        ColumnKind::CountLevel { feature, level } => match feature {
            CountFeature::PlayersInShotTriangle => PriorDist::skew_normal(0.0, S, level as f64 - 5.0),
            CountFeature::OpponentsInRadius => PriorDist::skew_normal(0.0, S, 1.0 - level as f64),
        },
        ColumnKind::BodyPart { .. } | ColumnKind::Technique { .. } => PriorDist::normal(0.0, S),
        ColumnKind::Flag { feature } => match feature {
            FlagFeature::FirstTime => PriorDist::normal(0.0, S),
            FlagFeature::GkInShotTriangle => PriorDist::skew_normal(0.0, S, 2.0),
            FlagFeature::OneOnOne => PriorDist::skew_normal(0.0, S, -2.0),
            FlagFeature::OpenGoal => PriorDist::skew_normal(0.0, S, -4.0),
            FlagFeature::UnderPressure => PriorDist::skew_normal(0.0, S, 2.0),
        },
    }
}

/// Players whose group prior is skewed towards better-than-model finishing
/// when no explicit α is supplied.
pub const DEFAULT_GOOD_FINISHERS: [&str; 4] = [
    "Robert Pirès",
    "Sergio Leonel Agüero del Castillo",
    "Jamie Vardy",
    "Philippe Coutinho Correia",
];

pub fn default_position_alpha() -> BTreeMap<String, f64> {
    [
        (GeneralPosition::ST, 2.0),
        (GeneralPosition::AM, 1.0),
        (GeneralPosition::M, 0.0),
        (GeneralPosition::D, -2.0),
    ]
    .into_iter()
    .map(|(p, a)| (p.label().to_string(), a))
    .collect()
}

pub const INTERCEPT: &str = "intercept";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub predictors: PredictorSet,
    pub grouping: Grouping,
    pub prior_set: PriorSet,
    /// Per-column overrides keyed by column name (or `"intercept"`).
    #[serde(default)]
    pub prior_overrides: BTreeMap<String, PriorDist>,
    /// Skew of each group level's offset prior.
    #[serde(default)]
    pub group_alpha: BTreeMap<String, f64>,
    pub hyper_scale_prior: PriorDist,
}

impl ModelSpec {
    /// Spec with the default priors and group skews for the grouping.
    pub fn new(predictors: PredictorSet, grouping: Grouping) -> Self {
        let group_alpha = match &grouping {
            Grouping::None => BTreeMap::new(),
            Grouping::Position => default_position_alpha(),
            Grouping::Player { selected } => {
                let mut m: BTreeMap<String, f64> = selected
                    .iter()
                    .map(|name| {
                        let good = DEFAULT_GOOD_FINISHERS.contains(&name.as_str());
                        (name.clone(), if good { 2.0 } else { 0.0 })
                    })
                    .collect();
                m.insert(crate::features::design::OTHER_PLAYER.to_string(), 0.0);
                m
            }
        };
        ModelSpec {
            predictors,
            grouping,
            prior_set: PriorSet::Existing,
            prior_overrides: BTreeMap::new(),
            group_alpha,
            hyper_scale_prior: PriorDist::half_normal(5.0),
        }
    }

    pub fn with_prior_set(mut self, set: PriorSet) -> Self {
        self.prior_set = set;
        self
    }

    pub fn intercept_prior(&self) -> PriorDist {
        self.prior_overrides
            .get(INTERCEPT)
            .copied()
            .unwrap_or_else(|| self.prior_set.intercept_prior())
    }

    pub fn column_prior(&self, column: &DesignColumn) -> PriorDist {
        self.prior_overrides
            .get(&column.name)
            .copied()
            .unwrap_or_else(|| self.prior_set.column_prior(&column.kind))
    }

    /// Skew for each group level, in level order.
    pub fn level_alphas(&self, levels: &[String]) -> Result<Vec<f64>> {
        levels
            .iter()
            .map(|l| {
                self.group_alpha
                    .get(l)
                    .copied()
                    .ok_or_else(|| Error::InvalidConfig(format!("no group skew for level {l:?}")))
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.hyper_scale_prior.validate()?;
        for p in self.prior_overrides.values() {
            p.validate()?;
        }
        if let Grouping::Player { selected } = &self.grouping {
            if selected.is_empty() {
                return Err(Error::InvalidConfig("player grouping needs selected players".into()));
            }
        }
        Ok(())
    }
}
