//! Numeric design matrices.
//!
//! A [`DesignLayout`] is learned once from training rows (column list,
//! standardization, group levels) and can then be applied to any rows, so
//! predictions on new data use exactly the fitted representation. Continuous
//! columns are standardized; categorical features are one-hot encoded with the
//! first level of their fixed order as the dropped reference. Count features
//! are clamped into their top level (10 players in the triangle, 3 opponents
//! in the radius) before encoding.

use serde::{Deserialize, Serialize};

use super::FeatureRow;
use crate::error::{Error, Result};
use crate::model_spec::{Feature, Grouping, ModelSpec, PredictorSet};
use crate::shot::{BodyPart, GeneralPosition, Technique};

pub const MAX_TRIANGLE_LEVEL: u32 = 10;
pub const MAX_RADIUS_LEVEL: u32 = 3;
pub const OTHER_PLAYER: &str = "other";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuousFeature {
    DistanceToGoal,
    ShotAngle,
    DistanceAngleInteraction,
    GkDistanceToGoal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountFeature {
    PlayersInShotTriangle,
    OpponentsInRadius,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagFeature {
    FirstTime,
    GkInShotTriangle,
    OneOnOne,
    OpenGoal,
    UnderPressure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ColumnKind {
    Continuous { feature: ContinuousFeature },
    CountLevel { feature: CountFeature, level: u32 },
    BodyPart { level: BodyPart },
    Technique { level: Technique },
    Flag { feature: FlagFeature },
}

impl ColumnKind {
    pub fn name(&self) -> String {
        match *self {
            ColumnKind::Continuous { feature } => match feature {
                ContinuousFeature::DistanceToGoal => "distance_to_goal".into(),
                ContinuousFeature::ShotAngle => "shot_angle".into(),
                ContinuousFeature::DistanceAngleInteraction => "distance_angle_interaction".into(),
                ContinuousFeature::GkDistanceToGoal => "gk_distance_to_goal".into(),
            },
            ColumnKind::CountLevel { feature, level } => match feature {
                CountFeature::PlayersInShotTriangle => format!("players_in_shot_triangle_{level}"),
                CountFeature::OpponentsInRadius => format!("opponents_in_radius_{level}"),
            },
            ColumnKind::BodyPart { level } => format!("body_part_{}", level.label()),
            ColumnKind::Technique { level } => format!("technique_{}", level.label()),
            ColumnKind::Flag { feature } => match feature {
                FlagFeature::FirstTime => "shot_first_time".into(),
                FlagFeature::GkInShotTriangle => "gk_in_shot_triangle".into(),
                FlagFeature::OneOnOne => "shot_one_on_one".into(),
                FlagFeature::OpenGoal => "shot_open_goal".into(),
                FlagFeature::UnderPressure => "under_pressure".into(),
            },
        }
    }

    /// Raw (unstandardized) value of this column for one row.
    pub fn raw_value(&self, row: &FeatureRow) -> f64 {
        let b = |v: bool| if v { 1.0 } else { 0.0 };
        match *self {
            ColumnKind::Continuous { feature } => match feature {
                ContinuousFeature::DistanceToGoal => row.distance_to_goal,
                ContinuousFeature::ShotAngle => row.shot_angle,
                ContinuousFeature::DistanceAngleInteraction => row.distance_to_goal * row.shot_angle,
                ContinuousFeature::GkDistanceToGoal => row.gk_distance_to_goal,
            },
            ColumnKind::CountLevel { feature, level } => match feature {
                CountFeature::PlayersInShotTriangle => {
                    b(row.players_in_shot_triangle.min(MAX_TRIANGLE_LEVEL) == level)
                }
                CountFeature::OpponentsInRadius => {
                    b(row.opponents_in_radius.min(MAX_RADIUS_LEVEL) == level)
                }
            },
            ColumnKind::BodyPart { level } => b(row.body_part == level),
            ColumnKind::Technique { level } => b(row.technique == level),
            ColumnKind::Flag { feature } => b(match feature {
                FlagFeature::FirstTime => row.first_time,
                FlagFeature::GkInShotTriangle => row.gk_in_shot_triangle,
                FlagFeature::OneOnOne => row.one_on_one,
                FlagFeature::OpenGoal => row.open_goal,
                FlagFeature::UnderPressure => row.under_pressure,
            }),
        }
    }
}

/// Candidate (non-reference) columns contributed by one feature.
pub fn feature_columns(feature: Feature) -> Vec<ColumnKind> {
    use ColumnKind as K;
    match feature {
        Feature::DistanceToGoal => vec![K::Continuous { feature: ContinuousFeature::DistanceToGoal }],
        Feature::ShotAngle => vec![K::Continuous { feature: ContinuousFeature::ShotAngle }],
        Feature::DistanceAngleInteraction => {
            vec![K::Continuous { feature: ContinuousFeature::DistanceAngleInteraction }]
        }
        Feature::GkDistanceToGoal => vec![K::Continuous { feature: ContinuousFeature::GkDistanceToGoal }],
        Feature::PlayersInShotTriangle => (1..=MAX_TRIANGLE_LEVEL)
            .map(|level| K::CountLevel { feature: CountFeature::PlayersInShotTriangle, level })
            .collect(),
        Feature::OpponentsInRadius => (1..=MAX_RADIUS_LEVEL)
            .map(|level| K::CountLevel { feature: CountFeature::OpponentsInRadius, level })
            .collect(),
        Feature::BodyPart => BodyPart::ALL[1..].iter().map(|&level| K::BodyPart { level }).collect(),
        Feature::FirstTime => vec![K::Flag { feature: FlagFeature::FirstTime }],
        Feature::GkInShotTriangle => vec![K::Flag { feature: FlagFeature::GkInShotTriangle }],
        Feature::OneOnOne => vec![K::Flag { feature: FlagFeature::OneOnOne }],
        Feature::OpenGoal => vec![K::Flag { feature: FlagFeature::OpenGoal }],
        Feature::Technique => Technique::ALL[1..].iter().map(|&level| K::Technique { level }).collect(),
        Feature::UnderPressure => vec![K::Flag { feature: FlagFeature::UnderPressure }],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignColumn {
    pub name: String,
    pub kind: ColumnKind,
    /// Present for continuous columns only.
    pub standardization: Option<Standardization>,
}

impl DesignColumn {
    pub fn is_one_hot(&self) -> bool {
        matches!(self.kind, ColumnKind::CountLevel { .. } | ColumnKind::BodyPart { .. } | ColumnKind::Technique { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Position,
    Player,
}

/// Learned column layout plus group levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignLayout {
    pub predictors: PredictorSet,
    pub columns: Vec<DesignColumn>,
    pub group_kind: Option<GroupKind>,
    pub group_levels: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct DesignMatrix {
    pub layout: DesignLayout,
    n_rows: usize,
    /// Row-major, already standardized.
    data: Vec<f64>,
    /// Per-row group level; `None` for levels the layout does not know.
    pub group_index: Option<Vec<Option<usize>>>,
}

fn group_levels(grouping: &Grouping) -> (Option<GroupKind>, Vec<String>) {
    match grouping {
        Grouping::None => (None, Vec::new()),
        Grouping::Position => (
            Some(GroupKind::Position),
            GeneralPosition::ALL.iter().map(|p| p.label().to_string()).collect(),
        ),
        Grouping::Player { selected } => {
            let mut levels: Vec<String> = selected.clone();
            levels.push(OTHER_PLAYER.to_string());
            (Some(GroupKind::Player), levels)
        }
    }
}

impl DesignLayout {
    /// Layout with no predictor columns and no grouping (intercept only).
    pub fn intercept_only() -> Self {
        DesignLayout {
            predictors: PredictorSet::Custom(Vec::new()),
            columns: Vec::new(),
            group_kind: None,
            group_levels: Vec::new(),
        }
    }

    /// Learns the layout from training rows.
    ///
    /// One-hot levels that never occur are left out; any other column with
    /// zero variance is an error.
    pub fn learn(rows: &[FeatureRow], predictors: &PredictorSet, grouping: &Grouping) -> Result<Self> {
        let n = rows.len() as f64;
        let mut columns = Vec::new();
        for feature in predictors.features() {
            for kind in feature_columns(feature) {
                let name = kind.name();
                let values: Vec<f64> = rows.iter().map(|r| kind.raw_value(r)).collect();
                let mean = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                let column = DesignColumn {
                    name,
                    kind,
                    standardization: None,
                };
                if !(var > 0.0) {
                    if column.is_one_hot() && values.iter().all(|&v| v == 0.0) {
                        continue;
                    }
                    return Err(Error::ConstantColumn(column.name));
                }
                let standardization = matches!(kind, ColumnKind::Continuous { .. })
                    .then(|| Standardization { mean, sd: var.sqrt() });
                columns.push(DesignColumn {
                    standardization,
                    ..column
                });
            }
        }
        let (group_kind, group_levels) = group_levels(grouping);
        Ok(DesignLayout {
            predictors: predictors.clone(),
            columns,
            group_kind,
            group_levels,
        })
    }

    pub fn column_names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    pub fn n_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn n_groups(&self) -> usize {
        self.group_levels.len()
    }

    fn group_of(&self, row: &FeatureRow) -> Option<Option<usize>> {
        let kind = self.group_kind?;
        let label = match kind {
            GroupKind::Position => row.general_position.label(),
            GroupKind::Player => {
                if self.group_levels.iter().any(|l| l == &row.player) {
                    row.player.as_str()
                } else {
                    OTHER_PLAYER
                }
            }
        };
        Some(self.group_levels.iter().position(|l| l == label))
    }

    /// Encodes rows with this layout.
    pub fn apply(&self, rows: &[FeatureRow]) -> DesignMatrix {
        let p = self.columns.len();
        let mut data = Vec::with_capacity(rows.len() * p);
        for row in rows {
            for col in &self.columns {
                let raw = col.kind.raw_value(row);
                data.push(match col.standardization {
                    Some(s) => (raw - s.mean) / s.sd,
                    None => raw,
                });
            }
        }
        let group_index = self
            .group_kind
            .map(|_| rows.iter().map(|r| self.group_of(r).flatten()).collect());
        DesignMatrix {
            layout: self.clone(),
            n_rows: rows.len(),
            data,
            group_index,
        }
    }

    /// Maps coefficients on the standardized columns to coefficients on the
    /// raw predictor scale. Returns `(intercept, slopes)`.
    pub fn to_raw_coefficients(&self, intercept: f64, betas: &[f64]) -> (f64, Vec<f64>) {
        let mut raw_intercept = intercept;
        let raw = self
            .columns
            .iter()
            .zip(betas)
            .map(|(c, &b)| match c.standardization {
                Some(s) => {
                    raw_intercept -= b * s.mean / s.sd;
                    b / s.sd
                }
                None => b,
            })
            .collect();
        (raw_intercept, raw)
    }

    /// Inverse of [`to_raw_coefficients`](Self::to_raw_coefficients).
    pub fn from_raw_coefficients(&self, intercept: f64, betas: &[f64]) -> (f64, Vec<f64>) {
        let mut std_intercept = intercept;
        let std = self
            .columns
            .iter()
            .zip(betas)
            .map(|(c, &b)| match c.standardization {
                Some(s) => {
                    std_intercept += b * s.mean;
                    b * s.sd
                }
                None => b,
            })
            .collect();
        (std_intercept, std)
    }

    /// Pulls a gradient with respect to raw-scale coefficients back to the
    /// standardized coefficients (transpose of the linear map above).
    /// `grad` is `[intercept, slopes...]` and is rewritten in place.
    pub fn pull_back_gradient(&self, grad: &mut [f64]) {
        let g0 = grad[0];
        for (c, g) in self.columns.iter().zip(grad[1..].iter_mut()) {
            if let Some(s) = c.standardization {
                *g = (*g - g0 * s.mean) / s.sd;
            }
        }
    }
}

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_columns(&self) -> usize {
        self.layout.columns.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.n_columns();
        &self.data[i * p..(i + 1) * p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.row(i)[j]).collect()
    }

    /// Undoes standardization for column `j`.
    pub fn raw_column(&self, j: usize) -> Vec<f64> {
        let col = self.column(j);
        match self.layout.columns[j].standardization {
            Some(s) => col.into_iter().map(|v| v * s.sd + s.mean).collect(),
            None => col,
        }
    }

    pub fn check_columns(&self, expected: &[String]) -> Result<()> {
        let found = self.layout.column_names();
        if found.as_slice() != expected {
            return Err(Error::ColumnMismatch {
                expected: expected.to_vec(),
                found,
            });
        }
        Ok(())
    }

    /// Keeps only the selected rows, preserving layout.
    pub fn select_rows(&self, idx: &[usize]) -> DesignMatrix {
        let p = self.n_columns();
        let mut data = Vec::with_capacity(idx.len() * p);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        DesignMatrix {
            layout: self.layout.clone(),
            n_rows: idx.len(),
            data,
            group_index: self.group_index.as_ref().map(|g| idx.iter().map(|&i| g[i]).collect()),
        }
    }

    /// Builds a matrix directly from standardized values; used by tests and
    /// synthetic targets.
    pub fn from_parts(
        layout: DesignLayout,
        n_rows: usize,
        data: Vec<f64>,
        group_index: Option<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let p = layout.columns.len();
        if data.len() != n_rows * p {
            return Err(Error::DimensionMismatch { expected: n_rows * p, found: data.len() });
        }
        if let Some(g) = &group_index {
            if g.len() != n_rows {
                return Err(Error::DimensionMismatch { expected: n_rows, found: g.len() });
            }
            if g.iter().flatten().any(|&k| k >= layout.group_levels.len()) {
                return Err(Error::GroupMismatch);
            }
        }
        Ok(DesignMatrix {
            layout,
            n_rows,
            data,
            group_index,
        })
    }
}

/// Learns a layout for `spec` from `rows` and encodes them.
pub fn build_design_matrix(rows: &[FeatureRow], spec: &ModelSpec) -> Result<DesignMatrix> {
    let layout = DesignLayout::learn(rows, &spec.predictors, &spec.grouping)?;
    Ok(layout.apply(rows))
}
