//! Engineered shot predictors and the canonical shots CSV.

pub mod design;
pub mod geometry;

use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::csvfmt::{bool01, f6};
use crate::error::{Error, Result};
use crate::ingest::{FreezeFramePlayer, RawShot};
use crate::shot::{BodyPart, BodyPartRaw, Foot, GeneralPosition, Technique};
use geometry::{distance_to_goal, point_in_shot_triangle, shot_angle, Point, GOAL};

pub use design::{build_design_matrix, ColumnKind, DesignColumn, DesignLayout, DesignMatrix};

/// Opponents within this many pitch units of the shooter count as close.
pub const PRESSURE_RADIUS: f64 = 1.0;

/// One engineered shot; also the row type of the canonical shots CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub match_id: u64,
    pub event_index: u64,
    pub competition_id: u32,
    pub season_id: u32,
    pub player: String,
    pub position_raw: String,
    pub general_position: GeneralPosition,
    pub preferred_foot: Foot,
    #[serde(serialize_with = "f6::serialize")]
    pub x: f64,
    #[serde(serialize_with = "f6::serialize")]
    pub y: f64,
    pub play_pattern: String,
    pub body_part_raw: BodyPartRaw,
    pub body_part: BodyPart,
    pub technique: Technique,
    #[serde(with = "bool01")]
    pub first_time: bool,
    #[serde(with = "bool01")]
    pub one_on_one: bool,
    #[serde(with = "bool01")]
    pub open_goal: bool,
    #[serde(with = "bool01")]
    pub under_pressure: bool,
    #[serde(serialize_with = "f6::serialize")]
    pub distance_to_goal: f64,
    #[serde(serialize_with = "f6::serialize")]
    pub shot_angle: f64,
    #[serde(serialize_with = "f6::serialize")]
    pub gk_distance_to_goal: f64,
    #[serde(with = "bool01")]
    pub gk_in_shot_triangle: bool,
    pub players_in_shot_triangle: u32,
    pub opponents_in_radius: u32,
    #[serde(with = "bool01")]
    pub goal: bool,
    #[serde(serialize_with = "f6::serialize")]
    pub statsbomb_xg: f64,
}

/// Predictors derived from the freeze frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreezeFrameFeatures {
    pub gk_distance_to_goal: f64,
    pub gk_in_shot_triangle: bool,
    pub players_in_shot_triangle: u32,
    pub opponents_in_radius: u32,
    /// False when no opposing keeper was present and the fallback values
    /// (distance 0, not in triangle) were used.
    pub keeper_found: bool,
}

pub fn freeze_frame_features(shot_location: Point, frame: &[FreezeFramePlayer]) -> FreezeFrameFeatures {
    let keeper = frame.iter().find(|p| p.is_keeper && !p.teammate);
    let (gk_distance_to_goal, gk_in_shot_triangle) = match keeper {
        Some(k) => (
            k.location().distance(GOAL.goal_center),
            point_in_shot_triangle(k.location(), shot_location),
        ),
        None => (0.0, false),
    };
    let players_in_shot_triangle = frame
        .iter()
        .filter(|p| point_in_shot_triangle(p.location(), shot_location))
        .count() as u32;
    let opponents_in_radius = frame
        .iter()
        .filter(|p| !p.teammate && p.location().distance(shot_location) <= PRESSURE_RADIUS)
        .count() as u32;
    FreezeFrameFeatures {
        gk_distance_to_goal,
        gk_in_shot_triangle,
        players_in_shot_triangle,
        opponents_in_radius,
        keeper_found: keeper.is_some(),
    }
}

/// Collapses a StatsBomb position label into ST / AM / M / D.
pub fn map_general_position(raw_position: &str) -> Result<GeneralPosition> {
    use GeneralPosition::*;
    Ok(match raw_position {
        "Center Forward" | "Right Center Forward" | "Left Center Forward" | "Striker"
        | "Secondary Striker" => ST,
        "Right Wing" | "Left Wing" | "Right Attacking Midfield" | "Center Attacking Midfield"
        | "Left Attacking Midfield" => AM,
        "Right Midfield" | "Left Midfield" | "Right Center Midfield" | "Center Midfield"
        | "Left Center Midfield" | "Right Defensive Midfield" | "Center Defensive Midfield"
        | "Left Defensive Midfield" => M,
        "Goalkeeper" | "Right Back" | "Left Back" | "Right Center Back" | "Center Back"
        | "Left Center Back" | "Right Wing Back" | "Left Wing Back" => D,
        other => return Err(Error::UnknownPosition(other.to_string())),
    })
}

pub fn resolve_body_part(raw: BodyPartRaw, preferred: Foot) -> BodyPart {
    match (raw, preferred) {
        (BodyPartRaw::LeftFoot, Foot::Left) | (BodyPartRaw::RightFoot, Foot::Right) => {
            BodyPart::PreferredFoot
        }
        (BodyPartRaw::LeftFoot, Foot::Right) | (BodyPartRaw::RightFoot, Foot::Left) => {
            BodyPart::OtherFoot
        }
        (BodyPartRaw::Head, _) => BodyPart::Head,
        (BodyPartRaw::Other, _) => BodyPart::Other,
    }
}

/// Computes every engineered predictor for one raw shot.
pub fn engineer(shot: &RawShot) -> Result<FeatureRow> {
    let location = shot.location();
    let ff = freeze_frame_features(location, &shot.freeze_frame);
    if !ff.keeper_found {
        warn!(
            "match {} event {}: no opposing keeper in freeze frame",
            shot.match_id, shot.event_index
        );
    }
    Ok(FeatureRow {
        match_id: shot.match_id,
        event_index: shot.event_index,
        competition_id: shot.competition_id,
        season_id: shot.season_id,
        player: shot.shooter_name.clone(),
        position_raw: shot.modal_position.clone(),
        general_position: map_general_position(&shot.modal_position)?,
        preferred_foot: shot.preferred_foot,
        x: shot.x,
        y: shot.y,
        play_pattern: shot.play_pattern.clone(),
        body_part_raw: shot.body_part_raw,
        body_part: resolve_body_part(shot.body_part_raw, shot.preferred_foot),
        technique: shot.technique,
        first_time: shot.first_time,
        one_on_one: shot.one_on_one,
        open_goal: shot.open_goal,
        under_pressure: shot.under_pressure,
        distance_to_goal: distance_to_goal(location)?,
        shot_angle: shot_angle(location)?,
        gk_distance_to_goal: ff.gk_distance_to_goal,
        gk_in_shot_triangle: ff.gk_in_shot_triangle,
        players_in_shot_triangle: ff.players_in_shot_triangle,
        opponents_in_radius: ff.opponents_in_radius,
        goal: shot.outcome_goal,
        statsbomb_xg: shot.statsbomb_xg,
    })
}

pub fn engineer_all(shots: &[RawShot]) -> Result<Vec<FeatureRow>> {
    use rayon::prelude::*;
    shots.par_iter().map(engineer).collect()
}

pub fn write_shots_csv(path: &Path, rows: &[FeatureRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_shots_csv(path: &Path) -> Result<Vec<FeatureRow>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<Vec<FeatureRow>, _>>()?)
}

/// Keeps rows from the listed competitions; `None` keeps everything.
pub fn filter_competitions(rows: Vec<FeatureRow>, competition_ids: Option<&[u32]>) -> Vec<FeatureRow> {
    match competition_ids {
        None => rows,
        Some(ids) => rows
            .into_iter()
            .filter(|r| ids.contains(&r.competition_id))
            .collect(),
    }
}
