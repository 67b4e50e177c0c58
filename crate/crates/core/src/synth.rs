//! Synthetic shots with known coefficients and group offsets.
//!
//! Shot locations are drawn uniformly over a box in front of goal and the
//! remaining predictors independently, then the outcome is drawn from the
//! logistic model given by the truth. Rows use the canonical shots format,
//! so the whole pipeline runs on them unchanged. The `statsbomb_xg` column
//! carries the true probability.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::features::design::{feature_columns, ColumnKind, GroupKind};
use crate::features::geometry::{distance_to_goal, shot_angle, Point, PITCH_LENGTH};
use crate::features::FeatureRow;
use crate::glm::sigmoid;
use crate::model_spec::Feature;
use crate::shot::{BodyPart, BodyPartRaw, Foot, GeneralPosition, Technique};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanges {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub gk_distance: (f64, f64),
    /// Inclusive upper bounds for the two count features.
    pub max_players_in_triangle: u32,
    pub max_opponents_in_radius: u32,
    /// Probability of each boolean flag being set.
    pub flag_rate: f64,
}

impl Default for FeatureRanges {
    fn default() -> Self {
        FeatureRanges {
            x: (84.0, 119.0),
            y: (14.0, 66.0),
            gk_distance: (0.0, 8.0),
            max_players_in_triangle: 4,
            max_opponents_in_radius: 2,
            flag_rate: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthConfig {
    pub n: usize,
    pub seed: u64,
    pub intercept: f64,
    /// Raw-scale slope per design column name, e.g. `distance_to_goal` or
    /// `body_part_head`. Columns not listed have slope 0.
    #[serde(default)]
    pub beta: BTreeMap<String, f64>,
    /// Which label the offsets are keyed by; `None` means no group effect.
    #[serde(default)]
    pub offsets_by: Option<GroupKind>,
    /// Logit offset per position label or player name.
    #[serde(default)]
    pub group_offsets: BTreeMap<String, f64>,
    /// Shooter pool; each player keeps one position. Empty means 200
    /// generated names.
    #[serde(default)]
    pub players: Vec<String>,
    #[serde(default)]
    pub ranges: FeatureRanges,
}

impl TruthConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        TruthConfig {
            n,
            seed,
            intercept: 0.0,
            beta: BTreeMap::new(),
            offsets_by: None,
            group_offsets: BTreeMap::new(),
            players: Vec::new(),
            ranges: FeatureRanges::default(),
        }
    }

    /// Truth with plausible xG slopes: goals get rarer with distance and
    /// pressure, headers convert worse, one-on-ones better.
    pub fn typical(n: usize, seed: u64) -> Self {
        let mut cfg = TruthConfig::new(n, seed);
        cfg.intercept = 1.0;
        cfg.beta = [
            ("distance_to_goal", -0.12),
            ("shot_angle", 0.02),
            ("gk_distance_to_goal", 0.1),
            ("body_part_head", -0.8),
            ("shot_one_on_one", 0.6),
            ("under_pressure", -0.3),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.ranges;
        if self.n == 0 {
            return Err(Error::InvalidConfig("synthetic n must be at least 1".into()));
        }
        if !(r.x.0 >= 0.0 && r.x.0 < r.x.1 && r.x.1 < 120.0) {
            return Err(Error::InvalidConfig("x range must lie in [0, 120)".into()));
        }
        if !(r.y.0 >= 0.0 && r.y.0 < r.y.1 && r.y.1 <= 80.0) {
            return Err(Error::InvalidConfig("y range must lie in [0, 80]".into()));
        }
        if !(r.gk_distance.0 >= 0.0 && r.gk_distance.0 <= r.gk_distance.1) {
            return Err(Error::InvalidConfig("bad keeper distance range".into()));
        }
        if !(0.0..=1.0).contains(&r.flag_rate) {
            return Err(Error::InvalidConfig("flag rate must be a probability".into()));
        }
        Ok(())
    }
}

fn lookup_column(name: &str) -> Result<ColumnKind> {
    Feature::CANONICAL
        .iter()
        .flat_map(|&f| feature_columns(f))
        .find(|k| k.name() == name)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown column {name:?} in truth")))
}

fn raw_position_label(p: GeneralPosition) -> &'static str {
    match p {
        GeneralPosition::ST => "Center Forward",
        GeneralPosition::AM => "Center Attacking Midfield",
        GeneralPosition::M => "Center Midfield",
        GeneralPosition::D => "Center Back",
    }
}

/// Draws shots from the truth. Returns the rows and each shot's true goal
/// probability.
pub fn generate_shots(config: &TruthConfig) -> Result<(Vec<FeatureRow>, Vec<f64>)> {
    config.validate()?;
    let slopes: Vec<(ColumnKind, f64)> = config
        .beta
        .iter()
        .map(|(name, &b)| Ok((lookup_column(name)?, b)))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let names: Vec<String> = if config.players.is_empty() {
        (1..=200).map(|i| format!("Player {i:03}")).collect()
    } else {
        config.players.clone()
    };
    let pool: Vec<(String, GeneralPosition)> = names
        .into_iter()
        .map(|name| {
            let pos = *GeneralPosition::ALL.choose(&mut rng).expect("non-empty");
            (name, pos)
        })
        .collect();

    let r = &config.ranges;
    let mut rows = Vec::with_capacity(config.n);
    let mut probs = Vec::with_capacity(config.n);
    for i in 0..config.n {
        let (player, position) = pool.choose(&mut rng).expect("non-empty pool").clone();
        let x = rng.random_range(r.x.0..r.x.1);
        let y = rng.random_range(r.y.0..r.y.1);
        let loc = Point::new(x, y);
        let body_part = *BodyPart::ALL.choose(&mut rng).expect("levels");
        let body_part_raw = match body_part {
            BodyPart::PreferredFoot => BodyPartRaw::RightFoot,
            BodyPart::OtherFoot => BodyPartRaw::LeftFoot,
            BodyPart::Head => BodyPartRaw::Head,
            BodyPart::Other => BodyPartRaw::Other,
        };
        let mut flag = || rng.random_bool(r.flag_rate);
        let (first_time, one_on_one, open_goal, under_pressure, gk_in_shot_triangle) =
            (flag(), flag(), flag(), flag(), flag());
        let mut row = FeatureRow {
            match_id: (i / 25) as u64,
            event_index: i as u64,
            competition_id: 0,
            season_id: 0,
            player: player.clone(),
            position_raw: raw_position_label(position).to_string(),
            general_position: position,
            preferred_foot: Foot::Right,
            x,
            y,
            play_pattern: "Regular Play".to_string(),
            body_part_raw,
            body_part,
            technique: *Technique::ALL.choose(&mut rng).expect("levels"),
            first_time,
            one_on_one,
            open_goal,
            under_pressure,
            distance_to_goal: distance_to_goal(loc)?,
            shot_angle: shot_angle(loc)?,
            gk_distance_to_goal: rng.random_range(r.gk_distance.0..=r.gk_distance.1),
            gk_in_shot_triangle,
            players_in_shot_triangle: rng.random_range(0..=r.max_players_in_triangle),
            opponents_in_radius: rng.random_range(0..=r.max_opponents_in_radius),
            goal: false,
            statsbomb_xg: 0.0,
        };
        let offset = match config.offsets_by {
            None => 0.0,
            Some(GroupKind::Position) => config.group_offsets.get(position.label()).copied().unwrap_or(0.0),
            Some(GroupKind::Player) => config.group_offsets.get(&player).copied().unwrap_or(0.0),
        };
        let eta = config.intercept + offset + slopes.iter().map(|(k, b)| b * k.raw_value(&row)).sum::<f64>();
        let p = sigmoid(eta);
        row.goal = rng.random_bool(p);
        row.statsbomb_xg = p;
        rows.push(row);
        probs.push(p);
    }
    Ok((rows, probs))
}

/// Competition id used by [`write_open_data`].
pub const SYNTHETIC_COMPETITION: u32 = 9001;
pub const SYNTHETIC_SEASON: u32 = 1;

fn write_json_file(path: &Path, value: &serde_json::Value) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let text = serde_json::to_string(value)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn named(name: &str) -> serde_json::Value {
    json!({ "name": name })
}

/// Writes the generated shots as a StatsBomb open-data directory
/// (`competitions.json`, `matches/`, `events/`) under `dir`, one men's
/// competition with 25 shots per match. Every shooter also gets two
/// right-foot passes, so preferred-foot inference agrees with the rows.
///
/// Freeze frames place the opposing keeper on the centre line at the
/// row's keeper distance and the row's count of opponents close to the
/// shooter; features engineered from the files can therefore differ from
/// the returned rows for the triangle-based predictors.
pub fn write_open_data(dir: &Path, config: &TruthConfig) -> Result<Vec<FeatureRow>> {
    let (rows, _) = generate_shots(config)?;
    write_json_file(
        &dir.join("competitions.json"),
        &json!([{
            "competition_id": SYNTHETIC_COMPETITION,
            "season_id": SYNTHETIC_SEASON,
            "competition_gender": "male",
            "competition_name": "Synthetic League",
            "season_name": "Synthetic",
        }]),
    )?;
    let mut by_match: BTreeMap<u64, Vec<&FeatureRow>> = BTreeMap::new();
    for r in &rows {
        by_match.entry(r.match_id).or_default().push(r);
    }
    let matches: Vec<serde_json::Value> = by_match.keys().map(|id| json!({ "match_id": id })).collect();
    write_json_file(
        &dir.join("matches")
            .join(SYNTHETIC_COMPETITION.to_string())
            .join(format!("{SYNTHETIC_SEASON}.json")),
        &serde_json::Value::Array(matches),
    )?;
    for (match_id, shots) in by_match {
        let mut events = Vec::new();
        for r in shots {
            let base = r.event_index * 4;
            for k in 0..2 {
                events.push(json!({
                    "index": base + k,
                    "type": named("Pass"),
                    "player": named(&r.player),
                    "position": named(&r.position_raw),
                    "location": [60.0, 40.0],
                    "pass": { "body_part": named("Right Foot") },
                }));
            }
            let keeper_x = (PITCH_LENGTH - r.gk_distance_to_goal).max(0.0);
            let mut frame = vec![json!({
                "location": [keeper_x, 40.0],
                "player": named("Keeper"),
                "position": named("Goalkeeper"),
                "teammate": false,
            })];
            for j in 0..r.opponents_in_radius {
                let a = f64::from(j) * 1.3;
                let loc = Point::new((r.x + 0.5 * a.cos()).min(119.9), (r.y + 0.5 * a.sin()).clamp(0.0, 80.0));
                frame.push(json!({
                    "location": [loc.x, loc.y],
                    "player": named(&format!("Defender {j}")),
                    "position": named("Center Back"),
                    "teammate": false,
                }));
            }
            events.push(json!({
                "index": base + 2,
                "type": named("Shot"),
                "play_pattern": named(&r.play_pattern),
                "player": named(&r.player),
                "position": named(&r.position_raw),
                "location": [r.x, r.y],
                "under_pressure": r.under_pressure,
                "shot": {
                    "statsbomb_xg": r.statsbomb_xg,
                    "type": named("Open Play"),
                    "body_part": named(r.body_part_raw.statsbomb_name()),
                    "technique": named(r.technique.statsbomb_name()),
                    "outcome": named(if r.goal { "Goal" } else { "Saved" }),
                    "first_time": r.first_time,
                    "one_on_one": r.one_on_one,
                    "open_goal": r.open_goal,
                    "freeze_frame": frame,
                },
            }));
        }
        write_json_file(&dir.join("events").join(format!("{match_id}.json")), &serde_json::Value::Array(events))?;
    }
    Ok(rows)
}
