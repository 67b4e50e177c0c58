//! StatsBomb open-data ingestion.
//!
//! Reads the directory layout `competitions.json`,
//! `matches/<competition_id>/<season_id>.json` and `events/<match_id>.json`,
//! keeps open-play shots from men's competitions and attaches each shooter's
//! modal position and pass-inferred preferred foot.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::geometry::{Point, PITCH_LENGTH};
use crate::shot::{BodyPartRaw, Foot, Technique};

/// Play patterns treated as open play.
pub const OPEN_PLAY_PATTERNS: [&str; 3] = ["Regular Play", "From Counter", "Other"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gender {
    Male,
    Female,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompetitionRef {
    pub competition_id: u32,
    pub season_id: u32,
    pub gender: Gender,
    pub name: String,
    pub season_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreezeFramePlayer {
    pub x: f64,
    pub y: f64,
    pub teammate: bool,
    pub is_keeper: bool,
    pub player_name: String,
    pub position_name: String,
}

impl FreezeFramePlayer {
    pub fn location(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// One open-play shot as read from the event files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawShot {
    pub match_id: u64,
    pub event_index: u64,
    pub competition_id: u32,
    pub season_id: u32,
    pub shooter_name: String,
    pub shooter_position_raw: String,
    pub x: f64,
    pub y: f64,
    pub body_part_raw: BodyPartRaw,
    pub technique: Technique,
    pub first_time: bool,
    pub one_on_one: bool,
    pub open_goal: bool,
    pub under_pressure: bool,
    pub play_pattern: String,
    pub outcome_goal: bool,
    pub statsbomb_xg: f64,
    pub freeze_frame: Vec<FreezeFramePlayer>,
    /// Most frequent position label of the shooter across all scanned events.
    pub modal_position: String,
    pub preferred_foot: Foot,
}

impl RawShot {
    pub fn location(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Counters describing what extraction kept and dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub matches: usize,
    pub shots_seen: usize,
    pub set_piece_excluded: usize,
    pub goal_line_excluded: usize,
    pub missing_freeze_frame: usize,
    pub missing_match_files: usize,
    pub missing_event_files: usize,
    pub position_ties: usize,
    pub foot_fallbacks: usize,
}

impl IngestStats {
    fn merge(&mut self, other: &IngestStats) {
        self.matches += other.matches;
        self.shots_seen += other.shots_seen;
        self.set_piece_excluded += other.set_piece_excluded;
        self.goal_line_excluded += other.goal_line_excluded;
        self.missing_freeze_frame += other.missing_freeze_frame;
        self.missing_match_files += other.missing_match_files;
        self.missing_event_files += other.missing_event_files;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionLookup {
    pub label: String,
    /// Set when several labels share the top count; the lexicographically
    /// first one is returned.
    pub tied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FootLookup {
    pub foot: Foot,
    /// Set when the pass counts tie (including no passes) and the right-foot
    /// fallback was used.
    pub fallback: bool,
}

/// Per-player position and passing-foot tallies.
#[derive(Debug, Clone, Default)]
pub struct PlayerProfiles {
    positions: BTreeMap<String, BTreeMap<String, u64>>,
    pass_feet: BTreeMap<String, [u64; 2]>,
}

impl PlayerProfiles {
    pub fn record_position(&mut self, player: &str, position: &str) {
        *self
            .positions
            .entry(player.to_string())
            .or_default()
            .entry(position.to_string())
            .or_default() += 1;
    }

    pub fn record_pass(&mut self, player: &str, foot: Foot) {
        let counts = self.pass_feet.entry(player.to_string()).or_default();
        match foot {
            Foot::Left => counts[0] += 1,
            Foot::Right => counts[1] += 1,
        }
    }

    fn merge(&mut self, other: PlayerProfiles) {
        for (player, labels) in other.positions {
            let mine = self.positions.entry(player).or_default();
            for (label, n) in labels {
                *mine.entry(label).or_default() += n;
            }
        }
        for (player, [l, r]) in other.pass_feet {
            let mine = self.pass_feet.entry(player).or_default();
            mine[0] += l;
            mine[1] += r;
        }
    }

    pub fn modal_position(&self, player: &str) -> Result<PositionLookup> {
        let counts = self
            .positions
            .get(player)
            .filter(|c| !c.is_empty())
            .ok_or_else(|| Error::UnknownPlayer(player.to_string()))?;
        let best = *counts.values().max().expect("non-empty");
        // BTreeMap iterates in lexicographic order.
        let mut top = counts.iter().filter(|(_, &n)| n == best).map(|(l, _)| l);
        let label = top.next().expect("at least one maximum").clone();
        let tied = top.next().is_some();
        Ok(PositionLookup { label, tied })
    }

    pub fn preferred_foot(&self, player: &str) -> FootLookup {
        let [left, right] = self.pass_feet.get(player).copied().unwrap_or_default();
        if left > right {
            FootLookup {
                foot: Foot::Left,
                fallback: false,
            }
        } else if right > left {
            FootLookup {
                foot: Foot::Right,
                fallback: false,
            }
        } else {
            FootLookup {
                foot: Foot::Right,
                fallback: true,
            }
        }
    }
}

#[derive(Deserialize)]
struct CompetitionEntry {
    competition_id: i64,
    season_id: i64,
    competition_gender: String,
    #[serde(default)]
    competition_name: String,
    #[serde(default)]
    season_name: String,
}

#[derive(Deserialize)]
struct MatchEntry {
    match_id: u64,
}

#[derive(Deserialize)]
struct Named {
    name: String,
}

#[derive(Deserialize)]
struct Event {
    index: u64,
    #[serde(rename = "type")]
    kind: Named,
    play_pattern: Option<Named>,
    player: Option<Named>,
    position: Option<Named>,
    location: Option<Vec<f64>>,
    #[serde(default)]
    under_pressure: bool,
    shot: Option<ShotDetail>,
    pass: Option<PassDetail>,
}

#[derive(Deserialize)]
struct ShotDetail {
    statsbomb_xg: Option<f64>,
    body_part: Option<Named>,
    technique: Option<Named>,
    #[serde(rename = "type")]
    kind: Option<Named>,
    outcome: Option<Named>,
    #[serde(default)]
    first_time: bool,
    #[serde(default)]
    one_on_one: bool,
    #[serde(default)]
    open_goal: bool,
    freeze_frame: Option<Vec<FreezeFrameEntry>>,
}

#[derive(Deserialize)]
struct FreezeFrameEntry {
    location: Vec<f64>,
    player: Option<Named>,
    position: Option<Named>,
    #[serde(default)]
    teammate: bool,
}

#[derive(Deserialize)]
struct PassDetail {
    body_part: Option<Named>,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let bytes = fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path.to_path_buf())
        } else {
            Error::io(path, e)
        }
    })?;
    serde_json::from_slice(&bytes).map_err(|e| Error::parse(path, e))
}

/// Reads every (competition, season) pair listed in `competitions.json`.
pub fn load_competitions(data_dir: &Path) -> Result<Vec<CompetitionRef>> {
    let path = data_dir.join("competitions.json");
    let entries: Vec<CompetitionEntry> = read_json(&path)?;
    entries
        .into_iter()
        .map(|e| {
            let gender = match e.competition_gender.as_str() {
                "male" => Gender::Male,
                "female" => Gender::Female,
                other => return Err(Error::parse(&path, format!("unknown gender {other:?}"))),
            };
            let competition_id = u32::try_from(e.competition_id)
                .map_err(|_| Error::parse(&path, "negative competition_id"))?;
            let season_id = u32::try_from(e.season_id)
                .map_err(|_| Error::parse(&path, "negative season_id"))?;
            Ok(CompetitionRef {
                competition_id,
                season_id,
                gender,
                name: e.competition_name,
                season_name: e.season_name,
            })
        })
        .collect()
}

/// Men's competitions, optionally restricted to the given competition ids.
pub fn select_competitions(
    all: &[CompetitionRef],
    competition_ids: Option<&[u32]>,
) -> Vec<CompetitionRef> {
    all.iter()
        .filter(|c| c.gender == Gender::Male)
        .filter(|c| competition_ids.is_none_or(|ids| ids.contains(&c.competition_id)))
        .cloned()
        .collect()
}

struct MatchContext {
    match_id: u64,
    competition_id: u32,
    season_id: u32,
}

#[derive(Default)]
struct MatchScan {
    shots: Vec<RawShot>,
    profiles: PlayerProfiles,
    stats: IngestStats,
}

fn point_from(path: &Path, coords: &[f64]) -> Result<Point> {
    match coords {
        [x, y, ..] => Point::new(*x, *y).check_bounds(),
        _ => Err(Error::parse(path, "location needs two coordinates")),
    }
}

fn scan_match(path: &Path, ctx: &MatchContext) -> Result<MatchScan> {
    let events: Vec<Event> = read_json(path)?;
    let mut scan = MatchScan::default();
    scan.stats.matches = 1;
    for event in events {
        let player = event.player.as_ref().map(|p| p.name.as_str());
        if let (Some(player), Some(position)) = (player, event.position.as_ref()) {
            scan.profiles.record_position(player, &position.name);
        }
        if let (Some(player), Some(pass)) = (player, event.pass.as_ref()) {
            match pass.body_part.as_ref().map(|b| b.name.as_str()) {
                Some("Left Foot") => scan.profiles.record_pass(player, Foot::Left),
                Some("Right Foot") => scan.profiles.record_pass(player, Foot::Right),
                _ => {}
            }
        }
        if event.kind.name != "Shot" {
            continue;
        }
        let Some(shot) = event.shot else {
            return Err(Error::parse(path, format!("shot event {} without shot object", event.index)));
        };
        scan.stats.shots_seen += 1;

        let shot_type = shot.kind.as_ref().map(|k| k.name.as_str());
        let pattern = event.play_pattern.as_ref().map(|p| p.name.as_str()).unwrap_or("");
        if shot_type != Some("Open Play") || !OPEN_PLAY_PATTERNS.contains(&pattern) {
            scan.stats.set_piece_excluded += 1;
            continue;
        }

        let location = point_from(
            path,
            event
                .location
                .as_deref()
                .ok_or_else(|| Error::parse(path, format!("shot {} has no location", event.index)))?,
        )?;
        if location.x >= PITCH_LENGTH {
            scan.stats.goal_line_excluded += 1;
            continue;
        }
        let Some(frame) = shot.freeze_frame else {
            scan.stats.missing_freeze_frame += 1;
            continue;
        };
        let freeze_frame = frame
            .into_iter()
            .map(|f| {
                let p = point_from(path, &f.location)?;
                let position_name = f.position.map(|p| p.name).unwrap_or_default();
                Ok(FreezeFramePlayer {
                    x: p.x,
                    y: p.y,
                    teammate: f.teammate,
                    is_keeper: position_name == "Goalkeeper",
                    player_name: f.player.map(|p| p.name).unwrap_or_default(),
                    position_name,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let body_name = shot.body_part.as_ref().map(|b| b.name.as_str()).unwrap_or("");
        let body_part_raw = BodyPartRaw::from_statsbomb(body_name)
            .ok_or_else(|| Error::parse(path, format!("unknown body part {body_name:?}")))?;
        let technique_name = shot.technique.as_ref().map(|t| t.name.as_str()).unwrap_or("Normal");
        let technique = Technique::from_statsbomb(technique_name)
            .ok_or_else(|| Error::parse(path, format!("unknown technique {technique_name:?}")))?;
        let statsbomb_xg = shot
            .statsbomb_xg
            .filter(|v| (0.0..=1.0).contains(v))
            .ok_or_else(|| Error::parse(path, format!("shot {} has no valid statsbomb_xg", event.index)))?;

        scan.shots.push(RawShot {
            match_id: ctx.match_id,
            event_index: event.index,
            competition_id: ctx.competition_id,
            season_id: ctx.season_id,
            shooter_name: player.unwrap_or_default().to_string(),
            shooter_position_raw: event.position.map(|p| p.name).unwrap_or_default(),
            x: location.x,
            y: location.y,
            body_part_raw,
            technique,
            first_time: shot.first_time,
            one_on_one: shot.one_on_one,
            open_goal: shot.open_goal,
            under_pressure: event.under_pressure,
            play_pattern: pattern.to_string(),
            outcome_goal: shot.outcome.as_ref().is_some_and(|o| o.name == "Goal"),
            statsbomb_xg,
            freeze_frame,
            modal_position: String::new(),
            preferred_foot: Foot::Right,
        });
    }
    Ok(scan)
}

/// Result of a full ingestion pass.
#[derive(Debug, Clone)]
pub struct IngestOutput {
    pub shots: Vec<RawShot>,
    pub profiles: PlayerProfiles,
    pub stats: IngestStats,
}

fn match_contexts(data_dir: &Path, competitions: &[CompetitionRef], stats: &mut IngestStats) -> Result<Vec<(PathBuf, MatchContext)>> {
    let mut out = Vec::new();
    for comp in competitions {
        if comp.gender != Gender::Male {
            return Err(Error::InvalidConfig(format!(
                "competition {} season {} is not a men's competition",
                comp.competition_id, comp.season_id
            )));
        }
        let path = data_dir
            .join("matches")
            .join(comp.competition_id.to_string())
            .join(format!("{}.json", comp.season_id));
        let matches: Vec<MatchEntry> = match read_json(&path) {
            Ok(m) => m,
            Err(Error::MissingFile(p)) => {
                warn!("skipping competition {} season {}: {} not found", comp.competition_id, comp.season_id, p.display());
                stats.missing_match_files += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        for m in matches {
            out.push((
                data_dir.join("events").join(format!("{}.json", m.match_id)),
                MatchContext {
                    match_id: m.match_id,
                    competition_id: comp.competition_id,
                    season_id: comp.season_id,
                },
            ));
        }
    }
    Ok(out)
}

/// Scans all matches of the given men's competitions, in parallel, and returns
/// canonically ordered shots with shooter profiles attached.
pub fn ingest(data_dir: &Path, competitions: &[CompetitionRef]) -> Result<IngestOutput> {
    let mut stats = IngestStats::default();
    let contexts = match_contexts(data_dir, competitions, &mut stats)?;

    let scans: Vec<Option<MatchScan>> = contexts
        .par_iter()
        .map(|(path, ctx)| match scan_match(path, ctx) {
            Ok(scan) => Ok(Some(scan)),
            Err(Error::MissingFile(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let mut shots = Vec::new();
    let mut profiles = PlayerProfiles::default();
    for scan in scans {
        match scan {
            Some(scan) => {
                stats.merge(&scan.stats);
                profiles.merge(scan.profiles);
                shots.extend(scan.shots);
            }
            None => stats.missing_event_files += 1,
        }
    }
    shots.sort_by_key(|s| (s.match_id, s.event_index));

    for shot in &mut shots {
        let position = profiles.modal_position(&shot.shooter_name)?;
        if position.tied {
            warn!("position tie for {:?}; using {:?}", shot.shooter_name, position.label);
            stats.position_ties += 1;
        }
        shot.modal_position = position.label;
        let foot = profiles.preferred_foot(&shot.shooter_name);
        if foot.fallback {
            stats.foot_fallbacks += 1;
        }
        shot.preferred_foot = foot.foot;
    }
    if stats.missing_freeze_frame > 0 {
        warn!("skipped {} shots without a freeze frame", stats.missing_freeze_frame);
    }
    info!(
        "ingested {} open-play shots from {} matches ({} set pieces, {} goal-line shots excluded)",
        shots.len(),
        stats.matches,
        stats.set_piece_excluded,
        stats.goal_line_excluded
    );
    Ok(IngestOutput {
        shots,
        profiles,
        stats,
    })
}

/// Open-play shots for the given competitions.
pub fn extract_shots(data_dir: &Path, competitions: &[CompetitionRef]) -> Result<Vec<RawShot>> {
    Ok(ingest(data_dir, competitions)?.shots)
}

/// Position and passing tallies over every men's competition in the directory.
pub fn scan_profiles(data_dir: &Path) -> Result<PlayerProfiles> {
    let competitions = select_competitions(&load_competitions(data_dir)?, None);
    Ok(ingest(data_dir, &competitions)?.profiles)
}

/// Most frequent raw position label of a player across the men's data.
pub fn modal_position(data_dir: &Path, player_name: &str) -> Result<PositionLookup> {
    scan_profiles(data_dir)?.modal_position(player_name)
}

/// Foot the player passed with most often; right on a tie or with no passes.
pub fn infer_preferred_foot(data_dir: &Path, player_name: &str) -> Result<FootLookup> {
    Ok(scan_profiles(data_dir)?.preferred_foot(player_name))
}

/// Flat CSV record for a raw shot; the freeze frame is embedded as JSON.
#[derive(Debug, Serialize, Deserialize)]
struct RawShotRecord {
    match_id: u64,
    event_index: u64,
    competition_id: u32,
    season_id: u32,
    shooter_name: String,
    shooter_position_raw: String,
    modal_position: String,
    preferred_foot: Foot,
    x: f64,
    y: f64,
    body_part_raw: BodyPartRaw,
    technique: Technique,
    #[serde(with = "crate::csvfmt::bool01")]
    first_time: bool,
    #[serde(with = "crate::csvfmt::bool01")]
    one_on_one: bool,
    #[serde(with = "crate::csvfmt::bool01")]
    open_goal: bool,
    #[serde(with = "crate::csvfmt::bool01")]
    under_pressure: bool,
    play_pattern: String,
    #[serde(with = "crate::csvfmt::bool01")]
    outcome_goal: bool,
    statsbomb_xg: f64,
    freeze_frame: String,
}

pub fn write_raw_shots_csv(path: &Path, shots: &[RawShot]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for s in shots {
        w.serialize(RawShotRecord {
            match_id: s.match_id,
            event_index: s.event_index,
            competition_id: s.competition_id,
            season_id: s.season_id,
            shooter_name: s.shooter_name.clone(),
            shooter_position_raw: s.shooter_position_raw.clone(),
            modal_position: s.modal_position.clone(),
            preferred_foot: s.preferred_foot,
            x: s.x,
            y: s.y,
            body_part_raw: s.body_part_raw,
            technique: s.technique,
            first_time: s.first_time,
            one_on_one: s.one_on_one,
            open_goal: s.open_goal,
            under_pressure: s.under_pressure,
            play_pattern: s.play_pattern.clone(),
            outcome_goal: s.outcome_goal,
            statsbomb_xg: s.statsbomb_xg,
            freeze_frame: serde_json::to_string(&s.freeze_frame)?,
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_raw_shots_csv(path: &Path) -> Result<Vec<RawShot>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize::<RawShotRecord>()
        .map(|rec| {
            let rec = rec?;
            Ok(RawShot {
                match_id: rec.match_id,
                event_index: rec.event_index,
                competition_id: rec.competition_id,
                season_id: rec.season_id,
                shooter_name: rec.shooter_name,
                shooter_position_raw: rec.shooter_position_raw,
                x: rec.x,
                y: rec.y,
                body_part_raw: rec.body_part_raw,
                technique: rec.technique,
                first_time: rec.first_time,
                one_on_one: rec.one_on_one,
                open_goal: rec.open_goal,
                under_pressure: rec.under_pressure,
                play_pattern: rec.play_pattern,
                outcome_goal: rec.outcome_goal,
                statsbomb_xg: rec.statsbomb_xg,
                freeze_frame: serde_json::from_str(&rec.freeze_frame)?,
                modal_position: rec.modal_position,
                preferred_foot: rec.preferred_foot,
            })
        })
        .collect()
}
