use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use tempfile::TempDir;
use xg_core::features::{engineer_all, read_shots_csv, write_shots_csv};
use xg_core::ingest::{
    extract_shots, infer_preferred_foot, ingest, load_competitions, modal_position, read_raw_shots_csv,
    select_competitions, write_raw_shots_csv, Gender,
};
use xg_core::shot::Foot;
use xg_core::synth::{write_open_data, TruthConfig, SYNTHETIC_COMPETITION};
use xg_core::Error;

fn write(path: &Path, v: &Value) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, serde_json::to_string_pretty(v).unwrap()).unwrap();
}

fn named(n: &str) -> Value {
    json!({ "name": n })
}

fn keeper() -> Value {
    json!({ "location": [117.0, 40.0], "player": named("GK"), "position": named("Goalkeeper"), "teammate": false })
}

fn shot(index: u64, player: &str, loc: [f64; 2], shot_type: &str, pattern: &str, frame: Option<Value>) -> Value {
    let mut s = json!({
        "statsbomb_xg": 0.12,
        "type": named(shot_type),
        "body_part": named("Right Foot"),
        "technique": named("Normal"),
        "outcome": named("Goal"),
    });
    if let Some(f) = frame {
        s["freeze_frame"] = f;
    }
    json!({
        "index": index,
        "type": named("Shot"),
        "play_pattern": named(pattern),
        "player": named(player),
        "position": named("Center Forward"),
        "location": loc,
        "shot": s,
    })
}

fn pass(index: u64, player: &str, position: &str, foot: &str) -> Value {
    json!({
        "index": index,
        "type": named("Pass"),
        "player": named(player),
        "position": named(position),
        "location": [50.0, 30.0],
        "pass": { "body_part": named(foot) },
    })
}

/// One men's and one women's competition with the given events per match.
fn fixture(matches: &[(u64, Vec<Value>)]) -> TempDir {
    let dir = TempDir::new().unwrap();
    write(
        &dir.path().join("competitions.json"),
        &json!([
            { "competition_id": 2, "season_id": 44, "competition_gender": "male",
              "competition_name": "Premier League", "season_name": "2003/2004" },
            { "competition_id": 37, "season_id": 90, "competition_gender": "female",
              "competition_name": "FA WSL", "season_name": "2020/2021" },
        ]),
    );
    let ids: Vec<Value> = matches.iter().map(|(id, _)| json!({ "match_id": id })).collect();
    write(&dir.path().join("matches/2/44.json"), &Value::Array(ids));
    for (id, events) in matches {
        write(&dir.path().join(format!("events/{id}.json")), &Value::Array(events.clone()));
    }
    dir
}

fn men(dir: &Path) -> Vec<xg_core::ingest::CompetitionRef> {
    select_competitions(&load_competitions(dir).unwrap(), None)
}

#[test]
fn competitions_keep_gender() {
    let dir = fixture(&[]);
    let all = load_competitions(dir.path()).unwrap();
    assert_eq!(all.len(), 2);
    assert_eq!(all[0].gender, Gender::Male);
    assert_eq!(all[1].gender, Gender::Female);
    assert_eq!(men(dir.path()).len(), 1);

    let empty = TempDir::new().unwrap();
    write(&empty.path().join("competitions.json"), &json!([]));
    assert!(load_competitions(empty.path()).unwrap().is_empty());

    let none = TempDir::new().unwrap();
    assert!(matches!(load_competitions(none.path()), Err(Error::MissingFile(_))));
    fs::write(none.path().join("competitions.json"), "[{").unwrap();
    assert!(matches!(load_competitions(none.path()), Err(Error::Parse { .. })));
}

#[test]
fn women_competitions_are_refused() {
    let dir = fixture(&[]);
    let all = load_competitions(dir.path()).unwrap();
    assert!(matches!(extract_shots(dir.path(), &all), Err(Error::InvalidConfig(_))));
}

#[test]
fn passes_only_yield_no_shots() {
    let dir = fixture(&[(1, vec![pass(1, "A", "Center Back", "Left Foot"), pass(2, "B", "Left Back", "Right Foot")])]);
    assert!(extract_shots(dir.path(), &men(dir.path())).unwrap().is_empty());
}

#[test]
fn filters_set_pieces_goal_line_and_missing_frames() {
    let frame = || Some(json!([keeper()]));
    let events = vec![
        pass(1, "Striker", "Center Forward", "Right Foot"),
        shot(2, "Striker", [105.0, 38.0], "Open Play", "Regular Play", frame()),
        shot(3, "Striker", [108.0, 40.0], "Penalty", "Other", frame()),
        shot(4, "Striker", [100.0, 30.0], "Open Play", "From Corner", frame()),
        shot(5, "Striker", [120.0, 39.0], "Open Play", "Regular Play", frame()),
        shot(6, "Striker", [101.0, 41.0], "Open Play", "From Counter", None),
        shot(7, "Striker", [99.0, 45.0], "Open Play", "Other", frame()),
    ];
    let dir = fixture(&[(10, events)]);
    let out = ingest(dir.path(), &men(dir.path())).unwrap();
    let kept: Vec<u64> = out.shots.iter().map(|s| s.event_index).collect();
    assert_eq!(kept, vec![2, 7]);
    assert_eq!(out.stats.shots_seen, 6);
    assert_eq!(out.stats.set_piece_excluded, 2);
    assert_eq!(out.stats.goal_line_excluded, 1);
    assert_eq!(out.stats.missing_freeze_frame, 1);
    assert!(out.shots.iter().all(|s| s.x < 120.0));
}

#[test]
fn out_of_bounds_location_is_an_error() {
    let dir = fixture(&[(1, vec![shot(1, "A", [100.0, 81.0], "Open Play", "Regular Play", Some(json!([keeper()])))])]);
    assert!(matches!(extract_shots(dir.path(), &men(dir.path())), Err(Error::OutOfBounds { .. })));
}

#[test]
fn missing_event_files_are_skipped() {
    let dir = fixture(&[(1, vec![shot(1, "A", [100.0, 40.0], "Open Play", "Regular Play", Some(json!([keeper()])))])]);
    write(&dir.path().join("matches/2/44.json"), &json!([{ "match_id": 1 }, { "match_id": 2 }]));
    let out = ingest(dir.path(), &men(dir.path())).unwrap();
    assert_eq!(out.shots.len(), 1);
    assert_eq!(out.stats.missing_event_files, 1);
}

#[test]
fn output_is_sorted_by_match_then_index() {
    let f = || Some(json!([keeper()]));
    let dir = fixture(&[
        (7, vec![shot(9, "A", [100.0, 40.0], "Open Play", "Regular Play", f()), shot(3, "A", [101.0, 40.0], "Open Play", "Regular Play", f())]),
        (2, vec![shot(5, "B", [102.0, 40.0], "Open Play", "Regular Play", f())]),
    ]);
    let comps = men(dir.path());
    let a = extract_shots(dir.path(), &comps).unwrap();
    let keys: Vec<(u64, u64)> = a.iter().map(|s| (s.match_id, s.event_index)).collect();
    assert_eq!(keys, vec![(2, 5), (7, 3), (7, 9)]);
    assert_eq!(a, extract_shots(dir.path(), &comps).unwrap());
}

#[test]
fn modal_position_and_foot_lookups() {
    let mut events = Vec::new();
    let mut i = 0;
    let mut next = || {
        i += 1;
        i
    };
    for _ in 0..10 {
        events.push(pass(next(), "Forward", "Center Forward", "Left Foot"));
    }
    for _ in 0..2 {
        events.push(pass(next(), "Forward", "Right Wing", "Right Foot"));
    }
    for _ in 0..40 {
        events.push(pass(next(), "Lefty", "Left Back", "Left Foot"));
    }
    for _ in 0..12 {
        events.push(pass(next(), "Lefty", "Left Back", "Right Foot"));
    }
    events.push(pass(next(), "Even", "Center Back", "Left Foot"));
    events.push(pass(next(), "Even", "Left Center Back", "Right Foot"));
    events.push(json!({ "index": next(), "type": named("Shot Block"), "player": named("Quiet"), "position": named("Goalkeeper") }));
    let dir = fixture(&[(1, events)]);
    let d = dir.path();
    assert_eq!(modal_position(d, "Forward").unwrap().label, "Center Forward");
    let tie = modal_position(d, "Even").unwrap();
    assert_eq!((tie.label.as_str(), tie.tied), ("Center Back", true));
    assert!(matches!(modal_position(d, "Nobody"), Err(Error::UnknownPlayer(_))));

    let left = infer_preferred_foot(d, "Lefty").unwrap();
    assert_eq!((left.foot, left.fallback), (Foot::Left, false));
    let even = infer_preferred_foot(d, "Even").unwrap();
    assert_eq!((even.foot, even.fallback), (Foot::Right, true));
    let none = infer_preferred_foot(d, "Quiet").unwrap();
    assert_eq!((none.foot, none.fallback), (Foot::Right, true));
}

#[test]
fn synthetic_open_data_round_trip() {
    let dir = TempDir::new().unwrap();
    let mut cfg = TruthConfig::new(300, 4);
    cfg.intercept = -1.5;
    let truth = write_open_data(dir.path(), &cfg).unwrap();
    let comps = select_competitions(&load_competitions(dir.path()).unwrap(), Some(&[SYNTHETIC_COMPETITION]));
    let out = ingest(dir.path(), &comps).unwrap();
    assert_eq!(out.shots.len(), truth.len());
    assert_eq!(out.stats.foot_fallbacks, 0);
    let rows = engineer_all(&out.shots).unwrap();
    for (a, b) in rows.iter().zip(&truth) {
        assert_eq!(a.player, b.player);
        assert_eq!(a.goal, b.goal);
        assert_eq!(a.general_position, b.general_position);
        assert_eq!(a.body_part, b.body_part);
        assert_eq!(a.technique, b.technique);
        assert!((a.distance_to_goal - b.distance_to_goal).abs() < 1e-9);
        assert!((a.shot_angle - b.shot_angle).abs() < 1e-9);
        assert!((a.gk_distance_to_goal - b.gk_distance_to_goal).abs() < 1e-9);
        assert!(a.opponents_in_radius >= b.opponents_in_radius);
    }

    let raw_path = dir.path().join("raw.csv");
    write_raw_shots_csv(&raw_path, &out.shots).unwrap();
    assert_eq!(read_raw_shots_csv(&raw_path).unwrap(), out.shots);
    let shots_path = dir.path().join("shots.csv");
    write_shots_csv(&shots_path, &rows).unwrap();
    let back = read_shots_csv(&shots_path).unwrap();
    assert_eq!(back.len(), rows.len());
    assert_eq!(back.iter().filter(|r| r.goal).count(), rows.iter().filter(|r| r.goal).count());
}
