//! Evaluation and experiments: prediction metrics, hierarchical xG
//! adjustments, the Bayes-theorem check on positional lifts, conversion
//! tables, goals-vs-xG totals and the prior-sensitivity harness.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{posterior_predict, quantile_sorted, run_hmc, PosteriorSamples, SamplerConfig};
use crate::error::{Error, Result};
use crate::features::design::DesignLayout;
use crate::features::FeatureRow;
use crate::glm::{fit_logistic, predict_proba, Coefficients};
use crate::model_spec::{Feature, Grouping, ModelSpec, PredictorSet, PriorSet};

fn same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Mean squared difference between probabilities and outcomes.
pub fn brier(p: &[f64], y: &[bool]) -> Result<f64> {
    same_len(p.len(), y.len())?;
    let y: Vec<f64> = y.iter().map(|&b| f64::from(u8::from(b))).collect();
    Ok(regression_metrics(p, &y)?.rmse.powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionMetrics {
    pub rmse: f64,
    pub mae: f64,
    /// `1 - SSE/SST`, SST taken about the reference mean.
    pub r2: f64,
}

pub fn regression_metrics(pred: &[f64], reference: &[f64]) -> Result<RegressionMetrics> {
    same_len(pred.len(), reference.len())?;
    if pred.is_empty() {
        return Ok(RegressionMetrics { rmse: 0.0, mae: 0.0, r2: f64::NAN });
    }
    let n = pred.len() as f64;
    let ref_mean = mean(reference);
    let (mut sse, mut sae, mut sst) = (0.0, 0.0, 0.0);
    for (p, r) in pred.iter().zip(reference) {
        sse += (p - r) * (p - r);
        sae += (p - r).abs();
        sst += (r - ref_mean) * (r - ref_mean);
    }
    let r2 = if sst > 0.0 {
        1.0 - sse / sst
    } else if sse == 0.0 {
        1.0
    } else {
        f64::NEG_INFINITY
    };
    Ok(RegressionMetrics {
        rmse: (sse / n).sqrt(),
        mae: sae / n,
        r2,
    })
}

/// Mean of `pred - reference`; positive means `pred` over-predicts.
pub fn msd(pred: &[f64], reference: &[f64]) -> Result<f64> {
    same_len(pred.len(), reference.len())?;
    Ok(pred.iter().zip(reference).map(|(p, r)| p - r).sum::<f64>() / pred.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub model: String,
    pub n: usize,
    pub brier: f64,
    /// Against the StatsBomb xG column.
    pub rmse: f64,
    pub mae: f64,
    pub r2: f64,
    /// Against the comparison predictions (usually the frequentist extended
    /// model); against StatsBomb when none are given.
    pub msd: f64,
}

impl MetricReport {
    pub fn compute(
        model: &str,
        pred: &[f64],
        outcomes: &[bool],
        statsbomb: &[f64],
        comparison: Option<&[f64]>,
    ) -> Result<Self> {
        let m = regression_metrics(pred, statsbomb)?;
        Ok(MetricReport {
            model: model.to_string(),
            n: pred.len(),
            brier: brier(pred, outcomes)?,
            rmse: m.rmse,
            mae: m.mae,
            r2: m.r2,
            msd: msd(pred, comparison.unwrap_or(statsbomb))?,
        })
    }
}

/// Five-number-plus summary of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub q05: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub q95: f64,
    pub max: f64,
}

impl Distribution {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        let mut s = values.to_vec();
        s.sort_by(f64::total_cmp);
        let m = if n == 0 { f64::NAN } else { mean(values) };
        let sd = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Distribution {
            n,
            mean: m,
            sd,
            min: s.first().copied().unwrap_or(f64::NAN),
            q05: quantile_sorted(&s, 0.05),
            q25: quantile_sorted(&s, 0.25),
            q50: quantile_sorted(&s, 0.5),
            q75: quantile_sorted(&s, 0.75),
            q95: quantile_sorted(&s, 0.95),
            max: s.last().copied().unwrap_or(f64::NAN),
        }
    }

    pub fn iqr(&self) -> f64 {
        self.q75 - self.q25
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupAdjustment {
    pub group: String,
    pub adjustment: Distribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentBin {
    pub lower: f64,
    pub upper: f64,
    pub n: usize,
    pub mean_baseline: f64,
    pub mean_hierarchical: f64,
    pub mean_adjustment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjustmentReport {
    /// Hierarchical minus baseline, per shot.
    pub per_shot: Vec<f64>,
    pub groups_per_shot: Vec<String>,
    pub overall_mean: f64,
    /// Sorted by group label.
    pub groups: Vec<GroupAdjustment>,
    pub by_distance: Vec<AdjustmentBin>,
    pub by_angle: Vec<AdjustmentBin>,
}

pub const DISTANCE_BIN: f64 = 5.0;
pub const ANGLE_BIN: f64 = 10.0;

fn binned(key: &[f64], width: f64, base: &[f64], hier: &[f64]) -> Vec<AdjustmentBin> {
    let mut bins: BTreeMap<i64, (usize, f64, f64)> = BTreeMap::new();
    for ((k, b), h) in key.iter().zip(base).zip(hier) {
        let e = bins.entry((k / width).floor() as i64).or_default();
        e.0 += 1;
        e.1 += b;
        e.2 += h;
    }
    bins.into_iter()
        .map(|(i, (n, b, h))| AdjustmentBin {
            lower: i as f64 * width,
            upper: (i + 1) as f64 * width,
            n,
            mean_baseline: b / n as f64,
            mean_hierarchical: h / n as f64,
            mean_adjustment: (h - b) / n as f64,
        })
        .collect()
}

/// Per-shot and per-group differences between hierarchical and baseline
/// predictions, with curves binned by distance and angle.
pub fn xg_adjustments(
    hier: &[f64],
    baseline: &[f64],
    groups: &[String],
    distance: &[f64],
    angle: &[f64],
) -> Result<AdjustmentReport> {
    same_len(hier.len(), baseline.len())?;
    if groups.len() != hier.len() {
        return Err(Error::GroupMismatch);
    }
    same_len(distance.len(), hier.len())?;
    same_len(angle.len(), hier.len())?;
    let per_shot: Vec<f64> = hier.iter().zip(baseline).map(|(h, b)| h - b).collect();
    let mut by_group: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for (g, a) in groups.iter().zip(&per_shot) {
        by_group.entry(g).or_default().push(*a);
    }
    Ok(AdjustmentReport {
        overall_mean: if per_shot.is_empty() { 0.0 } else { mean(&per_shot) },
        groups: by_group
            .into_iter()
            .map(|(g, v)| GroupAdjustment {
                group: g.to_string(),
                adjustment: Distribution::of(&v),
            })
            .collect(),
        by_distance: binned(distance, DISTANCE_BIN, baseline, hier),
        by_angle: binned(angle, ANGLE_BIN, baseline, hier),
        per_shot,
        groups_per_shot: groups.to_vec(),
    })
}

impl AdjustmentReport {
    pub fn group_mean(&self, group: &str) -> Option<f64> {
        self.groups.iter().find(|g| g.group == group).map(|g| g.adjustment.mean)
    }
}

/// Group label of every row under the fitted layout. Rows outside the
/// fitted levels get `"unseen"`.
pub fn group_labels(layout: &DesignLayout, rows: &[FeatureRow]) -> Vec<String> {
    let design = layout.apply(rows);
    match design.group_index {
        Some(idx) => idx
            .iter()
            .map(|k| match k {
                Some(k) => layout.group_levels[*k].clone(),
                None => "unseen".to_string(),
            })
            .collect(),
        None => vec!["all".to_string(); rows.len()],
    }
}

/// Posterior-mean probabilities of a fit on new rows.
pub fn hierarchical_predictions(samples: &PosteriorSamples, rows: &[FeatureRow]) -> Result<Vec<f64>> {
    Ok(posterior_predict(samples, &samples.layout.apply(rows))?.mean)
}

pub fn frequentist_predictions(coefs: &Coefficients, rows: &[FeatureRow]) -> Result<Vec<f64>> {
    predict_proba(coefs, &coefs.layout.apply(rows))
}

/// Adjustment report of a hierarchical fit against a single-level baseline
/// prediction vector on the same rows.
pub fn model_adjustments(samples: &PosteriorSamples, baseline: &[f64], rows: &[FeatureRow]) -> Result<AdjustmentReport> {
    let hier = hierarchical_predictions(samples, rows)?;
    let groups = group_labels(&samples.layout, rows);
    let distance: Vec<f64> = rows.iter().map(|r| r.distance_to_goal).collect();
    let angle: Vec<f64> = rows.iter().map(|r| r.shot_angle).collect();
    xg_adjustments(&hier, baseline, &groups, &distance, &angle)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalAdjustment {
    pub group: String,
    pub shots: usize,
    pub goals: usize,
    /// `P(k)`, the group's share of shots.
    pub share: f64,
    /// `P(k | goal)`.
    pub share_of_goals: f64,
    /// `P(k | goal) / P(k)`.
    pub lift: f64,
    /// Mean of `clamp(p r, 0, 1) - p` over the group's shots.
    pub mean_adjustment: f64,
}

/// Adjustment implied by Bayes' theorem: a goal-scoring group's shots are
/// scaled by how over-represented the group is among goals.
pub fn bayes_theorem_adjustment(
    baseline: &[f64],
    groups: &[String],
    outcomes: &[bool],
    levels: &[String],
) -> Result<Vec<TheoreticalAdjustment>> {
    same_len(baseline.len(), outcomes.len())?;
    if groups.len() != baseline.len() {
        return Err(Error::GroupMismatch);
    }
    let mut shots = vec![0usize; levels.len()];
    let mut goals = vec![0usize; levels.len()];
    let mut idx = Vec::with_capacity(groups.len());
    for (g, &y) in groups.iter().zip(outcomes) {
        let k = levels.iter().position(|l| l == g).ok_or(Error::GroupMismatch)?;
        shots[k] += 1;
        goals[k] += usize::from(y);
        idx.push(k);
    }
    if let Some(k) = shots.iter().position(|&s| s == 0) {
        return Err(Error::EmptyGroup(levels[k].clone()));
    }
    let total_goals: usize = goals.iter().sum();
    if total_goals == 0 {
        return Err(Error::EmptyGroup("goals".into()));
    }
    let n = groups.len() as f64;
    let lift: Vec<f64> = (0..levels.len())
        .map(|k| (goals[k] as f64 / total_goals as f64) / (shots[k] as f64 / n))
        .collect();
    let mut sum = vec![0.0; levels.len()];
    for (&k, &p) in idx.iter().zip(baseline) {
        sum[k] += (p * lift[k]).clamp(0.0, 1.0) - p;
    }
    Ok((0..levels.len())
        .map(|k| TheoreticalAdjustment {
            group: levels[k].clone(),
            shots: shots[k],
            goals: goals[k],
            share: shots[k] as f64 / n,
            share_of_goals: goals[k] as f64 / total_goals as f64,
            lift: lift[k],
            mean_adjustment: sum[k] / shots[k] as f64,
        })
        .collect())
}

pub const MIN_SHOTS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversionRow {
    pub player: String,
    pub shots: usize,
    pub goals: usize,
    pub conversion: f64,
}

impl ConversionRow {
    /// Conversion as a percentage with one decimal, e.g. `25.0%`.
    pub fn percent(&self) -> String {
        format!("{:.1}%", 100.0 * self.conversion)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConversionTable {
    pub min_shots: usize,
    pub rows: Vec<ConversionRow>,
}

/// Players with at least `min_shots` shots, best conversion first. Ties
/// break on more shots, then name.
pub fn select_players(shots: &[FeatureRow], min_shots: usize) -> ConversionTable {
    let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in shots {
        let e = tally.entry(&r.player).or_default();
        e.0 += 1;
        e.1 += usize::from(r.goal);
    }
    let mut rows: Vec<ConversionRow> = tally
        .into_iter()
        .filter(|(_, (s, _))| *s >= min_shots)
        .map(|(p, (s, g))| ConversionRow {
            player: p.to_string(),
            shots: s,
            goals: g,
            conversion: g as f64 / s as f64,
        })
        .collect();
    rows.sort_by(|a, b| {
        // Compare g_a/s_a with g_b/s_b exactly by cross-multiplying.
        (b.goals * a.shots)
            .cmp(&(a.goals * b.shots))
            .then(b.shots.cmp(&a.shots))
            .then(a.player.cmp(&b.player))
    });
    ConversionTable { min_shots, rows }
}

impl ConversionTable {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv_writer(path)?;
        w.write_record(["player", "shots", "goals", "conversion", "conversion_pct"])?;
        for r in &self.rows {
            w.write_record([
                r.player.clone(),
                r.shots.to_string(),
                r.goals.to_string(),
                crate::csvfmt::fmt6(r.conversion),
                r.percent(),
            ])?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerTotals {
    pub player: String,
    pub shots: usize,
    pub goals: usize,
    pub baseline_xg: f64,
    pub adjusted_xg: f64,
}

impl PlayerTotals {
    /// True when the hierarchical total is at least as close to the goal
    /// count as the baseline total.
    pub fn adjusted_is_closer(&self) -> bool {
        (self.adjusted_xg - self.goals as f64).abs() <= (self.baseline_xg - self.goals as f64).abs()
    }
}

/// Goals, baseline xG and hierarchical xG summed per requested player. The
/// players must be levels of a player-grouped fit.
pub fn totals_report(
    samples: &PosteriorSamples,
    baseline: &Coefficients,
    shots: &[FeatureRow],
    players: &[String],
) -> Result<Vec<PlayerTotals>> {
    for p in players {
        if !samples.layout.group_levels.contains(p) {
            return Err(Error::MissingPlayer(p.clone()));
        }
    }
    let mine: Vec<FeatureRow> = shots.iter().filter(|r| players.contains(&r.player)).cloned().collect();
    let (hier, base) = if mine.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        (hierarchical_predictions(samples, &mine)?, frequentist_predictions(baseline, &mine)?)
    };
    Ok(players
        .iter()
        .map(|p| {
            let mut t = PlayerTotals {
                player: p.clone(),
                shots: 0,
                goals: 0,
                baseline_xg: 0.0,
                adjusted_xg: 0.0,
            };
            for ((r, h), b) in mine.iter().zip(&hier).zip(&base) {
                if &r.player == p {
                    t.shots += 1;
                    t.goals += usize::from(r.goal);
                    t.baseline_xg += b;
                    t.adjusted_xg += h;
                }
            }
            t
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorSetResult {
    pub prior_set: PriorSet,
    pub seed: u64,
    /// Posterior-mean predictions per shot.
    pub predictions: Distribution,
    /// Share of predictions above 0.5.
    pub above_half: f64,
    /// Per-shot `prediction - frequentist`; its mean is the MSD.
    pub deviation: Distribution,
    pub msd: f64,
    pub mean_accept_stat: f64,
    pub divergence_rate: f64,
    pub max_rhat: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PriorSensitivityEntry {
    pub prior_set: PriorSet,
    pub result: Option<PriorSetResult>,
    pub error: Option<String>,
    #[serde(skip)]
    pub per_shot: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PriorSensitivityReport {
    pub n_shots: usize,
    pub frequentist: Distribution,
    pub entries: Vec<PriorSensitivityEntry>,
    #[serde(skip)]
    pub frequentist_per_shot: Vec<f64>,
}

impl PriorSensitivityReport {
    pub fn result(&self, set: PriorSet) -> Option<&PriorSetResult> {
        self.entries.iter().find(|e| e.prior_set == set).and_then(|e| e.result.as_ref())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    /// Long-format per-shot predictions and deviations from the frequentist
    /// fit, one line per (prior set, shot).
    pub fn write_deviations_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv_writer(path)?;
        w.write_record(["prior_set", "shot", "prediction", "frequentist", "deviation"])?;
        for e in &self.entries {
            for (i, (p, f)) in e.per_shot.iter().zip(&self.frequentist_per_shot).enumerate() {
                w.write_record([
                    e.prior_set.label().to_string(),
                    i.to_string(),
                    crate::csvfmt::fmt6(*p),
                    crate::csvfmt::fmt6(*f),
                    crate::csvfmt::fmt6(p - f),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Fits the single-level extended model under each prior set and compares
/// the predictions with the frequentist extended fit. Sets run concurrently;
/// set `i` uses seed `config.seed + i`. A failing set is reported and does
/// not stop the others.
pub fn prior_sensitivity(
    rows: &[FeatureRow],
    sets: &[PriorSet],
    config: &SamplerConfig,
) -> Result<PriorSensitivityReport> {
    let outcomes: Vec<bool> = rows.iter().map(|r| r.goal).collect();
    let base_spec = ModelSpec::new(PredictorSet::Extended, Grouping::None);
    let layout = DesignLayout::learn(rows, &base_spec.predictors, &base_spec.grouping)?;
    let design = layout.apply(rows);
    let freq = predict_proba(&fit_logistic(&design, &outcomes)?, &design)?;
    let entries = sets
        .par_iter()
        .enumerate()
        .map(|(i, &set)| {
            let cfg = SamplerConfig {
                seed: config.seed.wrapping_add(i as u64),
                ..config.clone()
            };
            let spec = base_spec.clone().with_prior_set(set);
            let run = run_hmc(&spec, &design, &outcomes, &cfg).and_then(|s| {
                let pred = posterior_predict(&s, &design)?.mean;
                Ok((s, pred))
            });
            match run {
                Ok((s, pred)) => {
                    let dev: Vec<f64> = pred.iter().zip(&freq).map(|(p, f)| p - f).collect();
                    let max_rhat = s.summary().iter().map(|p| p.rhat).fold(f64::NEG_INFINITY, f64::max);
                    PriorSensitivityEntry {
                        prior_set: set,
                        result: Some(PriorSetResult {
                            prior_set: set,
                            seed: cfg.seed,
                            predictions: Distribution::of(&pred),
                            above_half: pred.iter().filter(|&&p| p > 0.5).count() as f64 / pred.len() as f64,
                            msd: mean(&dev),
                            deviation: Distribution::of(&dev),
                            mean_accept_stat: s.mean_accept_stat(),
                            divergence_rate: s.divergence_rate,
                            max_rhat,
                        }),
                        error: None,
                        per_shot: pred,
                    }
                }
                Err(e) => {
                    log::error!("prior set {} failed: {e}", set.label());
                    PriorSensitivityEntry {
                        prior_set: set,
                        result: None,
                        error: Some(e.to_string()),
                        per_shot: Vec::new(),
                    }
                }
            }
        })
        .collect();
    Ok(PriorSensitivityReport {
        n_shots: rows.len(),
        frequentist: Distribution::of(&freq),
        entries,
        frequentist_per_shot: freq,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n_features: usize,
    pub added: Feature,
    /// Design columns excluding the intercept.
    pub n_columns: usize,
    pub brier: f64,
    pub rmse: f64,
    pub mae: f64,
    pub r2: f64,
}

/// Frequentist fits that add the canonical features one at a time, scored
/// in-sample against outcomes and the StatsBomb column.
pub fn feature_sweep(rows: &[FeatureRow]) -> Result<Vec<SweepPoint>> {
    let outcomes: Vec<bool> = rows.iter().map(|r| r.goal).collect();
    let statsbomb: Vec<f64> = rows.iter().map(|r| r.statsbomb_xg).collect();
    (1..=Feature::CANONICAL.len())
        .into_par_iter()
        .map(|k| {
            let predictors = PredictorSet::Custom(Feature::CANONICAL[..k].to_vec());
            let design = DesignLayout::learn(rows, &predictors, &Grouping::None)?.apply(rows);
            let pred = predict_proba(&fit_logistic(&design, &outcomes)?, &design)?;
            let m = regression_metrics(&pred, &statsbomb)?;
            Ok(SweepPoint {
                n_features: k,
                added: Feature::CANONICAL[k - 1],
                n_columns: design.n_columns(),
                brier: brier(&pred, &outcomes)?,
                rmse: m.rmse,
                mae: m.mae,
                r2: m.r2,
            })
        })
        .collect()
}

/// Deterministic random subset of `n` rows, kept in their original order.
/// Returns every row when `n >= rows.len()`.
pub fn subsample(rows: &[FeatureRow], n: usize, seed: u64) -> Vec<FeatureRow> {
    if n >= rows.len() {
        return rows.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, rows.len(), n).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| rows[i].clone()).collect()
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

/// Writes serializable records as CSV with a header row.
pub fn write_records_csv<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let mut w = csv_writer(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let text = serde_json::to_string_pretty(value)?;
    writeln!(f, "{text}").map_err(|e| Error::io(path, e))
}

impl AdjustmentReport {
    /// Per-shot adjustments alongside both predictions.
    pub fn write_per_shot_csv(&self, path: &Path, baseline: &[f64]) -> Result<()> {
        let mut w = csv_writer(path)?;
        w.write_record(["shot", "group", "baseline", "hierarchical", "adjustment"])?;
        for (i, ((g, a), b)) in self.groups_per_shot.iter().zip(&self.per_shot).zip(baseline).enumerate() {
            w.write_record([
                i.to_string(),
                g.clone(),
                crate::csvfmt::fmt6(*b),
                crate::csvfmt::fmt6(b + a),
                crate::csvfmt::fmt6(*a),
            ])?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn write_groups_csv(&self, path: &Path) -> Result<()> {
        let rows: Vec<GroupRow> = self
            .groups
            .iter()
            .map(|g| GroupRow {
                group: g.group.clone(),
                n: g.adjustment.n,
                mean: g.adjustment.mean,
                sd: g.adjustment.sd,
                q05: g.adjustment.q05,
                q25: g.adjustment.q25,
                q50: g.adjustment.q50,
                q75: g.adjustment.q75,
                q95: g.adjustment.q95,
            })
            .collect();
        write_records_csv(path, &rows)
    }

    pub fn write_curves_csv(&self, path: &Path) -> Result<()> {
        let rows: Vec<CurveRow> = [("distance_to_goal", &self.by_distance), ("shot_angle", &self.by_angle)]
            .into_iter()
            .flat_map(|(axis, bins)| {
                bins.iter().map(move |b| CurveRow {
                    axis,
                    lower: b.lower,
                    upper: b.upper,
                    n: b.n,
                    mean_baseline: b.mean_baseline,
                    mean_hierarchical: b.mean_hierarchical,
                    mean_adjustment: b.mean_adjustment,
                })
            })
            .collect();
        write_records_csv(path, &rows)
    }
}

#[derive(Serialize)]
struct GroupRow {
    group: String,
    n: usize,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    mean: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    sd: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    q05: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    q25: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    q50: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    q75: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    q95: f64,
}

#[derive(Serialize)]
struct CurveRow {
    axis: &'static str,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    lower: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    upper: f64,
    n: usize,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    mean_baseline: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    mean_hierarchical: f64,
    #[serde(serialize_with = "crate::csvfmt::f6::serialize")]
    mean_adjustment: f64,
}
