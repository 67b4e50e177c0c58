//! Subcommand bodies. Each one resolves its configuration, loads shots,
//! calls into `xg_core` and records its outputs in the manifest.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use log::info;
use serde::Serialize;
use xg_core::analysis::{
    bayes_theorem_adjustment, feature_sweep, frequentist_predictions, model_adjustments, prior_sensitivity,
    select_players, subsample, totals_report, write_json, write_records_csv, Distribution, MetricReport,
};
use xg_core::bayes::{posterior_predict, run_hmc, PosteriorSamples, SamplerManifest};
use xg_core::csvfmt::f6;
use xg_core::features::{build_design_matrix, engineer_all, filter_competitions, read_shots_csv, write_shots_csv, FeatureRow};
use xg_core::glm::{fit_logistic, Coefficients};
use xg_core::ingest::{ingest, load_competitions, read_raw_shots_csv, select_competitions, write_raw_shots_csv, CompetitionRef};
use xg_core::model_spec::{Grouping, ModelSpec, PredictorSet, PriorSet};
use xg_core::shot::GeneralPosition;
use xg_core::synth::{generate_shots, write_open_data, TruthConfig};

use crate::config::{BaselineKind, GroupingKind, Method, RunConfig};
use crate::manifest::Manifest;
use crate::{Command, CommonArgs, SynthArgs, ValidationError};

/// Output directory plus the manifest being assembled for it.
struct Run {
    out: PathBuf,
    manifest: Manifest,
}

impl Run {
    fn start(command: &str, argv: Vec<String>, out: &Path, config: impl Serialize) -> anyhow::Result<Self> {
        std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
        Ok(Run {
            out: out.to_path_buf(),
            manifest: Manifest::new(command, argv, config)?,
        })
    }

    /// Path of an output file, recorded in the manifest.
    fn file(&mut self, name: &str) -> PathBuf {
        self.manifest.output(name);
        self.out.join(name)
    }

    fn finish(self) -> anyhow::Result<()> {
        self.manifest.write(&self.out)?;
        info!("wrote {} files to {}", self.manifest.outputs.len() + 1, self.out.display());
        Ok(())
    }
}

pub fn dispatch(command: Command, argv: Vec<String>) -> anyhow::Result<()> {
    match command {
        Command::Ingest(c) => cmd_ingest(&c, argv),
        Command::Features { common, raw } => cmd_features(&common, raw.as_deref(), argv),
        Command::Fit(c) => cmd_fit(&c, argv),
        Command::Adjustments(c) => cmd_adjustments(&c, argv),
        Command::ValidateBayes(c) => cmd_validate_bayes(&c, argv),
        Command::Players(c) => cmd_players(&c, argv),
        Command::Totals(c) => cmd_totals(&c, argv),
        Command::PriorSensitivity { common, sets } => {
            let sets: Vec<PriorSet> = if sets.is_empty() {
                PriorSet::ALL.to_vec()
            } else {
                sets.into_iter().map(Into::into).collect()
            };
            cmd_prior_sensitivity(&common, &sets, argv)
        }
        Command::FeatureSweep(c) => cmd_feature_sweep(&c, argv),
        Command::Synth(s) => cmd_synth(&s, argv),
    }
}

fn resolve(args: &CommonArgs) -> anyhow::Result<RunConfig> {
    let cfg = args.resolve()?;
    cfg.validate()?;
    Ok(cfg)
}

/// Competitions to ingest. Requested ids are passed through whatever their
/// gender so that ingestion can refuse women's competitions; without a
/// filter every men's competition is used.
fn competitions(cfg: &RunConfig, data_dir: &Path) -> anyhow::Result<Vec<CompetitionRef>> {
    let all = load_competitions(data_dir)?;
    let selected: Vec<CompetitionRef> = match &cfg.competitions {
        Some(ids) => all.into_iter().filter(|c| ids.contains(&c.competition_id)).collect(),
        None => select_competitions(&all, None),
    };
    if selected.is_empty() {
        return Err(ValidationError("no matching competitions in competitions.json".into()).into());
    }
    Ok(selected)
}

fn data_dir(cfg: &RunConfig) -> anyhow::Result<&Path> {
    cfg.data_dir
        .as_deref()
        .ok_or_else(|| ValidationError("--data-dir is required".into()).into())
}

/// Canonical shots for a run: read from `--shots`, or ingested and engineered
/// from the data directory (then saved as `shots.csv`), filtered by
/// competition and optionally subsampled.
fn load_shots(cfg: &RunConfig, run: &mut Run) -> anyhow::Result<Vec<FeatureRow>> {
    let rows = match &cfg.shots {
        Some(path) => {
            let rows = read_shots_csv(path)?;
            run.manifest.input(path)?;
            rows
        }
        None => {
            let dir = data_dir(cfg)?;
            run.manifest.input(&dir.join("competitions.json"))?;
            let comps = competitions(cfg, dir)?;
            let rows = engineer_all(&ingest(dir, &comps)?.shots)?;
            let path = run.file("shots.csv");
            write_shots_csv(&path, &rows)?;
            rows
        }
    };
    let mut rows = filter_competitions(rows, cfg.competitions.as_deref());
    if let Some(n) = cfg.subsample {
        rows = subsample(&rows, n, cfg.sampler.seed);
    }
    if rows.is_empty() {
        bail!("no shots left after filtering");
    }
    info!("{} shots", rows.len());
    Ok(rows)
}

fn outcomes(rows: &[FeatureRow]) -> Vec<bool> {
    rows.iter().map(|r| r.goal).collect()
}

fn statsbomb(rows: &[FeatureRow]) -> Vec<f64> {
    rows.iter().map(|r| r.statsbomb_xg).collect()
}

fn model_label(spec: &ModelSpec, method: &str) -> String {
    format!("{method}_{}_{}", spec.predictors.label(), spec.grouping.label())
}

#[derive(Serialize)]
struct PredictionRow<'a> {
    match_id: u64,
    event_index: u64,
    player: &'a str,
    general_position: GeneralPosition,
    goal: u8,
    #[serde(serialize_with = "f6::serialize")]
    statsbomb_xg: f64,
    #[serde(serialize_with = "f6::serialize")]
    xg: f64,
    #[serde(serialize_with = "f6::serialize")]
    lower: f64,
    #[serde(serialize_with = "f6::serialize")]
    upper: f64,
}

fn write_predictions(path: &Path, rows: &[FeatureRow], mean: &[f64], lower: &[f64], upper: &[f64]) -> anyhow::Result<()> {
    let records: Vec<PredictionRow> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| PredictionRow {
            match_id: r.match_id,
            event_index: r.event_index,
            player: &r.player,
            general_position: r.general_position,
            goal: u8::from(r.goal),
            statsbomb_xg: r.statsbomb_xg,
            xg: mean[i],
            lower: lower[i],
            upper: upper[i],
        })
        .collect();
    write_records_csv(path, &records)?;
    Ok(())
}

#[derive(Serialize)]
struct MetricRow {
    model: String,
    n: usize,
    #[serde(serialize_with = "f6::serialize")]
    brier: f64,
    #[serde(serialize_with = "f6::serialize")]
    rmse: f64,
    #[serde(serialize_with = "f6::serialize")]
    mae: f64,
    #[serde(serialize_with = "f6::serialize")]
    r2: f64,
    #[serde(serialize_with = "f6::serialize")]
    msd: f64,
}

impl From<&MetricReport> for MetricRow {
    fn from(m: &MetricReport) -> Self {
        MetricRow {
            model: m.model.clone(),
            n: m.n,
            brier: m.brier,
            rmse: m.rmse,
            mae: m.mae,
            r2: m.r2,
            msd: m.msd,
        }
    }
}

fn write_metrics(path: &Path, reports: &[MetricReport]) -> anyhow::Result<()> {
    let rows: Vec<MetricRow> = reports.iter().map(MetricRow::from).collect();
    write_records_csv(path, &rows)?;
    Ok(())
}

/// Single-level frequentist fit of the given predictors.
fn fit_frequentist(rows: &[FeatureRow], predictors: &PredictorSet) -> anyhow::Result<Coefficients> {
    let spec = ModelSpec::new(predictors.clone(), Grouping::None);
    let design = build_design_matrix(rows, &spec)?;
    let coefs = fit_logistic(&design, &outcomes(rows))?;
    if coefs.separation {
        log::warn!("possible separation in the {} frequentist fit", predictors.label());
    }
    Ok(coefs)
}

fn fit_bayes(rows: &[FeatureRow], spec: &ModelSpec, cfg: &RunConfig) -> anyhow::Result<PosteriorSamples> {
    let design = build_design_matrix(rows, spec)?;
    info!(
        "sampling {} ({} chains x {} iterations)",
        model_label(spec, "bayes"),
        cfg.sampler.chains,
        cfg.sampler.draws
    );
    let samples = run_hmc(spec, &design, &outcomes(rows), &cfg.sampler)?;
    if samples.divergence_flagged {
        log::warn!("divergence rate {:.3} exceeds the flag threshold", samples.divergence_rate);
    }
    Ok(samples)
}

fn write_samples(run: &mut Run, samples: &PosteriorSamples, prefix: &str) -> anyhow::Result<()> {
    samples.write_draws_csv(&run.file(&format!("{prefix}draws.csv")))?;
    write_records_csv(&run.file(&format!("{prefix}summary.csv")), &samples.summary())?;
    write_json(&run.file(&format!("{prefix}sampler.json")), &SamplerManifest::new(samples))?;
    Ok(())
}

fn cmd_ingest(args: &CommonArgs, argv: Vec<String>) -> anyhow::Result<()> {
    let cfg = args.resolve()?;
    let dir = data_dir(&cfg)?;
    let mut run = Run::start("ingest", argv, &cfg.out, &cfg)?;
    run.manifest.input(&dir.join("competitions.json"))?;
    let out = ingest(dir, &competitions(&cfg, dir)?)?;
    write_raw_shots_csv(&run.file("raw_shots.csv"), &out.shots)?;
    write_json(&run.file("ingest_stats.json"), &out.stats)?;
    run.finish()
}

fn cmd_features(args: &CommonArgs, raw: Option<&Path>, argv: Vec<String>) -> anyhow::Result<()> {
    let cfg = args.resolve()?;
    let mut run = Run::start("features", argv, &cfg.out, &cfg)?;
    let shots = match raw {
        Some(path) => {
            let shots = read_raw_shots_csv(path)?;
            run.manifest.input(path)?;
            shots
        }
        None => {
            let dir = data_dir(&cfg)?;
            run.manifest.input(&dir.join("competitions.json"))?;
            let out = ingest(dir, &competitions(&cfg, dir)?)?;
            write_json(&run.file("ingest_stats.json"), &out.stats)?;
            out.shots
        }
    };
    let rows = filter_competitions(engineer_all(&shots)?, cfg.competitions.as_deref());
    write_shots_csv(&run.file("shots.csv"), &rows)?;
    run.finish()
}

fn cmd_fit(args: &CommonArgs, argv: Vec<String>) -> anyhow::Result<()> {
    let cfg = resolve(args)?;
    let mut run = Run::start("fit", argv, &cfg.out, &cfg)?;
    let rows = load_shots(&cfg, &mut run)?;
    let y = outcomes(&rows);
    let sb = statsbomb(&rows);
    let spec = cfg.spec();
    let mut reports = Vec::new();
    match cfg.method {
        Method::Freq => {
            let coefs = fit_frequentist(&rows, &spec.predictors)?;
            coefs.write_json(&run.file("coefficients.json"))?;
            let pred = frequentist_predictions(&coefs, &rows)?;
            write_predictions(&run.file("predictions.csv"), &rows, &pred, &pred, &pred)?;
            reports.push(MetricReport::compute(&model_label(&spec, "freq"), &pred, &y, &sb, None)?);
        }
        Method::Bayes => {
            run.manifest.seeds(cfg.sampler.seed, cfg.sampler.chains);
            let samples = fit_bayes(&rows, &spec, &cfg)?;
            write_samples(&mut run, &samples, "")?;
            let pred = posterior_predict(&samples, &samples.layout.apply(&rows))?;
            write_predictions(&run.file("predictions.csv"), &rows, &pred.mean, &pred.lower, &pred.upper)?;
            let reference = frequentist_predictions(&fit_frequentist(&rows, &PredictorSet::Extended)?, &rows)?;
            reports.push(MetricReport::compute(&model_label(&spec, "bayes"), &pred.mean, &y, &sb, Some(&reference))?);
        }
    }
    reports.push(MetricReport::compute("statsbomb", &sb, &y, &sb, None)?);
    write_metrics(&run.file("metrics.csv"), &reports)?;
    run.finish()
}

/// Predictions of the single-level model that adjustments are measured
/// against: same predictors, no grouping.
fn baseline_predictions(rows: &[FeatureRow], cfg: &RunConfig, run: &mut Run) -> anyhow::Result<Vec<f64>> {
    match cfg.baseline {
        BaselineKind::Freq => {
            let coefs = fit_frequentist(rows, &cfg.model.predictors())?;
            coefs.write_json(&run.file("baseline_coefficients.json"))?;
            Ok(frequentist_predictions(&coefs, rows)?)
        }
        BaselineKind::Bayes => {
            let spec = cfg.spec_with(Grouping::None);
            let samples = fit_bayes(rows, &spec, cfg)?;
            write_json(&run.file("baseline_sampler.json"), &SamplerManifest::new(&samples))?;
            Ok(posterior_predict(&samples, &samples.layout.apply(rows))?.mean)
        }
    }
}

fn require_hierarchical(cfg: &RunConfig, command: &str) -> Result<(), ValidationError> {
    if cfg.method != Method::Bayes || cfg.grouping == GroupingKind::None {
        return Err(ValidationError(format!(
            "{command} needs --method bayes with --grouping position or player"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct AdjustmentSummary<'a> {
    model: String,
    baseline: BaselineKind,
    n_shots: usize,
    overall_mean: f64,
    groups: &'a [xg_core::analysis::GroupAdjustment],
    by_distance: &'a [xg_core::analysis::AdjustmentBin],
    by_angle: &'a [xg_core::analysis::AdjustmentBin],
}

fn cmd_adjustments(args: &CommonArgs, argv: Vec<String>) -> anyhow::Result<()> {
    let cfg = resolve(args)?;
    require_hierarchical(&cfg, "adjustments")?;
    let mut run = Run::start("adjustments", argv, &cfg.out, &cfg)?;
    run.manifest.seeds(cfg.sampler.seed, cfg.sampler.chains);
    let rows = load_shots(&cfg, &mut run)?;
    let spec = cfg.spec();
    let samples = fit_bayes(&rows, &spec, &cfg)?;
    write_samples(&mut run, &samples, "")?;
    let baseline = baseline_predictions(&rows, &cfg, &mut run)?;
    let report = model_adjustments(&samples, &baseline, &rows)?;
    report.write_per_shot_csv(&run.file("adjustments_per_shot.csv"), &baseline)?;
    report.write_groups_csv(&run.file("adjustments_groups.csv"))?;
    report.write_curves_csv(&run.file("adjustments_curves.csv"))?;
    write_json(
        &run.file("adjustments.json"),
        &AdjustmentSummary {
            model: model_label(&spec, "bayes"),
            baseline: cfg.baseline,
            n_shots: rows.len(),
            overall_mean: report.overall_mean,
            groups: &report.groups,
            by_distance: &report.by_distance,
            by_angle: &report.by_angle,
        },
    )?;
    run.finish()
}

#[derive(Serialize)]
struct ValidationRow {
    position: String,
    shots: usize,
    goals: usize,
    #[serde(serialize_with = "f6::serialize")]
    share: f64,
    #[serde(serialize_with = "f6::serialize")]
    share_of_goals: f64,
    #[serde(serialize_with = "f6::serialize")]
    lift: f64,
    #[serde(serialize_with = "f6::serialize")]
    theoretical: f64,
    #[serde(serialize_with = "f6::serialize")]
    model: f64,
    #[serde(serialize_with = "f6::serialize")]
    difference: f64,
}

fn cmd_validate_bayes(args: &CommonArgs, argv: Vec<String>) -> anyhow::Result<()> {
    let mut cfg = args.resolve()?;
    if cfg.grouping == GroupingKind::Player {
        return Err(ValidationError("validate-bayes uses position grouping".into()).into());
    }
    cfg.method = Method::Bayes;
    cfg.grouping = GroupingKind::Position;
    cfg.validate()?;
    let mut run = Run::start("validate-bayes", argv, &cfg.out, &cfg)?;
    run.manifest.seeds(cfg.sampler.seed, cfg.sampler.chains);
    let rows = load_shots(&cfg, &mut run)?;
    let samples = fit_bayes(&rows, &cfg.spec(), &cfg)?;
    write_samples(&mut run, &samples, "")?;
    let baseline = baseline_predictions(&rows, &cfg, &mut run)?;
    let report = model_adjustments(&samples, &baseline, &rows)?;
    let theory = bayes_theorem_adjustment(&baseline, &report.groups_per_shot, &outcomes(&rows), &samples.layout.group_levels)?;
    let table: Vec<ValidationRow> = theory
        .iter()
        .map(|t| {
            let model = report.group_mean(&t.group).unwrap_or(0.0);
            ValidationRow {
                position: t.group.clone(),
                shots: t.shots,
                goals: t.goals,
                share: t.share,
                share_of_goals: t.share_of_goals,
                lift: t.lift,
                theoretical: t.mean_adjustment,
                model,
                difference: model - t.mean_adjustment,
            }
        })
        .collect();
    write_records_csv(&run.file("validate_bayes.csv"), &table)?;
    write_json(&run.file("validate_bayes.json"), &serde_json::json!({ "theoretical": theory, "model": report.groups }))?;
    run.finish()
}

fn cmd_players(args: &CommonArgs, argv: Vec<String>) -> anyhow::Result<()> {
    let cfg = resolve(args)?;
    let mut run = Run::start("players", argv, &cfg.out, &cfg)?;
    let rows = load_shots(&cfg, &mut run)?;
    select_players(&rows, cfg.min_shots).write_csv(&run.file("players.csv"))?;
    run.finish()
}

#[derive(Serialize)]
struct TotalsRow {
    player: String,
    shots: usize,
    goals: usize,
    #[serde(serialize_with = "f6::serialize")]
    baseline_xg: f64,
    #[serde(serialize_with = "f6::serialize")]
    adjusted_xg: f64,
    adjusted_is_closer: bool,
}

fn cmd_totals(args: &CommonArgs, argv: Vec<String>) -> anyhow::Result<()> {
    let mut cfg = args.resolve()?;
    cfg.method = Method::Bayes;
    cfg.grouping = GroupingKind::Player;
    cfg.validate()?;
    let mut run = Run::start("totals", argv, &cfg.out, &cfg)?;
    run.manifest.seeds(cfg.sampler.seed, cfg.sampler.chains);
    let rows = load_shots(&cfg, &mut run)?;
    for p in &cfg.players {
        if !rows.iter().any(|r| &r.player == p) {
            return Err(xg_core::Error::UnknownPlayer(p.clone()).into());
        }
    }
    let samples = fit_bayes(&rows, &cfg.spec(), &cfg)?;
    write_samples(&mut run, &samples, "")?;
    let baseline = fit_frequentist(&rows, &cfg.model.predictors())?;
    let totals = totals_report(&samples, &baseline, &rows, &cfg.players)?;
    let table: Vec<TotalsRow> = totals
        .iter()
        .map(|t| TotalsRow {
            player: t.player.clone(),
            shots: t.shots,
            goals: t.goals,
            baseline_xg: t.baseline_xg,
            adjusted_xg: t.adjusted_xg,
            adjusted_is_closer: t.adjusted_is_closer(),
        })
        .collect();
    write_records_csv(&run.file("totals.csv"), &table)?;
    write_json(&run.file("totals.json"), &totals)?;
    run.finish()
}

#[derive(Serialize)]
struct SensitivityRow {
    prior_set: &'static str,
    seed: Option<u64>,
    #[serde(serialize_with = "opt6")]
    mean: Option<f64>,
    #[serde(serialize_with = "opt6")]
    sd: Option<f64>,
    #[serde(serialize_with = "opt6")]
    min: Option<f64>,
    #[serde(serialize_with = "opt6")]
    max: Option<f64>,
    #[serde(serialize_with = "opt6")]
    above_half: Option<f64>,
    #[serde(serialize_with = "opt6")]
    msd: Option<f64>,
    #[serde(serialize_with = "opt6")]
    deviation_iqr: Option<f64>,
    #[serde(serialize_with = "opt6")]
    mean_accept_stat: Option<f64>,
    #[serde(serialize_with = "opt6")]
    divergence_rate: Option<f64>,
    #[serde(serialize_with = "opt6")]
    max_rhat: Option<f64>,
    error: String,
}

fn opt6<S: serde::Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&xg_core::csvfmt::fmt6(*x)),
        None => s.serialize_str(""),
    }
}

fn cmd_prior_sensitivity(args: &CommonArgs, sets: &[PriorSet], argv: Vec<String>) -> anyhow::Result<()> {
    let mut cfg = args.resolve()?;
    cfg.method = Method::Bayes;
    cfg.grouping = GroupingKind::None;
    cfg.validate()?;
    let mut run = Run::start(
        "prior-sensitivity",
        argv,
        &cfg.out,
        serde_json::json!({ "run": &cfg, "prior_sets": sets }),
    )?;
    run.manifest.seeds(cfg.sampler.seed, cfg.sampler.chains);
    let rows = load_shots(&cfg, &mut run)?;
    let report = prior_sensitivity(&rows, sets, &cfg.sampler)?;
    report.write_json(&run.file("prior_sensitivity.json"))?;
    report.write_deviations_csv(&run.file("prior_deviations.csv"))?;
    let table: Vec<SensitivityRow> = report
        .entries
        .iter()
        .map(|e| {
            let r = e.result.as_ref();
            let pick = |f: fn(&xg_core::analysis::PriorSetResult) -> f64| r.map(f);
            SensitivityRow {
                prior_set: e.prior_set.label(),
                seed: r.map(|r| r.seed),
                mean: pick(|r| r.predictions.mean),
                sd: pick(|r| r.predictions.sd),
                min: pick(|r| r.predictions.min),
                max: pick(|r| r.predictions.max),
                above_half: pick(|r| r.above_half),
                msd: pick(|r| r.msd),
                deviation_iqr: pick(|r| r.deviation.iqr()),
                mean_accept_stat: pick(|r| r.mean_accept_stat),
                divergence_rate: pick(|r| r.divergence_rate),
                max_rhat: pick(|r| r.max_rhat),
                error: e.error.clone().unwrap_or_default(),
            }
        })
        .collect();
    write_records_csv(&run.file("prior_summary.csv"), &table)?;
    run.finish()?;
    if report.entries.iter().all(|e| e.result.is_none()) {
        bail!("every prior set failed");
    }
    Ok(())
}

fn cmd_feature_sweep(args: &CommonArgs, argv: Vec<String>) -> anyhow::Result<()> {
    let cfg = resolve(args)?;
    let mut run = Run::start("feature-sweep", argv, &cfg.out, &cfg)?;
    let rows = load_shots(&cfg, &mut run)?;
    write_records_csv(&run.file("feature_sweep.csv"), &feature_sweep(&rows)?)?;
    run.finish()
}

#[derive(Serialize)]
struct TruthRow {
    match_id: u64,
    event_index: u64,
    #[serde(serialize_with = "f6::serialize")]
    true_probability: f64,
}

fn cmd_synth(args: &SynthArgs, argv: Vec<String>) -> anyhow::Result<()> {
    let mut truth = match &args.truth {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<TruthConfig>(&text)
                .map_err(|e| ValidationError(format!("invalid truth {}: {e}", path.display())))?
        }
        None => TruthConfig::typical(args.n, args.seed),
    };
    truth.n = args.n;
    truth.seed = args.seed;
    truth.validate()?;
    let mut run = Run::start("synth", argv, &args.out, &truth)?;
    if let Some(path) = &args.truth {
        run.manifest.input(path)?;
    }
    run.manifest.seed = Some(truth.seed);
    let (rows, probs) = generate_shots(&truth)?;
    write_shots_csv(&run.file("shots.csv"), &rows)?;
    let truth_rows: Vec<TruthRow> = rows
        .iter()
        .zip(&probs)
        .map(|(r, &p)| TruthRow {
            match_id: r.match_id,
            event_index: r.event_index,
            true_probability: p,
        })
        .collect();
    write_records_csv(&run.file("true_probabilities.csv"), &truth_rows)?;
    write_json(&run.file("truth.json"), &truth)?;
    if args.open_data {
        run.manifest.output("open_data/");
        write_open_data(&args.out.join("open_data"), &truth)?;
    }
    let summary = Distribution::of(&probs);
    info!("generated {} shots, mean true probability {:.4}", rows.len(), summary.mean);
    run.finish()
}
