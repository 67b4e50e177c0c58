//! Acceptance suite: one PASS / FAIL / BLOCKED line per criterion.
//!
//! Criteria 5-9 need a StatsBomb open-data checkout; point `XG_OPEN_DATA` at
//! its `data/` directory. Without it they report BLOCKED, which only fails
//! the run when `ACCEPTANCE_REQUIRE_DATA=1`.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xg_core::analysis::{
    bayes_theorem_adjustment, brier, frequentist_predictions, model_adjustments, prior_sensitivity,
    regression_metrics, subsample, totals_report, AdjustmentReport,
};
use xg_core::bayes::diagnostics::{mcse, rhat};
use xg_core::bayes::{run_chains, run_hmc, LogDensity, PosteriorSamples, SamplerConfig};
use xg_core::dists::PriorDist;
use xg_core::features::design::{DesignLayout, DesignMatrix};
use xg_core::features::geometry::{point_in_shot_triangle, shot_angle, Point, GOAL};
use xg_core::features::{build_design_matrix, engineer_all, FeatureRow};
use xg_core::glm::{bernoulli_logit_ll, fit_logistic, Coefficients};
use xg_core::ingest::{ingest, load_competitions, select_competitions};
use xg_core::model_spec::{Grouping, ModelSpec, PredictorSet, PriorSet};
use xg_core::shot::GeneralPosition;
use xg_core::synth::{generate_shots, TruthConfig};

enum Status {
    Pass,
    Fail,
    Blocked,
}

struct Outcome {
    status: Status,
    detail: String,
}

fn pass(detail: String) -> Outcome {
    Outcome { status: Status::Pass, detail }
}

fn fail(detail: String) -> Outcome {
    Outcome { status: Status::Fail, detail }
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

// ---------------------------------------------------------------- 1

fn barycentric(p: Point, a: Point, b: Point, c: Point) -> (f64, f64, f64) {
    let det = (b.y - c.y) * (a.x - c.x) + (c.x - b.x) * (a.y - c.y);
    let l0 = ((b.y - c.y) * (p.x - c.x) + (c.x - b.x) * (p.y - c.y)) / det;
    let l1 = ((c.y - a.y) * (p.x - c.x) + (a.x - c.x) * (p.y - c.y)) / det;
    (l0, l1, 1.0 - l0 - l1)
}

fn geometry() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut agree, mut inside) = (0, 0);
    let mut checked = 0;
    while checked < 10_000 {
        let shot = Point::new(rng.random_range(60.0..119.5), rng.random_range(0.0..80.0));
        let p = if checked % 2 == 0 {
            Point::new(rng.random_range(55.0..120.0), rng.random_range(0.0..80.0))
        } else {
            let t: f64 = rng.random_range(0.0..1.0);
            let gy = rng.random_range(35.0..45.0);
            Point::new(
                (shot.x + t * (120.0 - shot.x) + rng.random_range(-1.0..1.0)).min(120.0),
                (shot.y + t * (gy - shot.y) + rng.random_range(-1.0..1.0)).clamp(0.0, 80.0),
            )
        };
        let (a, b, c) = barycentric(p, shot, GOAL.post_low, GOAL.post_high);
        let min = a.min(b).min(c);
        // Cases within rounding of an edge have no well-defined brute-force answer.
        if min.abs() < 1e-9 {
            continue;
        }
        let expected = min > 0.0;
        agree += usize::from(point_in_shot_triangle(p, shot) == expected);
        inside += usize::from(expected);
        checked += 1;
    }
    let angle = shot_angle(Point::new(108.0, 40.0)).unwrap();
    let elapsed = start.elapsed();
    let ok = agree == 10_000 && (angle - 36.869_897_645_844_02).abs() < 1e-6 && elapsed < Duration::from_secs(1);
    verdict(
        ok,
        format!(
            "agreement {agree}/10000 ({inside} inside), angle {angle:.9} deg, {:.3} s",
            secs(elapsed)
        ),
    )
}

// ---------------------------------------------------------------- 2

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn random_dist(kind: usize, rng: &mut ChaCha8Rng) -> PriorDist {
    match kind {
        0 => PriorDist::normal(rng.random_range(-5.0..5.0), rng.random_range(0.1..10.0)),
        1 => PriorDist::skew_normal(
            rng.random_range(-5.0..5.0),
            rng.random_range(0.1..10.0),
            rng.random_range(-10.0..10.0),
        ),
        2 => PriorDist::half_normal(rng.random_range(0.1..10.0)),
        _ => {
            let a = rng.random_range(-100.0..0.0);
            PriorDist::uniform(a, a + rng.random_range(0.1..200.0))
        }
    }
}

fn distributions() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst_mass, mut worst_grad) = (0.0f64, 0.0f64);
    for kind in 0..4 {
        for _ in 0..100 {
            let d = random_dist(kind, &mut rng);
            let (c, s) = match d {
                PriorDist::Normal { mu, sigma } | PriorDist::SkewNormal { mu, sigma, .. } => (mu, sigma),
                PriorDist::HalfNormal { scale } => (0.0, scale),
                PriorDist::Uniform { lower, upper } => (0.5 * (lower + upper), 0.5 * (upper - lower)),
            };
            let (lo, hi) = d.support();
            let mass = simpson(|x| d.log_pdf(x).exp(), lo.max(c - 14.0 * s), hi.min(c + 14.0 * s), 40_000);
            worst_mass = worst_mass.max((mass - 1.0).abs());
            let h = 1e-3 * s;
            for _ in 0..10 {
                let x = rng.random_range((c - 4.0 * s).max(lo + 3.0 * h)..(c + 4.0 * s).min(hi - 3.0 * h));
                let f = |t: f64| d.log_pdf(t);
                let fd = (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
                let g = d.grad_log_pdf(x).unwrap();
                worst_grad = worst_grad.max((g - fd).abs() / g.abs().max(1.0));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst_mass < 1e-6 && worst_grad < 1e-6 && elapsed < Duration::from_secs(10),
        format!(
            "400 parameterizations: max |mass-1| {worst_mass:.2e}, max grad rel err {worst_grad:.2e}, {:.2} s",
            secs(elapsed)
        ),
    )
}

// ---------------------------------------------------------------- 3

fn frequentist_recovery() -> Outcome {
    let start = Instant::now();
    let design = DesignMatrix::from_parts(DesignLayout::intercept_only(), 100, Vec::new(), None).unwrap();
    let y: Vec<bool> = (0..100).map(|i| i < 25).collect();
    let b0 = fit_logistic(&design, &y).unwrap().intercept;
    let closed = (25.0f64 / 75.0).ln();

    let truth = TruthConfig::typical(50_000, 11);
    let (rows, _) = generate_shots(&truth).unwrap();
    let predictors = PredictorSet::Custom(vec![
        xg_core::model_spec::Feature::DistanceToGoal,
        xg_core::model_spec::Feature::ShotAngle,
        xg_core::model_spec::Feature::GkDistanceToGoal,
        xg_core::model_spec::Feature::BodyPart,
        xg_core::model_spec::Feature::OneOnOne,
        xg_core::model_spec::Feature::UnderPressure,
    ]);
    let layout = DesignLayout::learn(&rows, &predictors, &Grouping::None).unwrap();
    let outcomes: Vec<bool> = rows.iter().map(|r| r.goal).collect();
    let fit = fit_logistic(&layout.apply(&rows), &outcomes).unwrap();
    let (_, raw) = fit.raw();
    let true_beta: Vec<f64> = fit.names.iter().map(|n| truth.beta.get(n).copied().unwrap_or(0.0)).collect();
    let worst_beta = raw.iter().zip(&true_beta).map(|(b, t)| (b - t).abs()).fold(0.0, f64::max);
    // The raw intercept sits at distance 0, far outside the data; compare at the centroid.
    let (centred, _) = layout.from_raw_coefficients(truth.intercept, &true_beta);
    let intercept_err = (fit.intercept - centred).abs();
    let elapsed = start.elapsed();
    verdict(
        (b0 - closed).abs() < 1e-6 && worst_beta < 0.1 && intercept_err < 0.1 && elapsed < Duration::from_secs(30),
        format!(
            "closed form err {:.1e}; n=50000 max |beta err| {worst_beta:.3}, centred intercept err {intercept_err:.3}; {:.1} s",
            (b0 - closed).abs(),
            secs(elapsed)
        ),
    )
}

// ---------------------------------------------------------------- 4

struct StdNormal(usize);

impl LogDensity for StdNormal {
    fn dim(&self) -> usize {
        self.0
    }
    fn log_density_grad(&self, q: &[f64], grad: &mut [f64]) -> f64 {
        for (g, x) in grad.iter_mut().zip(q) {
            *g = -x;
        }
        -0.5 * q.iter().map(|x| x * x).sum::<f64>()
    }
}

fn intercept_quadrature(goals: usize, n: usize, prior_sd: f64) -> f64 {
    let log_post = |b: f64| {
        goals as f64 * bernoulli_logit_ll(b, true) + (n - goals) as f64 * bernoulli_logit_ll(b, false)
            - 0.5 * (b / prior_sd).powi(2)
    };
    let peak = log_post((goals as f64 / (n - goals) as f64).ln());
    let z = simpson(|b| (log_post(b) - peak).exp(), -8.0, 6.0, 20_000);
    simpson(|b| b * (log_post(b) - peak).exp(), -8.0, 6.0, 20_000) / z
}

fn sampler_calibration() -> Outcome {
    let start = Instant::now();
    let config = SamplerConfig {
        seed: 2024,
        ..SamplerConfig::default()
    };
    let outs = run_chains(&StdNormal(20), &config).unwrap();
    let accept = outs
        .iter()
        .map(|o| o.accept_stat.iter().sum::<f64>() / o.accept_stat.len() as f64)
        .sum::<f64>()
        / outs.len() as f64;
    let (mut worst_z, mut worst_rhat) = (0.0f64, 0.0f64);
    for j in 0..20 {
        let chains: Vec<Vec<f64>> = outs.iter().map(|o| o.draws.iter().map(|d| d[j]).collect()).collect();
        let all: Vec<f64> = chains.concat();
        let mean = all.iter().sum::<f64>() / all.len() as f64;
        worst_z = worst_z.max(mean.abs() / mcse(&chains).unwrap());
        worst_rhat = worst_rhat.max(rhat(&chains).unwrap());
    }

    let design = DesignMatrix::from_parts(DesignLayout::intercept_only(), 100, vec![], None).unwrap();
    let spec = ModelSpec::new(PredictorSet::Custom(vec![]), Grouping::None);
    let y: Vec<bool> = (0..100).map(|i| i < 30).collect();
    let samples = run_hmc(&spec, &design, &y, &SamplerConfig { seed: 77, ..SamplerConfig::default() }).unwrap();
    let exact = intercept_quadrature(30, 100, 5.0);
    let err = (samples.mean(0) - exact).abs();
    let elapsed = start.elapsed();
    verdict(
        worst_z < 3.0
            && worst_rhat < 1.01
            && (0.90..=0.99).contains(&accept)
            && err < 0.02
            && elapsed < Duration::from_secs(300),
        format!(
            "20-D normal: max |mean|/mcse {worst_z:.2}, max rhat {worst_rhat:.4}, accept {accept:.3}; intercept err {err:.4}; {:.1} s",
            secs(elapsed)
        ),
    )
}

// ---------------------------------------------------------------- 5-9

const EPL: u32 = 2;
const SENSITIVITY_SHOTS: usize = 5_000;
const PLAYERS: [&str; 6] = [
    "Robert Pirès",
    "Sergio Leonel Agüero del Castillo",
    "Jamie Vardy",
    "Philippe Coutinho Correia",
    "Ross Barkley",
    "Jonjo Shelvey",
];
const PIRES: &str = PLAYERS[0];
const AGUERO: &str = PLAYERS[1];
const SHELVEY: &str = PLAYERS[5];

fn data_dir() -> Option<PathBuf> {
    std::env::var_os("XG_OPEN_DATA").map(PathBuf::from)
}

/// Every men's open-play shot in the snapshot, engineered once.
fn all_shots(dir: &Path) -> &'static Vec<FeatureRow> {
    static SHOTS: OnceLock<Vec<FeatureRow>> = OnceLock::new();
    SHOTS.get_or_init(|| {
        let comps = select_competitions(&load_competitions(dir).unwrap(), None);
        engineer_all(&ingest(dir, &comps).unwrap().shots).unwrap()
    })
}

fn epl(dir: &Path) -> Vec<FeatureRow> {
    all_shots(dir).iter().filter(|r| r.competition_id == EPL).cloned().collect()
}

fn outcomes(rows: &[FeatureRow]) -> Vec<bool> {
    rows.iter().map(|r| r.goal).collect()
}

fn freq_fit(rows: &[FeatureRow], predictors: PredictorSet) -> Coefficients {
    let design = build_design_matrix(rows, &ModelSpec::new(predictors, Grouping::None)).unwrap();
    fit_logistic(&design, &outcomes(rows)).unwrap()
}

fn hier_fit(rows: &[FeatureRow], predictors: PredictorSet, grouping: Grouping, seed: u64) -> PosteriorSamples {
    let spec = ModelSpec::new(predictors, grouping);
    let design = build_design_matrix(rows, &spec).unwrap();
    run_hmc(&spec, &design, &outcomes(rows), &SamplerConfig { seed, ..SamplerConfig::default() }).unwrap()
}

/// Position-grouped fit and its adjustments against the frequentist fit with
/// the same predictors; cached because criteria 6 and 7 share it.
fn positional(dir: &Path, predictors: PredictorSet) -> (AdjustmentReport, Vec<f64>, Vec<String>, Duration) {
    let rows = epl(dir);
    let start = Instant::now();
    let samples = hier_fit(&rows, predictors.clone(), Grouping::Position, 1);
    let baseline = frequentist_predictions(&freq_fit(&rows, predictors), &rows).unwrap();
    let report = model_adjustments(&samples, &baseline, &rows).unwrap();
    (report, baseline, samples.layout.group_levels.clone(), start.elapsed())
}

fn bayes_xg1(dir: &Path) -> &'static (AdjustmentReport, Vec<f64>, Vec<String>, Duration) {
    static FIT: OnceLock<(AdjustmentReport, Vec<f64>, Vec<String>, Duration)> = OnceLock::new();
    FIT.get_or_init(|| positional(dir, PredictorSet::Baseline))
}

fn model_scores(dir: &Path) -> Outcome {
    let rows = all_shots(dir);
    let y = outcomes(rows);
    let sb: Vec<f64> = rows.iter().map(|r| r.statsbomb_xg).collect();
    let start = Instant::now();
    let base = frequentist_predictions(&freq_fit(rows, PredictorSet::Baseline), rows).unwrap();
    let ext = frequentist_predictions(&freq_fit(rows, PredictorSet::Extended), rows).unwrap();
    let elapsed = start.elapsed();
    let (b_base, b_ext, b_sb) = (brier(&base, &y).unwrap(), brier(&ext, &y).unwrap(), brier(&sb, &y).unwrap());
    let (r2_base, r2_ext) = (
        regression_metrics(&base, &sb).unwrap().r2,
        regression_metrics(&ext, &sb).unwrap().r2,
    );
    let detail = format!(
        "{} shots; Brier baseline {b_base:.4} extended {b_ext:.4} statsbomb {b_sb:.4}; R2 baseline {r2_base:.3} extended {r2_ext:.3}; fits {:.1} s",
        rows.len(),
        secs(elapsed)
    );
    let fast = elapsed < Duration::from_secs(60);
    let numeric = (b_base - 0.086).abs() <= 0.005
        && (b_ext - 0.076).abs() <= 0.005
        && (b_sb - 0.075).abs() <= 0.005
        && r2_ext >= 0.75
        && (r2_base - 0.428).abs() <= 0.05;
    let ordering = b_ext < b_base && r2_ext > r2_base;
    // The reference snapshot had a little over 60,000 shots; a count well
    // outside that marks a drifted snapshot, judged on ordering alone.
    let drifted = !(60_000..=66_000).contains(&rows.len());
    if numeric && fast {
        pass(detail)
    } else if drifted && ordering && fast {
        pass(format!("{detail}; drifted snapshot, ordering holds"))
    } else {
        fail(detail)
    }
}

fn positional_adjustments(dir: &Path) -> Outcome {
    let rows = epl(dir);
    let (report, baseline, levels, elapsed) = bayes_xg1(dir);
    let theory = bayes_theorem_adjustment(baseline, &report.groups_per_shot, &outcomes(&rows), levels).unwrap();
    let targets = [("ST", 0.009), ("AM", 0.019), ("M", -0.006), ("D", -0.042)];
    let mut ok = elapsed < &Duration::from_secs(30 * 60);
    let mut parts = Vec::new();
    let mut means = BTreeMap::new();
    for (pos, target) in targets {
        let model = report.group_mean(pos).unwrap_or(f64::NAN);
        let th = theory.iter().find(|t| t.group == pos).map_or(f64::NAN, |t| t.mean_adjustment);
        ok &= (model - target).abs() <= 0.005 && (model - th).abs() <= 0.005;
        parts.push(format!("{pos} {model:+.4} (theory {th:+.4})"));
        means.insert(pos, model);
    }
    ok &= means["AM"] > means["ST"] && means["ST"] > means["M"] && means["M"] > means["D"];
    verdict(ok, format!("{} shots; {}; {:.0} s", rows.len(), parts.join(", "), secs(*elapsed)))
}

fn shrinkage(dir: &Path) -> Outcome {
    let (xg1, ..) = bayes_xg1(dir);
    let (xg2, _, _, elapsed) = positional(dir, PredictorSet::Extended);
    let mut ok = true;
    let mut parts = Vec::new();
    for pos in GeneralPosition::ALL {
        let label = pos.label();
        let a1 = xg1.group_mean(label).map_or(f64::NAN, f64::abs);
        let a2 = xg2.group_mean(label).map_or(f64::NAN, f64::abs);
        ok &= a2 < a1;
        parts.push(format!("{label} {a2:.4} < {a1:.4}"));
    }
    verdict(ok, format!("|mean adjustment| extended vs baseline: {}; {:.0} s", parts.join(", "), secs(elapsed)))
}

fn players(dir: &Path) -> Outcome {
    let rows = epl(dir);
    let selected: Vec<String> = PLAYERS.iter().map(|s| s.to_string()).collect();
    let start = Instant::now();
    let samples = hier_fit(&rows, PredictorSet::Extended, Grouping::Player { selected: selected.clone() }, 3);
    let coefs = freq_fit(&rows, PredictorSet::Extended);
    let baseline = frequentist_predictions(&coefs, &rows).unwrap();
    let report = model_adjustments(&samples, &baseline, &rows).unwrap();
    let totals = totals_report(&samples, &coefs, &rows, &selected).unwrap();
    let mean = |p: &str| report.group_mean(p).unwrap_or(f64::NAN);
    let closer = |p: &str| totals.iter().find(|t| t.player == p).is_some_and(|t| t.adjusted_is_closer());
    let ok = mean(PIRES) > 0.0
        && mean(AGUERO) > 0.0
        && mean(SHELVEY) < 0.0
        && mean("other").abs() <= 0.003
        && closer(PIRES)
        && closer(AGUERO)
        && closer(SHELVEY);
    let t: Vec<String> = totals
        .iter()
        .filter(|t| [PIRES, AGUERO, SHELVEY].contains(&t.player.as_str()))
        .map(|t| format!("{} goals {} base {:.1} adj {:.1}", t.player, t.goals, t.baseline_xg, t.adjusted_xg))
        .collect();
    verdict(
        ok,
        format!(
            "Pires {:+.4}, Aguero {:+.4}, Shelvey {:+.4}, other {:+.4}; {}; {:.0} s",
            mean(PIRES),
            mean(AGUERO),
            mean(SHELVEY),
            mean("other"),
            t.join("; "),
            secs(start.elapsed())
        ),
    )
}

fn sensitivity(dir: &Path) -> Outcome {
    let rows = subsample(&epl(dir), SENSITIVITY_SHOTS, 5);
    let start = Instant::now();
    let report = prior_sensitivity(&rows, &PriorSet::ALL, &SamplerConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let Some(sd) = PriorSet::ALL
        .iter()
        .map(|&s| report.result(s).map(|r| (s, r.predictions.sd)))
        .collect::<Option<Vec<_>>>()
    else {
        let failed: Vec<&str> = report.entries.iter().filter(|e| e.result.is_none()).map(|e| e.prior_set.label()).collect();
        return fail(format!("prior sets failed: {}", failed.join(", ")));
    };
    let spread = |set: PriorSet| sd.iter().find(|(s, _)| *s == set).unwrap().1;
    let widest = sd.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
    let iqr = |s: PriorSet| report.result(s).unwrap().deviation.iqr();
    let ratio = iqr(PriorSet::WideNormal) / iqr(PriorSet::Existing);
    let ok = widest == PriorSet::WideUniform
        && spread(PriorSet::IllSuited) < spread(PriorSet::Existing)
        && (1.0 / 1.5..=1.5).contains(&ratio)
        && elapsed < Duration::from_secs(45 * 60);
    let spreads: Vec<String> = sd.iter().map(|(s, v)| format!("{} {v:.4}", s.label())).collect();
    verdict(
        ok,
        format!(
            "{} shots; prediction sd: {}; wide_normal/existing deviation IQR {ratio:.3}; {:.0} s",
            rows.len(),
            spreads.join(", "),
            secs(elapsed)
        ),
    )
}

// ---------------------------------------------------------------- 10

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let synth = tmp.path().join("synth");
    let code = xg_cli::run(["xg", "synth", "--n", "1000", "--seed", "5", "--out", synth.to_str().unwrap()]);
    assert_eq!(code, 0);
    let shots = synth.join("shots.csv");
    let player = xg_core::features::read_shots_csv(&shots).unwrap()[0].player.clone();
    let out = tmp.path().join("fit");
    let argv = [
        "xg",
        "fit",
        "--shots",
        shots.to_str().unwrap(),
        "--model",
        "extended",
        "--method",
        "bayes",
        "--grouping",
        "player",
        "--players",
        &player,
        "--seed",
        "7",
        "--chains",
        "2",
        "--draws",
        "400",
        "--warmup",
        "150",
        "--out",
        out.to_str().unwrap(),
    ];
    let snapshot = |dir: &Path| {
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    assert_eq!(xg_cli::run(argv), 0);
    let first = snapshot(&out);
    std::fs::remove_dir_all(&out).unwrap();
    assert_eq!(xg_cli::run(argv), 0);
    let second = snapshot(&out);
    let differing: Vec<&str> = first
        .iter()
        .zip(&second)
        .filter(|(a, b)| a != b)
        .map(|(a, _)| a.0.as_str())
        .collect();
    verdict(
        first.len() == second.len() && differing.is_empty(),
        format!("{} files compared, differing: {:?}", first.len(), differing),
    )
}

fn main() {
    let data = data_dir();
    type Check = Box<dyn Fn() -> Outcome>;
    let gated = |f: fn(&Path) -> Outcome| -> Check {
        let data = data.clone();
        Box::new(move || match &data {
            Some(dir) => f(dir),
            None => Outcome {
                status: Status::Blocked,
                detail: "needs a StatsBomb open-data snapshot; set XG_OPEN_DATA".into(),
            },
        })
    };
    let criteria: Vec<(&str, Check)> = vec![
        ("geometry oracle", Box::new(geometry)),
        ("distribution kernels", Box::new(distributions)),
        ("frequentist recovery", Box::new(frequentist_recovery)),
        ("sampler calibration", Box::new(sampler_calibration)),
        ("frequentist model scores", gated(model_scores)),
        ("positional adjustments", gated(positional_adjustments)),
        ("extended-model shrinkage", gated(shrinkage)),
        ("player adjustments and totals", gated(players)),
        ("prior sensitivity", gated(sensitivity)),
        ("bayes fit determinism", Box::new(determinism)),
    ];
    let require_data = std::env::var("ACCEPTANCE_REQUIRE_DATA").is_ok_and(|v| v == "1");
    let mut failed = false;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            fail(format!("panicked: {msg}"))
        });
        let label = match outcome.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed = true;
                "FAIL"
            }
            Status::Blocked => {
                failed |= require_data;
                "BLOCKED"
            }
        };
        println!("criterion {:>2} [{name}]: {label} - {}", i + 1, outcome.detail);
    }
    if failed {
        std::process::exit(1);
    }
}
