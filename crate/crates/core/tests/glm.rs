use xg_core::features::design::{DesignLayout, DesignMatrix};
use xg_core::glm::{fit_logistic, penalized_score, predict_proba, Coefficients};
use xg_core::model_spec::{Feature, Grouping, PredictorSet};
use xg_core::synth::{generate_shots, TruthConfig};
use xg_core::Error;

fn intercept_only(n: usize) -> DesignMatrix {
    DesignMatrix::from_parts(DesignLayout::intercept_only(), n, Vec::new(), None).unwrap()
}

fn recovery_truth(n: usize, seed: u64) -> TruthConfig {
    TruthConfig::typical(n, seed)
}

fn recovery_predictors() -> PredictorSet {
    PredictorSet::Custom(vec![
        Feature::DistanceToGoal,
        Feature::ShotAngle,
        Feature::GkDistanceToGoal,
        Feature::BodyPart,
        Feature::OneOnOne,
        Feature::UnderPressure,
    ])
}

#[test]
fn intercept_only_closed_form() {
    let design = intercept_only(100);
    let y: Vec<bool> = (0..100).map(|i| i < 25).collect();
    let fit = fit_logistic(&design, &y).unwrap();
    assert!(fit.converged);
    assert!((fit.intercept - (0.25f64 / 0.75).ln()).abs() < 1e-6);
    assert!((fit.intercept + 1.098612).abs() < 1e-6);
}

#[test]
fn synthetic_coefficients_recovered() {
    let cfg = recovery_truth(50_000, 11);
    let (rows, _) = generate_shots(&cfg).unwrap();
    let layout = DesignLayout::learn(&rows, &recovery_predictors(), &Grouping::None).unwrap();
    let design = layout.apply(&rows);
    let y: Vec<bool> = rows.iter().map(|r| r.goal).collect();
    let fit = fit_logistic(&design, &y).unwrap();
    assert!(fit.converged && !fit.separation);
    let (_, raw) = fit.raw();
    let truth: Vec<f64> = fit.names.iter().map(|n| cfg.beta.get(n).copied().unwrap_or(0.0)).collect();
    for ((name, b), t) in fit.names.iter().zip(&raw).zip(&truth) {
        assert!((b - t).abs() < 0.1, "{name}: {b} vs {t}");
    }
    // The raw intercept extrapolates to distance 0, far outside the data, so
    // it is compared at the data centroid instead.
    let (centred_truth, _) = layout.from_raw_coefficients(cfg.intercept, &truth);
    assert!((fit.intercept - centred_truth).abs() < 0.1, "{} vs {centred_truth}", fit.intercept);
}

#[test]
fn stationarity_and_mean_rate() {
    let (rows, _) = generate_shots(&recovery_truth(5_000, 5)).unwrap();
    let layout = DesignLayout::learn(&rows, &PredictorSet::Extended, &Grouping::None).unwrap();
    let design = layout.apply(&rows);
    let y: Vec<bool> = rows.iter().map(|r| r.goal).collect();
    let fit = fit_logistic(&design, &y).unwrap();
    assert!(fit.converged);
    let score = penalized_score(&fit, &design, &y).unwrap();
    let max = score.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    assert!(max < 1e-6, "score max-norm {max}");
    let p = predict_proba(&fit, &design).unwrap();
    let mean_p = p.iter().sum::<f64>() / p.len() as f64;
    let rate = y.iter().filter(|&&g| g).count() as f64 / y.len() as f64;
    assert!((mean_p - rate).abs() < 1e-6);
}

#[test]
fn row_permutation_invariant() {
    let (rows, _) = generate_shots(&recovery_truth(3_000, 6)).unwrap();
    let layout = DesignLayout::learn(&rows, &recovery_predictors(), &Grouping::None).unwrap();
    let y: Vec<bool> = rows.iter().map(|r| r.goal).collect();
    let a = fit_logistic(&layout.apply(&rows), &y).unwrap();
    let mut idx: Vec<usize> = (0..rows.len()).collect();
    idx.reverse();
    idx.rotate_left(1234);
    let design = layout.apply(&rows).select_rows(&idx);
    let yp: Vec<bool> = idx.iter().map(|&i| y[i]).collect();
    let b = fit_logistic(&design, &yp).unwrap();
    assert!((a.intercept - b.intercept).abs() < 1e-10);
    for (x, z) in a.betas.iter().zip(&b.betas) {
        assert!((x - z).abs() < 1e-10);
    }
}

#[test]
fn zero_coefficients_predict_half() {
    let (rows, _) = generate_shots(&TruthConfig::new(50, 1)).unwrap();
    let layout = DesignLayout::learn(&rows, &PredictorSet::Baseline, &Grouping::None).unwrap();
    let design = layout.apply(&rows);
    let coefs = Coefficients {
        intercept: 0.0,
        betas: vec![0.0; 3],
        names: layout.column_names(),
        converged: true,
        iterations: 0,
        log_likelihood: 0.0,
        separation: false,
        layout: layout.clone(),
    };
    assert!(predict_proba(&coefs, &design).unwrap().iter().all(|&p| p == 0.5));

    let other = DesignLayout::learn(&rows, &PredictorSet::Extended, &Grouping::None).unwrap();
    let err = predict_proba(&coefs, &other.apply(&rows)).unwrap_err();
    assert!(matches!(err, Error::ColumnMismatch { .. }));
}

#[test]
fn too_few_rows_is_rank_deficient() {
    let (rows, _) = generate_shots(&TruthConfig::new(3, 1)).unwrap();
    let layout = DesignLayout::learn(&rows, &PredictorSet::Baseline, &Grouping::None).unwrap();
    let y = vec![true, false, true];
    assert!(matches!(fit_logistic(&layout.apply(&rows), &y), Err(Error::RankDeficient)));
}

#[test]
fn separated_data_is_flagged() {
    let (rows, _) = generate_shots(&TruthConfig::new(400, 2)).unwrap();
    let layout = DesignLayout::learn(&rows, &PredictorSet::Custom(vec![Feature::DistanceToGoal]), &Grouping::None).unwrap();
    let y: Vec<bool> = rows.iter().map(|r| r.distance_to_goal < 15.0).collect();
    let fit = fit_logistic(&layout.apply(&rows), &y).unwrap();
    assert!(fit.separation);
}

#[test]
fn coefficients_json_round_trip() {
    let (rows, _) = generate_shots(&recovery_truth(500, 3)).unwrap();
    let layout = DesignLayout::learn(&rows, &PredictorSet::Baseline, &Grouping::None).unwrap();
    let y: Vec<bool> = rows.iter().map(|r| r.goal).collect();
    let fit = fit_logistic(&layout.apply(&rows), &y).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coefs.json");
    fit.write_json(&path).unwrap();
    let back = Coefficients::read_json(&path).unwrap();
    assert_eq!(fit, back);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("raw_betas") && text.contains("standardization"));
}
