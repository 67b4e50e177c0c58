//! Frequentist logistic regression fitted by Newton-Raphson (IRLS).
//!
//! Coefficients live on the standardized design columns; the stored layout
//! carries the standardization so the fit can be applied to new rows or
//! mapped back to raw predictor units.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::design::{DesignLayout, DesignMatrix};

/// L2 penalty on the non-intercept coefficients.
pub const RIDGE: f64 = 1e-6;
pub const MAX_ITERATIONS: usize = 100;
const SCORE_TOL: f64 = 1e-8;
const REL_LL_TOL: f64 = 1e-10;
/// A standardized coefficient this large means the data are (quasi-)separated.
const SEPARATION_BETA: f64 = 20.0;

/// Inverse logit, evaluated so that neither tail overflows.
#[inline]
pub fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)` without overflow.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Bernoulli log-likelihood of one observation with linear predictor `eta`.
#[inline]
pub fn bernoulli_logit_ll(eta: f64, y: bool) -> f64 {
    if y {
        -softplus(-eta)
    } else {
        -softplus(eta)
    }
}

/// Log-likelihood of one observation and its derivative in `eta`
/// (`y - p`), sharing a single exponential.
#[inline]
pub fn bernoulli_logit_ll_and_residual(eta: f64, y: bool) -> (f64, f64) {
    let e = (-eta.abs()).exp();
    let l = e.ln_1p();
    let inv = 1.0 / (1.0 + e);
    // p and log(1 - p), log p written for the sign of eta.
    let (p, log_p, log_q) = if eta >= 0.0 {
        (inv, -l, -eta - l)
    } else {
        (e * inv, eta - l, -l)
    };
    if y {
        (log_p, 1.0 - p)
    } else {
        (log_q, -p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub intercept: f64,
    /// Aligned with `names` and the layout's columns (standardized scale).
    pub betas: Vec<f64>,
    pub names: Vec<String>,
    pub converged: bool,
    pub iterations: usize,
    pub log_likelihood: f64,
    /// Set when the fit ran off towards infinity on some direction.
    pub separation: bool,
    pub layout: DesignLayout,
}

impl Coefficients {
    /// Intercept and slopes in raw predictor units.
    pub fn raw(&self) -> (f64, Vec<f64>) {
        self.layout.to_raw_coefficients(self.intercept, &self.betas)
    }

    pub fn linear_predictor(&self, row: &[f64]) -> f64 {
        self.intercept + row.iter().zip(&self.betas).map(|(x, b)| x * b).sum::<f64>()
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&CoefficientsDoc::from(self))?;
        std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let doc: CoefficientsDoc = serde_json::from_str(&text)?;
        Ok(doc.fit)
    }
}

/// On-disk form: the fit plus raw-scale coefficients for readers that do not
/// want to undo the standardization themselves.
#[derive(Serialize, Deserialize)]
struct CoefficientsDoc {
    #[serde(flatten)]
    fit: Coefficients,
    raw_intercept: f64,
    raw_betas: Vec<f64>,
}

impl From<&Coefficients> for CoefficientsDoc {
    fn from(c: &Coefficients) -> Self {
        let (raw_intercept, raw_betas) = c.raw();
        CoefficientsDoc {
            fit: c.clone(),
            raw_intercept,
            raw_betas,
        }
    }
}

fn check_outcomes(design: &DesignMatrix, outcomes: &[bool]) -> Result<()> {
    if design.n_rows() != outcomes.len() {
        return Err(Error::LengthMismatch {
            left: design.n_rows(),
            right: outcomes.len(),
        });
    }
    Ok(())
}

fn penalized_ll(design: &DesignMatrix, y: &[bool], beta: &[f64]) -> f64 {
    let ll: f64 = design
        .rows()
        .zip(y)
        .map(|(x, &yi)| bernoulli_logit_ll(eta(beta, x), yi))
        .sum();
    ll - 0.5 * RIDGE * beta[1..].iter().map(|b| b * b).sum::<f64>()
}

#[inline]
fn eta(beta: &[f64], x: &[f64]) -> f64 {
    beta[0] + x.iter().zip(&beta[1..]).map(|(a, b)| a * b).sum::<f64>()
}

/// Score and Hessian (negated, so positive definite) of the penalized
/// log-likelihood, with the intercept as coordinate 0.
fn score_and_information(design: &DesignMatrix, y: &[bool], beta: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let d = beta.len();
    let mut score = DVector::zeros(d);
    let mut info = DMatrix::zeros(d, d);
    let mut xa = vec![0.0; d];
    xa[0] = 1.0;
    for (x, &yi) in design.rows().zip(y) {
        xa[1..].copy_from_slice(x);
        let p = sigmoid(eta(beta, x));
        let r = f64::from(u8::from(yi)) - p;
        let w = p * (1.0 - p);
        for a in 0..d {
            score[a] += xa[a] * r;
            let wa = w * xa[a];
            if wa != 0.0 {
                for b in a..d {
                    info[(a, b)] += wa * xa[b];
                }
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            info[(a, b)] = info[(b, a)];
        }
    }
    for j in 1..d {
        score[j] -= RIDGE * beta[j];
        info[(j, j)] += RIDGE;
    }
    (score, info)
}

/// Fails if the intercept-augmented design is numerically rank deficient.
fn check_rank(design: &DesignMatrix) -> Result<()> {
    let d = design.n_columns() + 1;
    if design.n_rows() < d {
        return Err(Error::RankDeficient);
    }
    let mut gram = DMatrix::<f64>::zeros(d, d);
    let mut xa = vec![0.0; d];
    xa[0] = 1.0;
    for x in design.rows() {
        xa[1..].copy_from_slice(x);
        for a in 0..d {
            for b in a..d {
                gram[(a, b)] += xa[a] * xa[b];
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            gram[(a, b)] = gram[(b, a)];
        }
    }
    let eig = gram.symmetric_eigenvalues();
    let max = eig.max();
    let min = eig.min();
    if !(min > max * 1e-12) {
        return Err(Error::RankDeficient);
    }
    Ok(())
}

/// Maximizes the ridge-penalized Bernoulli log-likelihood.
///
/// Converges when the largest score component drops below 1e-8 or the
/// relative log-likelihood change below 1e-10. A run that hits the
/// iteration cap is returned with `converged = false`.
pub fn fit_logistic(design: &DesignMatrix, outcomes: &[bool]) -> Result<Coefficients> {
    check_outcomes(design, outcomes)?;
    check_rank(design)?;
    let d = design.n_columns() + 1;
    let mut beta = vec![0.0; d];
    let mut ll = penalized_ll(design, outcomes, &beta);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let (score, info) = score_and_information(design, outcomes, &beta);
        if score.amax() < SCORE_TOL {
            converged = true;
            break;
        }
        iterations += 1;
        let step = info.cholesky().ok_or(Error::RankDeficient)?.solve(&score);
        // Newton with step halving; the penalized objective is concave so a
        // few halvings always suffice away from separation.
        let mut scale = 1.0;
        let (next, next_ll) = loop {
            let cand: Vec<f64> = beta.iter().zip(step.iter()).map(|(b, s)| b + scale * s).collect();
            let cand_ll = penalized_ll(design, outcomes, &cand);
            if cand_ll >= ll || scale < 1e-8 {
                break (cand, cand_ll);
            }
            scale *= 0.5;
        };
        let rel = (next_ll - ll).abs() / ll.abs().max(1e-300);
        beta = next;
        ll = next_ll;
        if rel < REL_LL_TOL {
            converged = true;
            break;
        }
    }
    let separation = beta.iter().any(|b| b.abs() > SEPARATION_BETA || !b.is_finite());
    if separation {
        log::warn!("logistic fit looks separated; coefficients are not identified");
    }
    let log_likelihood = design
        .rows()
        .zip(outcomes)
        .map(|(x, &yi)| bernoulli_logit_ll(eta(&beta, x), yi))
        .sum();
    Ok(Coefficients {
        intercept: beta[0],
        betas: beta[1..].to_vec(),
        names: design.layout.column_names(),
        converged,
        iterations,
        log_likelihood,
        separation,
        layout: design.layout.clone(),
    })
}

/// Gradient of the penalized log-likelihood at the fitted coefficients,
/// intercept first.
pub fn penalized_score(coefs: &Coefficients, design: &DesignMatrix, outcomes: &[bool]) -> Result<Vec<f64>> {
    check_outcomes(design, outcomes)?;
    design.check_columns(&coefs.names)?;
    let mut beta = vec![coefs.intercept];
    beta.extend_from_slice(&coefs.betas);
    let (score, _) = score_and_information(design, outcomes, &beta);
    Ok(score.iter().copied().collect())
}

pub fn predict_proba(coefs: &Coefficients, design: &DesignMatrix) -> Result<Vec<f64>> {
    design.check_columns(&coefs.names)?;
    Ok(design.rows().map(|x| sigmoid(coefs.linear_predictor(x))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_saturates_cleanly() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((1.0 - sigmoid(40.0)).abs() < 1e-15);
        assert!(sigmoid(-40.0) < 1e-15 && sigmoid(-40.0) > 0.0);
        assert!(sigmoid(-800.0) == 0.0 && sigmoid(800.0) == 1.0);
        assert!(softplus(800.0) == 800.0);
        assert!((softplus(-800.0)).abs() < 1e-300);
    }

    #[test]
    fn fused_kernel_matches_separate_calls() {
        for &eta in &[-40.0, -3.2, -1e-9, 0.0, 0.7, 5.0, 35.0] {
            for y in [true, false] {
                let (ll, r) = bernoulli_logit_ll_and_residual(eta, y);
                assert!((ll - bernoulli_logit_ll(eta, y)).abs() <= 1e-15 * ll.abs().max(1.0));
                assert!((r - (f64::from(u8::from(y)) - sigmoid(eta))).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn log_likelihood_at_half() {
        assert!((bernoulli_logit_ll(0.0, true) - 0.5f64.ln()).abs() < 1e-15);
        assert!((bernoulli_logit_ll(0.0, false) - 0.5f64.ln()).abs() < 1e-15);
    }
}
