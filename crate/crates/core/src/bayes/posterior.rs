//! Log-posterior of the hierarchical logistic model and its gradient.
//!
//! Fixed effects act on the standardized design columns, but their priors
//! are evaluated on the raw predictor scale through the layout's linear map.
//! Group offsets have skew-normal priors `SN(0, σ_g, α_k)` and the group
//! scale a half-normal hyperprior; `σ_g` is sampled on the log scale.

use serde::{Deserialize, Serialize};

use crate::dists::PriorDist;
use crate::error::{Error, Result};
use crate::features::design::{DesignLayout, DesignMatrix};
use crate::glm::bernoulli_logit_ll_and_residual;
use crate::model_spec::{ModelSpec, INTERCEPT};

/// A differentiable log-density over `R^d`.
pub trait LogDensity: Sync {
    fn dim(&self) -> usize;

    /// Returns `log p(q)` and writes its gradient into `grad`. A value of
    /// `-inf` marks a point outside the support.
    fn log_density_grad(&self, q: &[f64], grad: &mut [f64]) -> f64;
}

/// Model parameters in centered form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    /// Intercept followed by one coefficient per standardized design column.
    pub beta: Vec<f64>,
    /// One offset per group level; empty without grouping.
    pub u: Vec<f64>,
    pub log_sigma_g: Option<f64>,
}

impl ParamVector {
    pub fn dim(&self) -> usize {
        self.beta.len() + self.u.len() + usize::from(self.log_sigma_g.is_some())
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.beta.clone();
        v.extend_from_slice(&self.u);
        v.extend(self.log_sigma_g);
        v
    }
}

/// Posterior for one (spec, design, outcomes) triple.
pub struct Posterior<'a> {
    design: &'a DesignMatrix,
    outcomes: &'a [bool],
    intercept_prior: PriorDist,
    column_priors: Vec<PriorDist>,
    level_alpha: Vec<f64>,
    hyper: PriorDist,
}

impl<'a> Posterior<'a> {
    pub fn new(spec: &ModelSpec, design: &'a DesignMatrix, outcomes: &'a [bool]) -> Result<Self> {
        spec.validate()?;
        if design.n_rows() != outcomes.len() {
            return Err(Error::LengthMismatch {
                left: design.n_rows(),
                right: outcomes.len(),
            });
        }
        let layout = &design.layout;
        if spec.grouping.is_grouped() != design.group_index.is_some() {
            return Err(Error::GroupMismatch);
        }
        let intercept_prior = spec.intercept_prior();
        intercept_prior.validate()?;
        let column_priors: Vec<PriorDist> = layout.columns.iter().map(|c| spec.column_prior(c)).collect();
        for p in &column_priors {
            p.validate()?;
        }
        let level_alpha = if spec.grouping.is_grouped() {
            spec.level_alphas(&layout.group_levels)?
        } else {
            Vec::new()
        };
        Ok(Posterior {
            design,
            outcomes,
            intercept_prior,
            column_priors,
            level_alpha,
            hyper: spec.hyper_scale_prior,
        })
    }

    pub fn layout(&self) -> &DesignLayout {
        &self.design.layout
    }

    pub fn n_fixed(&self) -> usize {
        self.design.n_columns() + 1
    }

    pub fn n_groups(&self) -> usize {
        self.level_alpha.len()
    }

    pub fn is_grouped(&self) -> bool {
        self.design.group_index.is_some()
    }

    /// Names in sampler/centered order: intercept, columns, `u[level]`,
    /// `log_sigma_g`.
    pub fn param_names(&self) -> Vec<String> {
        let layout = &self.design.layout;
        let mut names = vec![INTERCEPT.to_string()];
        names.extend(layout.column_names());
        if self.is_grouped() {
            names.extend(layout.group_levels.iter().map(|l| format!("u[{l}]")));
            names.push("log_sigma_g".to_string());
        }
        names
    }

    fn check_dim(&self, theta: &ParamVector) -> Result<()> {
        let expected = self.n_fixed() + if self.is_grouped() { self.n_groups() + 1 } else { 0 };
        let ok = theta.beta.len() == self.n_fixed()
            && theta.u.len() == self.n_groups()
            && theta.log_sigma_g.is_some() == self.is_grouped();
        if !ok {
            return Err(Error::DimensionMismatch {
                expected,
                found: theta.dim(),
            });
        }
        Ok(())
    }

    /// Log-likelihood; accumulates `d/dβ` into `g_beta` and `d/du` into `g_u`.
    fn likelihood(&self, beta: &[f64], u: &[f64], g_beta: &mut [f64], g_u: &mut [f64]) -> f64 {
        let groups = self.design.group_index.as_deref();
        let mut ll = 0.0;
        for (i, (x, &y)) in self.design.rows().zip(self.outcomes).enumerate() {
            let k = groups.and_then(|g| g[i]);
            let mut eta = beta[0] + x.iter().zip(&beta[1..]).map(|(a, b)| a * b).sum::<f64>();
            if let Some(k) = k {
                eta += u[k];
            }
            let (l, r) = bernoulli_logit_ll_and_residual(eta, y);
            ll += l;
            g_beta[0] += r;
            for (g, a) in g_beta[1..].iter_mut().zip(x) {
                *g += r * a;
            }
            if let Some(k) = k {
                g_u[k] += r;
            }
        }
        ll
    }

    /// Fixed-effect prior on the raw scale; accumulates the gradient with
    /// respect to the standardized coefficients.
    fn fixed_prior(&self, beta: &[f64], g_beta: &mut [f64]) -> f64 {
        let layout = &self.design.layout;
        let (raw0, raw) = layout.to_raw_coefficients(beta[0], &beta[1..]);
        let mut g_raw = vec![0.0; beta.len()];
        let (mut lp, g0) = self.intercept_prior.log_pdf_and_grad(raw0);
        g_raw[0] = g0;
        for ((prior, &b), g) in self.column_priors.iter().zip(&raw).zip(g_raw[1..].iter_mut()) {
            let (l, d) = prior.log_pdf_and_grad(b);
            lp += l;
            *g = d;
        }
        layout.pull_back_gradient(&mut g_raw);
        for (g, d) in g_beta.iter_mut().zip(&g_raw) {
            *g += d;
        }
        lp
    }

    /// `log HN(σ) + log σ` and its derivative in `log σ`.
    fn hyper_term(&self, log_sigma: f64) -> (f64, f64) {
        let sigma = log_sigma.exp();
        let (l, d) = self.hyper.log_pdf_and_grad(sigma);
        (l + log_sigma, d * sigma + 1.0)
    }

    /// Centered log-posterior.
    pub fn log_posterior(&self, theta: &ParamVector) -> Result<f64> {
        Ok(self.centered(theta)?.0)
    }

    /// Gradient of the centered log-posterior.
    pub fn grad_log_posterior(&self, theta: &ParamVector) -> Result<ParamVector> {
        Ok(self.centered(theta)?.1)
    }

    fn centered(&self, theta: &ParamVector) -> Result<(f64, ParamVector)> {
        self.check_dim(theta)?;
        let mut g_beta = vec![0.0; theta.beta.len()];
        let mut g_u = vec![0.0; theta.u.len()];
        let mut lp = self.likelihood(&theta.beta, &theta.u, &mut g_beta, &mut g_u);
        lp += self.fixed_prior(&theta.beta, &mut g_beta);
        let mut g_log_sigma = None;
        if let Some(log_sigma) = theta.log_sigma_g {
            let sigma = log_sigma.exp();
            let (h, dh) = self.hyper_term(log_sigma);
            lp += h;
            let mut d_sigma = 0.0;
            for ((&uk, &alpha), g) in theta.u.iter().zip(&self.level_alpha).zip(g_u.iter_mut()) {
                let prior = PriorDist::skew_normal(0.0, sigma, alpha);
                let (l, d) = prior.log_pdf_and_grad(uk);
                lp += l;
                *g += d;
                d_sigma += prior.grad_log_pdf_scale(uk).expect("skew-normal has a scale");
            }
            g_log_sigma = Some(dh + d_sigma * sigma);
        }
        Ok((
            lp,
            ParamVector {
                beta: g_beta,
                u: g_u,
                log_sigma_g: g_log_sigma,
            },
        ))
    }

    /// Splits a sampler-space vector (`β`, `ũ`, `log σ_g`) into centered
    /// parameters with `u = σ_g ũ`.
    pub fn to_centered(&self, q: &[f64]) -> ParamVector {
        let p = self.n_fixed();
        let beta = q[..p].to_vec();
        if !self.is_grouped() {
            return ParamVector {
                beta,
                u: Vec::new(),
                log_sigma_g: None,
            };
        }
        let k = self.n_groups();
        let log_sigma = q[p + k];
        let sigma = log_sigma.exp();
        ParamVector {
            beta,
            u: q[p..p + k].iter().map(|z| sigma * z).collect(),
            log_sigma_g: Some(log_sigma),
        }
    }

    /// Inverse of [`to_centered`](Self::to_centered).
    pub fn to_sampler(&self, theta: &ParamVector) -> Vec<f64> {
        let mut q = theta.beta.clone();
        if let Some(log_sigma) = theta.log_sigma_g {
            let sigma = log_sigma.exp();
            q.extend(theta.u.iter().map(|u| u / sigma));
            q.push(log_sigma);
        }
        q
    }
}

/// Non-centered form used by the sampler: `ũ_k ~ SN(0, 1, α_k)`.
impl LogDensity for Posterior<'_> {
    fn dim(&self) -> usize {
        self.n_fixed() + if self.is_grouped() { self.n_groups() + 1 } else { 0 }
    }

    fn log_density_grad(&self, q: &[f64], grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let p = self.n_fixed();
        let k = self.n_groups();
        let (g_beta, rest) = grad.split_at_mut(p);
        if !self.is_grouped() {
            let mut lp = self.likelihood(&q[..p], &[], g_beta, &mut []);
            lp += self.fixed_prior(&q[..p], g_beta);
            return lp;
        }
        let z = &q[p..p + k];
        let log_sigma = q[p + k];
        let sigma = log_sigma.exp();
        let u: Vec<f64> = z.iter().map(|v| sigma * v).collect();
        let mut g_u = vec![0.0; k];
        let mut lp = self.likelihood(&q[..p], &u, g_beta, &mut g_u);
        lp += self.fixed_prior(&q[..p], g_beta);
        let (h, dh) = self.hyper_term(log_sigma);
        lp += h;
        let (g_z, g_ls) = rest.split_at_mut(k);
        let mut d_log_sigma = dh;
        for i in 0..k {
            let (l, d) = PriorDist::skew_normal(0.0, 1.0, self.level_alpha[i]).log_pdf_and_grad(z[i]);
            lp += l;
            g_z[i] = sigma * g_u[i] + d;
            d_log_sigma += g_u[i] * u[i];
        }
        g_ls[0] = d_log_sigma;
        lp
    }
}

/// Centered log-posterior for `spec`.
pub fn log_posterior(spec: &ModelSpec, design: &DesignMatrix, outcomes: &[bool], theta: &ParamVector) -> Result<f64> {
    Posterior::new(spec, design, outcomes)?.log_posterior(theta)
}

/// Gradient of [`log_posterior`].
pub fn grad_log_posterior(
    spec: &ModelSpec,
    design: &DesignMatrix,
    outcomes: &[bool],
    theta: &ParamVector,
) -> Result<ParamVector> {
    Posterior::new(spec, design, outcomes)?.grad_log_posterior(theta)
}
