//! Bayesian hierarchical logistic models sampled with adaptive HMC.
//!
//! Varying intercepts only: every shot shares the fixed effects and gets
//! the offset of its group level (position or selected player). The sampler
//! works on non-centered offsets; stored draws are centered.

pub mod diagnostics;
pub mod posterior;
pub mod sampler;

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::design::{DesignLayout, DesignMatrix};
use crate::glm::sigmoid;
use crate::model_spec::ModelSpec;

pub use posterior::{grad_log_posterior, log_posterior, LogDensity, ParamVector, Posterior};
pub use sampler::{run_chain, run_chains, Algorithm, ChainOutput, SamplerConfig};

/// Post-warmup divergence share above which a run is flagged.
pub const DIVERGENCE_FLAG_RATE: f64 = 0.05;

/// Per-chain sampler statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub chain: usize,
    pub step_size: f64,
    pub inv_metric: Vec<f64>,
    pub mean_accept_stat: f64,
    pub divergences: usize,
    pub warmup_divergences: usize,
    pub mean_tree_depth: f64,
    pub total_leapfrog: usize,
    pub accept_stat: Vec<f64>,
    pub divergent: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSamples {
    pub param_names: Vec<String>,
    /// `chains[c][d]` is the centered parameter vector of retained draw `d`.
    pub chains: Vec<Vec<Vec<f64>>>,
    pub stats: Vec<ChainStats>,
    pub config: SamplerConfig,
    pub layout: DesignLayout,
    /// Intercept plus one coefficient per design column.
    pub n_fixed: usize,
    pub n_groups: usize,
    pub divergence_rate: f64,
    pub divergence_flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
    pub rhat: f64,
    pub ess: f64,
    pub mcse: f64,
}

/// Linear interpolation quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl PosteriorSamples {
    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.param_names.iter().position(|n| n == name)
    }

    pub fn is_grouped(&self) -> bool {
        self.n_groups > 0
    }

    /// Draws of one parameter, one vector per chain.
    pub fn param_chains(&self, j: usize) -> Vec<Vec<f64>> {
        self.chains.iter().map(|c| c.iter().map(|d| d[j]).collect()).collect()
    }

    pub fn draws(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.chains.iter().flatten()
    }

    pub fn n_draws(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    pub fn mean(&self, j: usize) -> f64 {
        self.draws().map(|d| d[j]).sum::<f64>() / self.n_draws() as f64
    }

    pub fn mean_accept_stat(&self) -> f64 {
        let n: usize = self.stats.iter().map(|s| s.accept_stat.len()).sum();
        self.stats.iter().flat_map(|s| &s.accept_stat).sum::<f64>() / n as f64
    }

    /// Posterior mean offset per group level.
    pub fn mean_group_offsets(&self) -> Vec<(String, f64)> {
        self.layout
            .group_levels
            .iter()
            .enumerate()
            .map(|(k, l)| (l.clone(), self.mean(self.n_fixed + k)))
            .collect()
    }

    /// Summary of every parameter. Diagnostics are NaN when there are too
    /// few chains or draws to compute them.
    pub fn summary(&self) -> Vec<ParamSummary> {
        (0..self.param_names.len())
            .into_par_iter()
            .map(|j| {
                let chains = self.param_chains(j);
                let mut all: Vec<f64> = chains.iter().flatten().copied().collect();
                let n = all.len() as f64;
                let mean = all.iter().sum::<f64>() / n;
                let sd = (all.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
                all.sort_by(f64::total_cmp);
                ParamSummary {
                    name: self.param_names[j].clone(),
                    mean,
                    sd,
                    q05: quantile_sorted(&all, 0.05),
                    q50: quantile_sorted(&all, 0.5),
                    q95: quantile_sorted(&all, 0.95),
                    rhat: diagnostics::rhat(&chains).unwrap_or(f64::NAN),
                    ess: diagnostics::ess(&chains).unwrap_or(f64::NAN),
                    mcse: diagnostics::mcse(&chains).unwrap_or(f64::NAN),
                }
            })
            .collect()
    }

    /// Columnar CSV: `chain,draw,<param...>`, one row per retained draw.
    pub fn write_draws_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["chain".to_string(), "draw".to_string()];
        header.extend(self.param_names.iter().cloned());
        w.write_record(&header)?;
        for (c, chain) in self.chains.iter().enumerate() {
            for (d, draw) in chain.iter().enumerate() {
                let mut rec = vec![c.to_string(), d.to_string()];
                rec.extend(draw.iter().map(|v| v.to_string()));
                w.write_record(&rec)?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        serde_json::to_writer(&mut w, self)?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }
}

/// Samples the posterior of `spec` on `design`.
pub fn run_hmc(spec: &ModelSpec, design: &DesignMatrix, outcomes: &[bool], config: &SamplerConfig) -> Result<PosteriorSamples> {
    let post = Posterior::new(spec, design, outcomes)?;
    let outputs = run_chains(&post, config)?;
    Ok(collect_samples(&post, outputs, config))
}

fn collect_samples(post: &Posterior<'_>, outputs: Vec<ChainOutput>, config: &SamplerConfig) -> PosteriorSamples {
    let mut chains = Vec::with_capacity(outputs.len());
    let mut stats = Vec::with_capacity(outputs.len());
    for (c, out) in outputs.into_iter().enumerate() {
        chains.push(out.draws.iter().map(|q| post.to_centered(q).to_vec()).collect());
        let n = out.accept_stat.len().max(1) as f64;
        stats.push(ChainStats {
            chain: c,
            step_size: out.step_size,
            mean_accept_stat: out.accept_stat.iter().sum::<f64>() / n,
            divergences: out.divergent.iter().filter(|&&d| d).count(),
            warmup_divergences: out.warmup_divergences,
            mean_tree_depth: out.tree_depth.iter().sum::<usize>() as f64 / n,
            total_leapfrog: out.n_leapfrog.iter().sum(),
            inv_metric: out.inv_metric,
            accept_stat: out.accept_stat,
            divergent: out.divergent,
        });
    }
    let total: usize = stats.iter().map(|s| s.divergent.len()).sum();
    let divergent: usize = stats.iter().map(|s| s.divergences).sum();
    let divergence_rate = divergent as f64 / total.max(1) as f64;
    let divergence_flagged = divergence_rate > DIVERGENCE_FLAG_RATE;
    if divergence_flagged {
        log::warn!("{:.1}% of post-warmup transitions diverged", 100.0 * divergence_rate);
    }
    PosteriorSamples {
        param_names: post.param_names(),
        chains,
        stats,
        config: config.clone(),
        layout: post.layout().clone(),
        n_fixed: post.n_fixed(),
        n_groups: post.n_groups(),
        divergence_rate,
        divergence_flagged,
    }
}

/// Per-shot posterior predictive summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predictive {
    pub mean: Vec<f64>,
    /// Central 90% interval.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Averages `p_i` over every retained draw. Shots whose group level the fit
/// does not know use a zero offset.
pub fn posterior_predict(samples: &PosteriorSamples, design: &DesignMatrix) -> Result<Predictive> {
    let names = samples.layout.column_names();
    design.check_columns(&names)?;
    let groups = if samples.is_grouped() {
        if design.layout.group_levels != samples.layout.group_levels {
            return Err(Error::GroupMismatch);
        }
        Some(design.group_index.as_deref().ok_or(Error::GroupMismatch)?)
    } else {
        None
    };
    let draws: Vec<&Vec<f64>> = samples.draws().collect();
    if draws.is_empty() {
        return Err(Error::InsufficientDraws { min_chains: 1, min_draws: 1 });
    }
    let p = samples.n_fixed;
    let rows: Vec<(f64, f64, f64)> = (0..design.n_rows())
        .into_par_iter()
        .map(|i| {
            let x = design.row(i);
            let k = groups.and_then(|g| g[i]);
            let mut probs: Vec<f64> = draws
                .iter()
                .map(|d| {
                    let mut eta = d[0] + x.iter().zip(&d[1..p]).map(|(a, b)| a * b).sum::<f64>();
                    if let Some(k) = k {
                        eta += d[p + k];
                    }
                    sigmoid(eta)
                })
                .collect();
            let mean = probs.iter().sum::<f64>() / probs.len() as f64;
            probs.sort_by(f64::total_cmp);
            (mean, quantile_sorted(&probs, 0.05), quantile_sorted(&probs, 0.95))
        })
        .collect();
    Ok(Predictive {
        mean: rows.iter().map(|r| r.0).collect(),
        lower: rows.iter().map(|r| r.1).collect(),
        upper: rows.iter().map(|r| r.2).collect(),
    })
}

/// JSON run manifest: configuration, seeds, sampler statistics and
/// per-parameter diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplerManifest {
    pub config: SamplerConfig,
    pub chain_streams: Vec<u64>,
    pub retained_per_chain: usize,
    pub mean_accept_stat: f64,
    pub divergences: usize,
    pub divergence_rate: f64,
    pub divergence_flagged: bool,
    pub chains: Vec<ChainManifest>,
    pub parameters: Vec<ParamSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainManifest {
    pub chain: usize,
    pub step_size: f64,
    pub mean_accept_stat: f64,
    pub divergences: usize,
    pub warmup_divergences: usize,
    pub mean_tree_depth: f64,
    pub total_leapfrog: usize,
}

impl SamplerManifest {
    pub fn new(samples: &PosteriorSamples) -> Self {
        SamplerManifest {
            config: samples.config.clone(),
            chain_streams: (0..samples.chains.len() as u64).map(|c| c + 1).collect(),
            retained_per_chain: samples.config.retained(),
            mean_accept_stat: samples.mean_accept_stat(),
            divergences: samples.stats.iter().map(|s| s.divergences).sum(),
            divergence_rate: samples.divergence_rate,
            divergence_flagged: samples.divergence_flagged,
            chains: samples
                .stats
                .iter()
                .map(|s| ChainManifest {
                    chain: s.chain,
                    step_size: s.step_size,
                    mean_accept_stat: s.mean_accept_stat,
                    divergences: s.divergences,
                    warmup_divergences: s.warmup_divergences,
                    mean_tree_depth: s.mean_tree_depth,
                    total_leapfrog: s.total_leapfrog,
                })
                .collect(),
            parameters: samples.summary(),
        }
    }
}
