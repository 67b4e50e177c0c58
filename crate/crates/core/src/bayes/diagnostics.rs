//! Split-chain R-hat, effective sample size and Monte Carlo standard error.

use crate::error::{Error, Result};

pub const MIN_CHAINS: usize = 2;
pub const MIN_DRAWS: usize = 100;

fn check(chains: &[Vec<f64>]) -> Result<()> {
    if chains.len() < MIN_CHAINS || chains.iter().any(|c| c.len() < MIN_DRAWS) {
        return Err(Error::InsufficientDraws {
            min_chains: MIN_CHAINS,
            min_draws: MIN_DRAWS,
        });
    }
    Ok(())
}

/// Halves every chain (dropping the middle draw of odd-length chains) and
/// truncates all halves to a common length.
fn split(chains: &[Vec<f64>]) -> Vec<&[f64]> {
    let n = chains.iter().map(|c| c.len() / 2).min().unwrap_or(0);
    chains
        .iter()
        .flat_map(|c| {
            let len = c.len();
            [&c[..n], &c[len - n..]]
        })
        .collect()
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample_var(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// Potential scale reduction on split chains. Constant chains give NaN.
pub fn rhat(chains: &[Vec<f64>]) -> Result<f64> {
    check(chains)?;
    let halves = split(chains);
    let n = halves[0].len() as f64;
    let means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let w = mean(&halves.iter().map(|h| sample_var(h)).collect::<Vec<_>>());
    let b = n * sample_var(&means);
    if !(w > 0.0) {
        return Ok(f64::NAN);
    }
    let var_plus = (n - 1.0) / n * w + b / n;
    Ok((var_plus / w).sqrt())
}

/// Biased autocovariance at lags `0..n`.
fn autocovariance(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let m = mean(x);
    let c: Vec<f64> = x.iter().map(|v| v - m).collect();
    (0..n)
        .map(|lag| c[..n - lag].iter().zip(&c[lag..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect()
}

/// Effective sample size from the multi-chain autocorrelation estimate,
/// truncated with Geyer's initial monotone sequence.
pub fn ess(chains: &[Vec<f64>]) -> Result<f64> {
    check(chains)?;
    let halves = split(chains);
    let m = halves.len();
    let n = halves[0].len();
    let acov: Vec<Vec<f64>> = halves.iter().map(|h| autocovariance(h)).collect();
    let chain_means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let chain_vars: Vec<f64> = acov.iter().map(|a| a[0] * n as f64 / (n as f64 - 1.0)).collect();
    let mean_var = mean(&chain_vars);
    let var_plus = mean_var * (n as f64 - 1.0) / n as f64 + sample_var(&chain_means);
    if !(var_plus > 0.0) {
        return Ok(f64::NAN);
    }
    let rho_at = |t: usize| 1.0 - (mean_var - acov.iter().map(|a| a[t]).sum::<f64>() / m as f64) / var_plus;

    let mut rho = vec![0.0; n];
    rho[0] = 1.0;
    let mut rho_even = 1.0;
    let mut rho_odd = rho_at(1);
    rho[1] = rho_odd;
    let mut t = 1;
    while t + 5 < n && rho_even + rho_odd > 0.0 {
        rho_even = rho_at(t + 1);
        rho_odd = rho_at(t + 2);
        if rho_even + rho_odd >= 0.0 {
            rho[t + 1] = rho_even;
            rho[t + 2] = rho_odd;
        }
        t += 2;
    }
    let max_t = t;
    if rho_even > 0.0 {
        rho[max_t + 1] = rho_even;
    }
    // Monotone sequence of paired sums.
    let mut t = 1;
    while t + 2 <= max_t {
        if rho[t + 1] + rho[t + 2] > rho[t - 1] + rho[t] {
            rho[t + 1] = (rho[t - 1] + rho[t]) / 2.0;
            rho[t + 2] = rho[t + 1];
        }
        t += 2;
    }
    let total = (m * n) as f64;
    let tau = (-1.0 + 2.0 * rho[..max_t].iter().sum::<f64>() + rho[max_t + 1]).max(1.0 / total.log10());
    Ok(total / tau)
}

/// Monte Carlo standard error of the posterior mean.
pub fn mcse(chains: &[Vec<f64>]) -> Result<f64> {
    let e = ess(chains)?;
    let all: Vec<f64> = chains.iter().flatten().copied().collect();
    Ok((sample_var(&all) / e).sqrt())
}
