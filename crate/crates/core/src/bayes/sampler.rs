//! Hamiltonian Monte Carlo with a diagonal metric.
//!
//! The default transition is the multinomial no-U-turn sampler: the
//! trajectory doubles in a random direction until the generalized U-turn
//! criterion fires (checked across every subtree boundary), a divergence
//! occurs or the depth cap is reached. Step size is tuned by dual averaging
//! and the diagonal metric is estimated from windowed warmup draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::posterior::LogDensity;
use crate::error::{Error, Result};

/// Energy error beyond which a trajectory counts as divergent.
pub const MAX_DELTA_H: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Algorithm {
    Nuts,
    /// Fixed integration time; the step count is `ceil(time / ε)`.
    StaticHmc { integration_time: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub chains: usize,
    /// Iterations per chain, warmup included.
    pub draws: usize,
    pub warmup: usize,
    pub target_accept: f64,
    pub seed: u64,
    pub max_depth: usize,
    pub algorithm: Algorithm,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            chains: 4,
            draws: 1500,
            warmup: 250,
            target_accept: 0.95,
            seed: 0,
            max_depth: 10,
            algorithm: Algorithm::Nuts,
        }
    }
}

impl SamplerConfig {
    pub fn retained(&self) -> usize {
        self.draws - self.warmup
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.chains == 0 {
            return bad("need at least one chain");
        }
        if self.warmup >= self.draws {
            return bad("warmup must be shorter than the total draws");
        }
        if !(self.target_accept > 0.0 && self.target_accept < 1.0) {
            return bad("target acceptance must lie in (0, 1)");
        }
        if self.max_depth == 0 || self.max_depth > 30 {
            return bad("max tree depth must be in 1..=30");
        }
        if let Algorithm::StaticHmc { integration_time } = self.algorithm {
            if !(integration_time > 0.0) {
                return bad("integration time must be positive");
            }
        }
        Ok(())
    }
}

/// Independent stream for one chain.
pub fn chain_rng(seed: u64, chain: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain as u64 + 1);
    rng
}

/// Output of one chain, post-warmup only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOutput {
    /// Sampler-space positions, one per retained iteration.
    pub draws: Vec<Vec<f64>>,
    pub accept_stat: Vec<f64>,
    pub divergent: Vec<bool>,
    pub tree_depth: Vec<usize>,
    pub n_leapfrog: Vec<usize>,
    pub step_size: f64,
    pub inv_metric: Vec<f64>,
    /// Divergences during warmup, reported separately.
    pub warmup_divergences: usize,
}

#[derive(Clone)]
struct Point {
    q: Vec<f64>,
    p: Vec<f64>,
    grad: Vec<f64>,
    logp: f64,
}

/// Phase-space integrator plus the metric.
struct Hamiltonian<'a, T: LogDensity + ?Sized> {
    target: &'a T,
    inv_metric: Vec<f64>,
}

impl<T: LogDensity + ?Sized> Hamiltonian<'_, T> {
    fn init_point(&self, q: Vec<f64>) -> Point {
        let mut grad = vec![0.0; q.len()];
        let logp = self.target.log_density_grad(&q, &mut grad);
        Point {
            p: vec![0.0; q.len()],
            q,
            grad,
            logp,
        }
    }

    fn kinetic(&self, p: &[f64]) -> f64 {
        0.5 * p.iter().zip(&self.inv_metric).map(|(p, m)| p * p * m).sum::<f64>()
    }

    fn energy(&self, z: &Point) -> f64 {
        let h = -z.logp + self.kinetic(&z.p);
        if h.is_nan() {
            f64::INFINITY
        } else {
            h
        }
    }

    /// `M⁻¹ p`, the velocity.
    fn p_sharp(&self, p: &[f64]) -> Vec<f64> {
        p.iter().zip(&self.inv_metric).map(|(p, m)| p * m).collect()
    }

    fn sample_momentum<R: Rng>(&self, z: &mut Point, rng: &mut R) {
        for (p, m) in z.p.iter_mut().zip(&self.inv_metric) {
            let n: f64 = rng.sample(StandardNormal);
            *p = n / m.sqrt();
        }
    }

    fn leapfrog(&self, z: &mut Point, eps: f64) {
        for (p, g) in z.p.iter_mut().zip(&z.grad) {
            *p += 0.5 * eps * g;
        }
        for ((q, p), m) in z.q.iter_mut().zip(&z.p).zip(&self.inv_metric) {
            *q += eps * m * p;
        }
        z.logp = self.target.log_density_grad(&z.q, &mut z.grad);
        for (p, g) in z.p.iter_mut().zip(&z.grad) {
            *p += 0.5 * eps * g;
        }
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn no_u_turn(p_sharp_minus: &[f64], p_sharp_plus: &[f64], rho: &[f64]) -> bool {
    dot(p_sharp_plus, rho) > 0.0 && dot(p_sharp_minus, rho) > 0.0
}

/// Bookkeeping shared by every node of one NUTS transition.
struct TreeStats {
    n_leapfrog: usize,
    sum_metro_prob: f64,
    divergent: bool,
    bad_gradient: bool,
}

/// Ends of a subtree: momentum and velocity at its first and last states.
struct Ends {
    p_beg: Vec<f64>,
    p_sharp_beg: Vec<f64>,
    p_end: Vec<f64>,
    p_sharp_end: Vec<f64>,
}

impl<T: LogDensity + ?Sized> Hamiltonian<'_, T> {
    /// Builds a subtree of `2^depth` leapfrog steps from `z`, which is left at
    /// the last state. Returns `None` when the subtree is invalid (U-turn or
    /// divergence); otherwise the proposal, its ends and the summed momentum.
    #[allow(clippy::too_many_arguments)]
    fn build_tree<R: Rng>(
        &self,
        depth: usize,
        z: &mut Point,
        eps: f64,
        h0: f64,
        log_sum_weight: &mut f64,
        rho: &mut [f64],
        stats: &mut TreeStats,
        rng: &mut R,
    ) -> Option<(Point, Ends)> {
        if depth == 0 {
            self.leapfrog(z, eps);
            stats.n_leapfrog += 1;
            let h = self.energy(z);
            if z.logp.is_finite() && z.grad.iter().any(|g| !g.is_finite()) {
                stats.bad_gradient = true;
                return None;
            }
            if h - h0 > MAX_DELTA_H {
                stats.divergent = true;
            }
            *log_sum_weight = log_sum_exp(*log_sum_weight, h0 - h);
            stats.sum_metro_prob += if h0 - h > 0.0 { 1.0 } else { (h0 - h).exp() };
            for (r, p) in rho.iter_mut().zip(&z.p) {
                *r += p;
            }
            let ps = self.p_sharp(&z.p);
            let ends = Ends {
                p_beg: z.p.clone(),
                p_sharp_beg: ps.clone(),
                p_end: z.p.clone(),
                p_sharp_end: ps,
            };
            return (!stats.divergent).then(|| (z.clone(), ends));
        }

        let dim = z.q.len();
        let mut rho_init = vec![0.0; dim];
        let mut lsw_init = f64::NEG_INFINITY;
        let (propose_init, init) =
            self.build_tree(depth - 1, z, eps, h0, &mut lsw_init, &mut rho_init, stats, rng)?;

        let mut rho_final = vec![0.0; dim];
        let mut lsw_final = f64::NEG_INFINITY;
        let (propose_final, fin) =
            self.build_tree(depth - 1, z, eps, h0, &mut lsw_final, &mut rho_final, stats, rng)?;

        let lsw_subtree = log_sum_exp(lsw_init, lsw_final);
        *log_sum_weight = log_sum_exp(*log_sum_weight, lsw_subtree);
        let take_final = if lsw_final > lsw_subtree {
            true
        } else {
            rng.random::<f64>() < (lsw_final - lsw_subtree).exp()
        };
        let propose = if take_final { propose_final } else { propose_init };

        let rho_subtree = add(&rho_init, &rho_final);
        for (r, s) in rho.iter_mut().zip(&rho_subtree) {
            *r += s;
        }
        let mut persist = no_u_turn(&init.p_sharp_beg, &fin.p_sharp_end, &rho_subtree);
        let rho_ext = add(&rho_init, &fin.p_beg);
        persist &= no_u_turn(&init.p_sharp_beg, &fin.p_sharp_beg, &rho_ext);
        let rho_ext = add(&rho_final, &init.p_end);
        persist &= no_u_turn(&init.p_sharp_end, &fin.p_sharp_end, &rho_ext);

        let ends = Ends {
            p_beg: init.p_beg,
            p_sharp_beg: init.p_sharp_beg,
            p_end: fin.p_end,
            p_sharp_end: fin.p_sharp_end,
        };
        persist.then_some((propose, ends))
    }

    /// One NUTS transition from `z`, which is replaced by the new state.
    fn nuts_transition<R: Rng>(&self, z: &mut Point, eps: f64, max_depth: usize, rng: &mut R) -> Result<Transition> {
        self.sample_momentum(z, rng);
        let h0 = self.energy(z);
        let mut fwd = z.clone();
        let mut bck = z.clone();
        let mut sample = z.clone();
        let ps0 = self.p_sharp(&z.p);
        // Outer ends of the whole trajectory.
        let mut p_fwd_end = z.p.clone();
        let mut p_sharp_fwd_end = ps0.clone();
        let mut p_bck_end = z.p.clone();
        let mut p_sharp_bck_end = ps0;
        let mut rho = z.p.clone();
        let mut log_sum_weight = 0.0;
        let mut stats = TreeStats {
            n_leapfrog: 0,
            sum_metro_prob: 0.0,
            divergent: false,
            bad_gradient: false,
        };
        let mut depth = 0;
        while depth < max_depth {
            let mut rho_sub = vec![0.0; rho.len()];
            let mut lsw_sub = f64::NEG_INFINITY;
            let forward = rng.random::<f64>() > 0.5;
            let built = if forward {
                self.build_tree(depth, &mut fwd, eps, h0, &mut lsw_sub, &mut rho_sub, &mut stats, rng)
            } else {
                self.build_tree(depth, &mut bck, -eps, h0, &mut lsw_sub, &mut rho_sub, &mut stats, rng)
            };
            if stats.bad_gradient {
                return Err(Error::NonFiniteGradient { chain: 0, iteration: 0 });
            }
            let Some((propose, ends)) = built else { break };
            depth += 1;
            if lsw_sub > log_sum_weight || rng.random::<f64>() < (lsw_sub - log_sum_weight).exp() {
                sample = propose;
            }
            log_sum_weight = log_sum_exp(log_sum_weight, lsw_sub);

            // Order everything from the backward end to the forward end.
            let (rho_bck, rho_fwd, sub_beg_p, sub_beg_ps, sub_end_p, sub_end_ps);
            if forward {
                rho_bck = rho.clone();
                rho_fwd = rho_sub;
                sub_beg_p = ends.p_beg;
                sub_beg_ps = ends.p_sharp_beg;
                sub_end_p = ends.p_end;
                sub_end_ps = ends.p_sharp_end;
            } else {
                rho_bck = rho_sub;
                rho_fwd = rho.clone();
                // A backward subtree is built in reverse; its last state is
                // the new backward end.
                sub_beg_p = ends.p_end;
                sub_beg_ps = ends.p_sharp_end;
                sub_end_p = ends.p_beg;
                sub_end_ps = ends.p_sharp_beg;
            }
            // Inner boundary states adjacent to the join.
            let (bck_inner_p, bck_inner_ps, fwd_inner_p, fwd_inner_ps, outer_bck_ps, outer_fwd_ps);
            if forward {
                bck_inner_p = p_fwd_end.clone();
                bck_inner_ps = p_sharp_fwd_end.clone();
                fwd_inner_p = sub_beg_p;
                fwd_inner_ps = sub_beg_ps;
                outer_bck_ps = p_sharp_bck_end.clone();
                outer_fwd_ps = sub_end_ps.clone();
                p_fwd_end = sub_end_p;
                p_sharp_fwd_end = sub_end_ps;
            } else {
                bck_inner_p = sub_end_p.clone();
                bck_inner_ps = sub_end_ps.clone();
                fwd_inner_p = p_bck_end.clone();
                fwd_inner_ps = p_sharp_bck_end.clone();
                outer_bck_ps = sub_beg_ps.clone();
                outer_fwd_ps = p_sharp_fwd_end.clone();
                p_bck_end = sub_beg_p;
                p_sharp_bck_end = sub_beg_ps;
            }
            rho = add(&rho_bck, &rho_fwd);
            let mut persist = no_u_turn(&outer_bck_ps, &outer_fwd_ps, &rho);
            persist &= no_u_turn(&outer_bck_ps, &fwd_inner_ps, &add(&rho_bck, &fwd_inner_p));
            persist &= no_u_turn(&bck_inner_ps, &outer_fwd_ps, &add(&rho_fwd, &bck_inner_p));
            if !persist {
                break;
            }
        }
        let n = stats.n_leapfrog.max(1);
        *z = sample;
        Ok(Transition {
            accept_stat: stats.sum_metro_prob / n as f64,
            divergent: stats.divergent,
            depth,
            n_leapfrog: stats.n_leapfrog,
        })
    }

    /// Fixed-length HMC with a Metropolis correction.
    fn static_transition<R: Rng>(&self, z: &mut Point, eps: f64, steps: usize, rng: &mut R) -> Result<Transition> {
        self.sample_momentum(z, rng);
        let h0 = self.energy(z);
        let mut prop = z.clone();
        let mut divergent = false;
        for _ in 0..steps {
            self.leapfrog(&mut prop, eps);
            if prop.logp.is_finite() && prop.grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::NonFiniteGradient { chain: 0, iteration: 0 });
            }
            if self.energy(&prop) - h0 > MAX_DELTA_H {
                divergent = true;
                break;
            }
        }
        let h = self.energy(&prop);
        let accept = if divergent { 0.0 } else { (h0 - h).exp().min(1.0) };
        if rng.random::<f64>() < accept {
            *z = prop;
        }
        Ok(Transition {
            accept_stat: accept,
            divergent,
            depth: 0,
            n_leapfrog: steps,
        })
    }

    /// Doubles or halves `eps` until the one-step acceptance crosses 0.8.
    fn find_reasonable_step<R: Rng>(&self, z: &Point, eps: f64, rng: &mut R) -> f64 {
        let mut eps = eps;
        let mut probe = z.clone();
        self.sample_momentum(&mut probe, rng);
        let h0 = self.energy(&probe);
        let start = probe.clone();
        self.leapfrog(&mut probe, eps);
        let delta = h0 - self.energy(&probe);
        let direction = if delta > (0.8f64).ln() { 1.0 } else { -1.0 };
        for _ in 0..100 {
            let mut probe = start.clone();
            self.sample_momentum(&mut probe, rng);
            let h0 = self.energy(&probe);
            self.leapfrog(&mut probe, eps);
            let delta = h0 - self.energy(&probe);
            if direction > 0.0 && !(delta > (0.8f64).ln()) {
                break;
            }
            if direction < 0.0 && !(delta < (0.8f64).ln()) {
                break;
            }
            eps = if direction > 0.0 { 2.0 * eps } else { 0.5 * eps };
            if !(1e-7..=1e7).contains(&eps) {
                break;
            }
        }
        eps.clamp(1e-7, 1e7)
    }
}

struct Transition {
    accept_stat: f64,
    divergent: bool,
    depth: usize,
    n_leapfrog: usize,
}

/// Dual-averaging step size adaptation.
struct DualAveraging {
    mu: f64,
    target: f64,
    counter: f64,
    s_bar: f64,
    x_bar: f64,
}

impl DualAveraging {
    const GAMMA: f64 = 0.05;
    const T0: f64 = 10.0;
    const KAPPA: f64 = 0.75;

    fn new(eps: f64, target: f64) -> Self {
        DualAveraging {
            mu: (10.0 * eps).ln(),
            target,
            counter: 0.0,
            s_bar: 0.0,
            x_bar: 0.0,
        }
    }

    fn restart(&mut self, eps: f64) {
        *self = DualAveraging::new(eps, self.target);
    }

    fn learn(&mut self, accept_stat: f64) -> f64 {
        self.counter += 1.0;
        let accept = accept_stat.min(1.0);
        let eta = 1.0 / (self.counter + Self::T0);
        self.s_bar = (1.0 - eta) * self.s_bar + eta * (self.target - accept);
        let x = self.mu - self.s_bar * self.counter.sqrt() / Self::GAMMA;
        let x_eta = self.counter.powf(-Self::KAPPA);
        self.x_bar = (1.0 - x_eta) * self.x_bar + x_eta * x;
        x.exp()
    }

    fn final_step(&self) -> f64 {
        self.x_bar.exp()
    }
}

/// Warmup schedule: an initial fast buffer, slow windows that double in
/// length and feed the metric estimate, and a terminal fast buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmupSchedule {
    pub init_buffer: usize,
    pub term_buffer: usize,
    /// Half-open `[start, end)` iteration ranges whose draws estimate the
    /// metric; the metric is updated at each `end`.
    pub windows: Vec<(usize, usize)>,
}

impl WarmupSchedule {
    pub fn new(warmup: usize) -> Self {
        let (mut init, mut term, base) = (75usize, 50usize, 25usize);
        if warmup < 20 {
            return WarmupSchedule {
                init_buffer: warmup,
                term_buffer: 0,
                windows: Vec::new(),
            };
        }
        if init + term + base > warmup {
            init = warmup * 15 / 100;
            term = warmup / 10;
        }
        let slow_end = warmup - term;
        let mut windows = Vec::new();
        let mut start = init;
        let mut size = slow_end.saturating_sub(init).min(base).max(1);
        while start < slow_end {
            let mut end = (start + size).min(slow_end);
            // Stretch the last window instead of leaving a short tail.
            if end + 2 * size > slow_end {
                end = slow_end;
            }
            windows.push((start, end));
            start = end;
            size *= 2;
        }
        WarmupSchedule {
            init_buffer: init,
            term_buffer: term,
            windows,
        }
    }
}

/// Welford accumulator for the diagonal metric.
struct VarianceEstimator {
    n: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl VarianceEstimator {
    fn new(dim: usize) -> Self {
        VarianceEstimator {
            n: 0.0,
            mean: vec![0.0; dim],
            m2: vec![0.0; dim],
        }
    }

    fn add(&mut self, q: &[f64]) {
        self.n += 1.0;
        for ((m, s), x) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(q) {
            let d = x - *m;
            *m += d / self.n;
            *s += d * (x - *m);
        }
    }

    /// Sample variance shrunk towards `1e-3`, as in common practice.
    fn regularized(&self) -> Vec<f64> {
        let n = self.n;
        if n < 2.0 {
            return vec![1.0; self.mean.len()];
        }
        self.m2
            .iter()
            .map(|s| {
                let var = s / (n - 1.0);
                (n / (n + 5.0)) * var + 1e-3 * (5.0 / (n + 5.0))
            })
            .collect()
    }
}

/// Picks a starting point with finite density: uniform on (-2, 2), shrinking
/// the box if the density is not finite there.
fn initial_point<T: LogDensity + ?Sized, R: Rng>(target: &T, rng: &mut R) -> Vec<f64> {
    let dim = target.dim();
    let mut grad = vec![0.0; dim];
    let mut radius = 2.0;
    for attempt in 0..200 {
        let q: Vec<f64> = (0..dim).map(|_| rng.random_range(-radius..radius)).collect();
        let lp = target.log_density_grad(&q, &mut grad);
        if lp.is_finite() && grad.iter().all(|g| g.is_finite()) {
            return q;
        }
        if attempt % 20 == 19 {
            radius *= 0.25;
        }
    }
    vec![0.0; dim]
}

/// Runs one chain. `chain` only labels errors; randomness comes from `rng`.
pub fn run_chain<T: LogDensity + ?Sized>(
    target: &T,
    config: &SamplerConfig,
    chain: usize,
    init: Option<Vec<f64>>,
) -> Result<ChainOutput> {
    let mut rng = chain_rng(config.seed, chain);
    let dim = target.dim();
    let q0 = match init {
        Some(q) => q,
        None => initial_point(target, &mut rng),
    };
    let mut ham = Hamiltonian {
        target,
        inv_metric: vec![1.0; dim],
    };
    let mut z = ham.init_point(q0);
    if !z.logp.is_finite() {
        return Err(Error::InvalidConfig("initial point has zero posterior density".into()));
    }
    if z.grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFiniteGradient { chain, iteration: 0 });
    }
    let mut eps = ham.find_reasonable_step(&z, 1.0, &mut rng);
    let mut da = DualAveraging::new(eps, config.target_accept);
    let schedule = WarmupSchedule::new(config.warmup);
    let mut window = 0;
    let mut estimator = VarianceEstimator::new(dim);

    let retained = config.retained();
    let mut out = ChainOutput {
        draws: Vec::with_capacity(retained),
        accept_stat: Vec::with_capacity(retained),
        divergent: Vec::with_capacity(retained),
        tree_depth: Vec::with_capacity(retained),
        n_leapfrog: Vec::with_capacity(retained),
        step_size: eps,
        inv_metric: Vec::new(),
        warmup_divergences: 0,
    };

    for it in 0..config.draws {
        let t = match config.algorithm {
            Algorithm::Nuts => ham.nuts_transition(&mut z, eps, config.max_depth, &mut rng),
            Algorithm::StaticHmc { integration_time } => {
                let steps = ((integration_time / eps).ceil() as usize).clamp(1, 1 << config.max_depth);
                ham.static_transition(&mut z, eps, steps, &mut rng)
            }
        }
        .map_err(|e| match e {
            Error::NonFiniteGradient { .. } => Error::NonFiniteGradient { chain, iteration: it },
            other => other,
        })?;

        if it < config.warmup {
            if t.divergent {
                out.warmup_divergences += 1;
            }
            eps = da.learn(t.accept_stat);
            if let Some(&(start, end)) = schedule.windows.get(window) {
                if it >= start && it < end {
                    estimator.add(&z.q);
                }
                if it + 1 == end {
                    ham.inv_metric = estimator.regularized();
                    estimator = VarianceEstimator::new(dim);
                    window += 1;
                    eps = ham.find_reasonable_step(&z, eps, &mut rng);
                    da.restart(eps);
                }
            }
            if it + 1 == config.warmup {
                eps = da.final_step();
            }
            continue;
        }
        out.draws.push(z.q.clone());
        out.accept_stat.push(t.accept_stat);
        out.divergent.push(t.divergent);
        out.tree_depth.push(t.depth);
        out.n_leapfrog.push(t.n_leapfrog);
    }
    out.step_size = eps;
    out.inv_metric = ham.inv_metric;
    Ok(out)
}

/// Runs all chains in parallel; output order and content do not depend on
/// the thread count.
pub fn run_chains<T: LogDensity + ?Sized>(target: &T, config: &SamplerConfig) -> Result<Vec<ChainOutput>> {
    use rayon::prelude::*;
    config.validate()?;
    (0..config.chains)
        .into_par_iter()
        .map(|c| run_chain(target, config, c, None))
        .collect()
}

/// Energy change `H(end) - H(start)` of `steps` leapfrog steps from `(q, p)`
/// with a unit metric; exposed for integrator checks.
pub fn leapfrog_energy_error<T: LogDensity + ?Sized>(target: &T, q: &[f64], p: &[f64], eps: f64, steps: usize) -> f64 {
    let ham = Hamiltonian {
        target,
        inv_metric: vec![1.0; q.len()],
    };
    let mut z = ham.init_point(q.to_vec());
    z.p = p.to_vec();
    let h0 = ham.energy(&z);
    for _ in 0..steps {
        ham.leapfrog(&mut z, eps);
    }
    ham.energy(&z) - h0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_warmup_windows() {
        let s = WarmupSchedule::new(250);
        assert_eq!(s.init_buffer, 75);
        assert_eq!(s.term_buffer, 50);
        assert_eq!(s.windows, vec![(75, 100), (100, 200)]);
        let s = WarmupSchedule::new(1000);
        assert_eq!(s.windows.last().unwrap().1, 950);
        assert_eq!(s.windows[0], (75, 100));
    }

    #[test]
    fn short_warmup_still_has_windows() {
        let s = WarmupSchedule::new(100);
        assert!(!s.windows.is_empty());
        assert!(s.windows.last().unwrap().1 <= 100 - s.term_buffer);
        assert!(WarmupSchedule::new(10).windows.is_empty());
    }

    #[test]
    fn dual_averaging_moves_towards_target() {
        let mut da = DualAveraging::new(1.0, 0.8);
        let small = da.learn(0.2);
        da.restart(1.0);
        let large = da.learn(1.0);
        assert!(small < large);
    }

    #[test]
    fn log_sum_exp_handles_infinities() {
        assert_eq!(log_sum_exp(f64::NEG_INFINITY, 1.0), 1.0);
        assert!((log_sum_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut c = SamplerConfig::default();
        c.warmup = c.draws;
        assert!(c.validate().is_err());
        let mut c = SamplerConfig::default();
        c.target_accept = 1.0;
        assert!(c.validate().is_err());
    }
}
