//! Sample generation: uniform, direct informed (prolate hyperspheroid),
//! near-path biased, and the batch-size schedule.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{euclid_cost, Cost, ProblemDef, StateVec};

/// Consecutive rejections tolerated before a draw gives up.
pub const REJECTION_CAP: usize = 10_000;

/// Exponentially growing batch sizes: `init * (1 + alpha)^n`, capped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Variational {
    pub init: usize,
    pub alpha: f64,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_cap() -> usize {
    100_000
}

impl Variational {
    pub fn new(init: usize, alpha: f64) -> Self {
        Variational {
            init,
            alpha,
            cap: default_cap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub batch_size: usize,
    #[serde(default)]
    pub variational: Option<Variational>,
    /// Probability that a draw is taken near the current solution path.
    #[serde(default)]
    pub p_near: f64,
    /// Std-dev of the near-path perturbation, as a fraction of `c_cur / 2`.
    #[serde(default = "default_sigma_frac")]
    pub near_sigma_frac: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_sigma_frac() -> f64 {
    0.05
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            batch_size: 100,
            variational: None,
            p_near: 0.0,
            near_sigma_frac: default_sigma_frac(),
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::invalid("batch_size", "must be positive"));
        }
        if let Some(v) = &self.variational {
            if v.init == 0 || v.cap == 0 || !(v.alpha.is_finite() && v.alpha > 0.0) {
                return Err(Error::invalid(
                    "variational",
                    "init and cap must be positive and alpha a positive real",
                ));
            }
        }
        if !(0.0..1.0).contains(&self.p_near) {
            return Err(Error::invalid("p_near", "must lie in [0, 1)"));
        }
        if !(self.near_sigma_frac.is_finite() && self.near_sigma_frac > 0.0) {
            return Err(Error::invalid("near_sigma_frac", "must be positive"));
        }
        Ok(())
    }
}

/// Deterministic, portable random stream.
#[derive(Debug, Clone)]
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

fn uniform_in_bounds(p: &ProblemDef, rng: &mut RngStream) -> StateVec {
    p.bounds
        .lo
        .iter()
        .zip(&p.bounds.hi)
        .map(|(&lo, &hi)| lo + (hi - lo) * rng.random::<f64>())
        .collect()
}

/// Uniform over the bounds, rejection-resampled until valid.
pub fn sample_uniform(p: &ProblemDef, rng: &mut RngStream) -> Result<StateVec> {
    for _ in 0..REJECTION_CAP {
        let x = uniform_in_bounds(p, rng);
        if p.is_valid(&x) {
            return Ok(x);
        }
    }
    Err(Error::SpaceSaturated(REJECTION_CAP))
}

fn informed_sum(p: &ProblemDef, x: &[f64]) -> Cost {
    let (a, b) = p.heuristic_bounds(x);
    a + b
}

fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}

/// Uniform over `{x : |x - start| + min_g |x - g| <= c_cur}` intersected
/// with the valid space.
///
/// With a single goal the hyperspheroid is sampled directly unless the
/// bounds are the smaller region, in which case bounds-uniform rejection is
/// cheaper. Multiple goals always use rejection on the min-sum bound.
pub fn sample_informed(p: &ProblemDef, c_cur: Cost, rng: &mut RngStream) -> Result<StateVec> {
    if !c_cur.is_finite() {
        return sample_uniform(p, rng);
    }
    if p.goals.len() != 1 {
        return sample_rejection(p, c_cur, rng);
    }
    let goal = &p.goals[0];
    let c_min = euclid_cost(&p.start, goal);
    if c_cur <= c_min {
        // Degenerate hyperspheroid: the focal segment itself.
        for _ in 0..REJECTION_CAP {
            let t: f64 = rng.random();
            let x: StateVec = p
                .start
                .iter()
                .zip(goal)
                .map(|(s, g)| s + t * (g - s))
                .collect();
            if p.is_valid(&x) {
                return Ok(x);
            }
        }
        return Err(Error::SpaceSaturated(REJECTION_CAP));
    }
    let d = p.dim;
    let major = c_cur / 2.0;
    let minor = (c_cur * c_cur - c_min * c_min).sqrt() / 2.0;
    let ellipsoid_volume = unit_ball_volume(d) * major * minor.powi(d as i32 - 1);
    if ellipsoid_volume >= p.bounds.volume() {
        return sample_rejection(p, c_cur, rng);
    }

    let center: StateVec = p.start.iter().zip(goal).map(|(s, g)| 0.5 * (s + g)).collect();
    let axis: StateVec = if c_min > 0.0 {
        p.start.iter().zip(goal).map(|(s, g)| (g - s) / c_min).collect()
    } else {
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        e
    };
    // Householder reflection taking e1 onto the focal axis; the stretched
    // ball is symmetric, so a reflection serves as well as a rotation.
    let mut w = axis.clone();
    w[0] -= 1.0;
    let w_norm2: f64 = w.iter().map(|v| v * v).sum();

    let mut ball = vec![0.0; d];
    for _ in 0..REJECTION_CAP {
        loop {
            for v in ball.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            let n: f64 = ball.iter().map(|v| v * v).sum::<f64>().sqrt();
            if n > 0.0 {
                let r = rng.random::<f64>().powf(1.0 / d as f64);
                for v in ball.iter_mut() {
                    *v *= r / n;
                }
                break;
            }
        }
        ball[0] *= major;
        for v in ball.iter_mut().skip(1) {
            *v *= minor;
        }
        if w_norm2 > 1e-24 {
            let dot: f64 = w.iter().zip(&ball).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / w_norm2;
            for (v, wi) in ball.iter_mut().zip(&w) {
                *v -= f * wi;
            }
        }
        let x: StateVec = ball.iter().zip(&center).map(|(v, c)| v + c).collect();
        if p.is_valid(&x) && informed_sum(p, &x) <= c_cur {
            return Ok(x);
        }
    }
    Err(Error::SpaceSaturated(REJECTION_CAP))
}

fn sample_rejection(p: &ProblemDef, c_cur: Cost, rng: &mut RngStream) -> Result<StateVec> {
    for _ in 0..REJECTION_CAP {
        let x = uniform_in_bounds(p, rng);
        if p.is_valid(&x) && informed_sum(p, &x) <= c_cur {
            return Ok(x);
        }
    }
    Err(Error::SpaceSaturated(REJECTION_CAP))
}

/// A point picked uniformly by arc length along `path`, perturbed by
/// isotropic Gaussian noise with std-dev `sigma_frac * c_cur / 2` and kept
/// only inside the informed set. Falls back to informed sampling when the
/// rejection cap is hit.
pub fn sample_near_path(
    p: &ProblemDef,
    path: &[StateVec],
    c_cur: Cost,
    sigma_frac: f64,
    rng: &mut RngStream,
) -> Result<StateVec> {
    if path.is_empty() {
        return Err(Error::Usage("near-path sampling needs a non-empty path".into()));
    }
    if !c_cur.is_finite() {
        return Err(Error::Usage("near-path sampling needs a finite cost".into()));
    }
    let seg: Vec<f64> = path.windows(2).map(|w| euclid_cost(&w[0], &w[1])).collect();
    let total: f64 = seg.iter().sum();
    let sigma = sigma_frac * c_cur / 2.0;
    for _ in 0..REJECTION_CAP {
        let mut base = path[0].clone();
        if total > 0.0 {
            let mut s = rng.random::<f64>() * total;
            for (i, &len) in seg.iter().enumerate() {
                if s <= len || i + 1 == seg.len() {
                    let t = if len > 0.0 { (s / len).min(1.0) } else { 0.0 };
                    for ((b, a), c) in base.iter_mut().zip(&path[i]).zip(&path[i + 1]) {
                        *b = a + t * (c - a);
                    }
                    break;
                }
                s -= len;
            }
        }
        for b in base.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *b += sigma * z;
        }
        if p.is_valid(&base) && informed_sum(p, &base) <= c_cur {
            return Ok(base);
        }
    }
    sample_informed(p, c_cur, rng)
}

/// Size of batch `n` (zero-based).
pub fn batch_schedule(cfg: &SamplerConfig, n: usize) -> usize {
    match &cfg.variational {
        None => cfg.batch_size,
        Some(v) => {
            let raw = v.init as f64 * (1.0 + v.alpha).powf(n as f64);
            let rounded = (raw + 0.5).floor();
            if rounded >= v.cap as f64 {
                v.cap
            } else {
                (rounded as usize).max(1)
            }
        }
    }
}

/// One batch of valid samples.
#[derive(Debug, Clone, Default)]
pub struct Batch {
    pub states: Vec<StateVec>,
    /// How many of the states came from the near-path sampler.
    pub near_draws: usize,
}

pub fn sample_batch(
    p: &ProblemDef,
    cfg: &SamplerConfig,
    n: usize,
    c_cur: Cost,
    current_path: Option<&[StateVec]>,
    rng: &mut RngStream,
) -> Result<Batch> {
    let size = batch_schedule(cfg, n);
    let mut batch = Batch {
        states: Vec::with_capacity(size),
        near_draws: 0,
    };
    let near_path = current_path.filter(|path| !path.is_empty() && c_cur.is_finite());
    for _ in 0..size {
        let use_near = match near_path {
            Some(_) if cfg.p_near > 0.0 => rng.random::<f64>() < cfg.p_near,
            _ => false,
        };
        let x = match near_path {
            Some(path) if use_near => {
                batch.near_draws += 1;
                sample_near_path(p, path, c_cur, cfg.near_sigma_frac, rng)?
            }
            _ => sample_informed(p, c_cur, rng)?,
        };
        batch.states.push(x);
    }
    Ok(batch)
}
