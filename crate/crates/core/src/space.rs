//! Planning instances in R^d: bounds, obstacle primitives, validity and
//! motion checking, and the Euclidean cost model.
//!
//! A robot is a point. Obstacles are closed sets, so a state lying exactly on
//! an obstacle boundary is in collision. Motions are checked by sampling the
//! segment parameter at a fixed step (the problem's `resolution`), always
//! including both endpoints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A state: one coordinate per dimension.
pub type StateVec = Vec<f64>;

/// Path or edge cost. `f64::INFINITY` stands for "unreachable".
pub type Cost = f64;

/// Default motion-check step, as a fraction of the segment parameter.
pub const DEFAULT_RESOLUTION: f64 = 0.001;

/// Parameter widening that absorbs rounding in `reach`.
const T_SLACK: f64 = 1e-9;

/// Spatial widening that absorbs rounding in `a + t (b - a)`.
#[inline]
fn margin(u: f64, v: f64) -> f64 {
    1e-9 * (1.0 + u.abs().max(v.abs()))
}

/// Axis-aligned bounds of the state space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lo: StateVec,
    pub hi: StateVec,
}

impl Bounds {
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(lo, hi)| hi - lo).product()
    }
}

/// Closed obstacle primitive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Obstacle {
    Aabb { min: StateVec, max: StateVec },
    Sphere { center: StateVec, radius: f64 },
}

impl Obstacle {
    pub fn aabb(min: impl Into<StateVec>, max: impl Into<StateVec>) -> Self {
        Obstacle::Aabb {
            min: min.into(),
            max: max.into(),
        }
    }

    pub fn sphere(center: impl Into<StateVec>, radius: f64) -> Self {
        Obstacle::Sphere {
            center: center.into(),
            radius,
        }
    }

    /// Closed-set membership: the boundary counts as inside.
    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Obstacle::Aabb { min, max } => x
                .iter()
                .zip(min.iter().zip(max))
                .all(|(&v, (&lo, &hi))| v >= lo && v <= hi),
            Obstacle::Sphere { center, radius } => {
                let d2: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                d2 <= radius * radius
            }
        }
    }

    /// Conservative parameter interval `[t0, t1]` within `[0, 1]` outside of
    /// which no point of the segment `a -> b` can be in the obstacle.
    fn reach(&self, a: &[f64], b: &[f64]) -> Option<(f64, f64)> {
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        match self {
            Obstacle::Aabb { min, max } => {
                for ((&x0, &x1), (&lo, &hi)) in a.iter().zip(b).zip(min.iter().zip(max)) {
                    let s = x0.abs().max(x1.abs());
                    let (lo, hi) = (lo - margin(lo, s), hi + margin(hi, s));
                    let d = x1 - x0;
                    if d == 0.0 {
                        if x0 < lo || x0 > hi {
                            return None;
                        }
                        continue;
                    }
                    let (mut e, mut x) = ((lo - x0) / d, (hi - x0) / d);
                    if e > x {
                        std::mem::swap(&mut e, &mut x);
                    }
                    t0 = t0.max(e);
                    t1 = t1.min(x);
                    if t0 > t1 + T_SLACK {
                        return None;
                    }
                }
            }
            Obstacle::Sphere { center, radius } => {
                let (mut qa, mut qb, mut qc) = (0.0, 0.0, 0.0);
                let mut scale = *radius;
                for ((&x0, &x1), &c) in a.iter().zip(b).zip(center) {
                    let d = x1 - x0;
                    let w = x0 - c;
                    qa += d * d;
                    qb += 2.0 * d * w;
                    qc += w * w;
                    scale = scale.max(x0.abs()).max(c.abs());
                }
                let r = radius + margin(scale, 0.0);
                qc -= r * r;
                if qa == 0.0 {
                    return (qc <= 0.0).then_some((0.0, 1.0));
                }
                let disc = qb * qb - 4.0 * qa * qc;
                if disc < 0.0 {
                    return None;
                }
                let sq = disc.sqrt();
                t0 = t0.max((-qb - sq) / (2.0 * qa));
                t1 = t1.min((-qb + sq) / (2.0 * qa));
            }
        }
        if t0 > t1 + T_SLACK {
            return None;
        }
        Some(((t0 - T_SLACK).max(0.0), (t1 + T_SLACK).min(1.0)))
    }

    fn validate(&self, dim: usize, idx: usize) -> Result<()> {
        let field = format!("obstacles[{idx}]");
        match self {
            Obstacle::Aabb { min, max } => {
                if min.len() != dim || max.len() != dim {
                    return Err(Error::invalid(field, "aabb corner dimension mismatch"));
                }
                if min.iter().chain(max).any(|v| !v.is_finite()) {
                    return Err(Error::invalid(field, "non-finite coordinate"));
                }
                if min.iter().zip(max).any(|(a, b)| a > b) {
                    return Err(Error::invalid(field, "aabb min exceeds max"));
                }
            }
            Obstacle::Sphere { center, radius } => {
                if center.len() != dim {
                    return Err(Error::invalid(field, "sphere center dimension mismatch"));
                }
                if center.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid(field, "non-finite coordinate"));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::invalid(field, "radius must be positive"));
                }
            }
        }
        Ok(())
    }
}

/// A planning instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDef {
    pub dim: usize,
    pub bounds: Bounds,
    pub start: StateVec,
    pub goals: Vec<StateVec>,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
    #[serde(default = "default_resolution")]
    pub resolution: f64,
}

fn default_resolution() -> f64 {
    DEFAULT_RESOLUTION
}

impl ProblemDef {
    /// Checks every structural invariant of the instance, naming the
    /// offending field on failure.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim;
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        if self.bounds.lo.len() != dim || self.bounds.hi.len() != dim {
            return Err(Error::invalid("bounds", "dimension mismatch"));
        }
        for (i, (lo, hi)) in self.bounds.lo.iter().zip(&self.bounds.hi).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid("bounds", format!("need lo < hi on axis {i}")));
            }
        }
        if !(self.resolution > 0.0 && self.resolution <= 1.0) {
            return Err(Error::invalid("resolution", "must lie in (0, 1]"));
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            o.validate(dim, i)?;
        }
        self.check_endpoint("start", &self.start)?;
        if self.goals.is_empty() {
            return Err(Error::invalid("goals", "at least one goal required"));
        }
        for (i, g) in self.goals.iter().enumerate() {
            self.check_endpoint(&format!("goals[{i}]"), g)?;
        }
        Ok(())
    }

    fn check_endpoint(&self, field: &str, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::invalid(field, "dimension mismatch"));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid(field, "non-finite coordinate"));
        }
        if !self.bounds.contains(x) {
            return Err(Error::invalid(field, "outside bounds"));
        }
        if self.in_collision(x) {
            return Err(Error::invalid(field, "in collision"));
        }
        Ok(())
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Usage(format!(
                "state has {} coordinates, problem is {}-dimensional",
                x.len(),
                self.dim
            )));
        }
        Ok(())
    }

    #[inline]
    fn in_collision(&self, x: &[f64]) -> bool {
        self.obstacles.iter().any(|o| o.contains(x))
    }

    /// Unchecked validity test used on hot paths.
    #[inline]
    pub fn is_valid(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        self.bounds.contains(x) && !self.in_collision(x)
    }

    /// True iff `x` is inside the bounds and outside every obstacle.
    pub fn state_valid(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.is_valid(x))
    }

    /// Unchecked motion test used on hot paths.
    ///
    /// Same predicate as [`ProblemDef::motion_valid_dense`], but each
    /// obstacle only inspects the parameters where the segment can reach it.
    pub fn is_motion_valid(&self, a: &[f64], b: &[f64]) -> bool {
        if !self.is_valid(a) || !self.is_valid(b) {
            return false;
        }
        if self.near_bounds(a) || self.near_bounds(b) {
            return self.motion_valid_dense(a, b);
        }
        let res = self.resolution;
        let last = self.interior_steps();
        let mut buf = [0.0; 16];
        let mut heap = Vec::new();
        let p: &mut [f64] = if a.len() <= buf.len() {
            &mut buf[..a.len()]
        } else {
            heap.resize(a.len(), 0.0);
            &mut heap
        };
        for o in &self.obstacles {
            let Some((t0, t1)) = o.reach(a, b) else {
                continue;
            };
            let first = ((t0 / res).floor() as usize).max(1);
            let end = ((t1 / res).ceil() as usize).min(last);
            for i in first..=end {
                let t = i as f64 * res;
                if t >= 1.0 {
                    break;
                }
                for ((p, &x0), &x1) in p.iter_mut().zip(a).zip(b) {
                    *p = x0 + t * (x1 - x0);
                }
                if o.contains(p) {
                    return false;
                }
            }
        }
        true
    }

    /// Largest interior step index (`t = i * resolution < 1`).
    fn interior_steps(&self) -> usize {
        ((1.0 / self.resolution).ceil() as usize).saturating_sub(1)
    }

    /// Close enough to a bound face that rounding in the interpolation
    /// could step outside.
    fn near_bounds(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.bounds.lo.iter().zip(&self.bounds.hi))
            .any(|(&v, (&lo, &hi))| v - lo <= margin(lo, v) || hi - v <= margin(hi, v))
    }

    /// Reference implementation: checks every interpolant in turn.
    pub fn motion_valid_dense(&self, a: &[f64], b: &[f64]) -> bool {
        if !self.is_valid(a) || !self.is_valid(b) {
            return false;
        }
        let mut buf = vec![0.0; a.len()];
        for i in 1..=self.interior_steps() {
            let t = i as f64 * self.resolution;
            if t >= 1.0 {
                break;
            }
            for ((p, &x0), &x1) in buf.iter_mut().zip(a).zip(b) {
                *p = x0 + t * (x1 - x0);
            }
            if !self.is_valid(&buf) {
                return false;
            }
        }
        true
    }

    /// True iff every interpolant `a + t (b - a)` for
    /// `t in {0, res, 2 res, ..., 1}` is valid.
    pub fn motion_valid(&self, a: &[f64], b: &[f64]) -> Result<bool> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.is_motion_valid(a, b))
    }

    /// Straight-line lower bounds `(to_start, to_nearest_goal)`.
    pub fn heuristic_bounds(&self, x: &[f64]) -> (Cost, Cost) {
        let to_start = euclid_cost(x, &self.start);
        let to_goal = self
            .goals
            .iter()
            .map(|g| euclid_cost(x, g))
            .fold(f64::INFINITY, f64::min);
        (to_start, to_goal)
    }

    /// Smallest straight-line distance from the start to any goal.
    pub fn min_cost_bound(&self) -> Cost {
        self.heuristic_bounds(&self.start).1
    }
}

/// Euclidean distance.
#[inline]
pub fn euclid_cost(a: &[f64], b: &[f64]) -> Cost {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Sum of segment lengths along a path.
pub fn path_cost(path: &[StateVec]) -> Result<Cost> {
    if path.is_empty() {
        return Err(Error::Usage("path must contain at least one state".into()));
    }
    Ok(path.windows(2).map(|w| euclid_cost(&w[0], &w[1])).sum())
}
