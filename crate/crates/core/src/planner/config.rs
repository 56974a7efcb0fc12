use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::SamplerConfig;
use crate::space::Cost;

/// When `plan` stops. At least one criterion must be set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Termination {
    pub time_budget_ms: Option<u64>,
    /// Stop once the solution cost is at or below this value.
    pub target_cost: Option<Cost>,
    pub max_iterations: Option<u64>,
    /// Stop instead of drawing batch number `max_batches` (zero-based).
    pub max_batches: Option<usize>,
    pub stop_on_first_solution: bool,
}

impl Default for Termination {
    fn default() -> Self {
        Termination {
            time_budget_ms: Some(1000),
            target_cost: None,
            max_iterations: None,
            max_batches: None,
            stop_on_first_solution: false,
        }
    }
}

impl Termination {
    pub fn any_set(&self) -> bool {
        self.time_budget_ms.is_some()
            || self.target_cost.is_some()
            || self.max_iterations.is_some()
            || self.max_batches.is_some()
            || self.stop_on_first_solution
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerConfig {
    pub sampler: SamplerConfig,
    /// Scaling of the k-nearest connection rule (must be at least 1).
    pub eta: f64,
    /// Overrides the problem's collision-check resolution when set.
    pub resolution: Option<f64>,
    pub termination: Termination,
    /// Keep a full event log (memory grows with every step).
    pub record_events: bool,
    /// Run the expensive structural checks after every step and panic on
    /// the first violation.
    pub check_invariants: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            sampler: SamplerConfig::default(),
            eta: 1.001,
            resolution: None,
            termination: Termination::default(),
            record_events: false,
            check_invariants: false,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        self.sampler.validate()?;
        if !(self.eta.is_finite() && self.eta >= 1.0) {
            return Err(Error::invalid("eta", "must be a real >= 1"));
        }
        if let Some(r) = self.resolution {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::invalid("resolution", "must lie in (0, 1]"));
            }
        }
        if !self.termination.any_set() {
            return Err(Error::invalid("termination", "no stopping criterion set"));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.sampler.seed = seed;
        self
    }
}
