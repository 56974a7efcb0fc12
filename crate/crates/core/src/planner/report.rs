use serde::{Deserialize, Serialize};

use crate::space::{Cost, StateVec};

use super::{Role, VertexId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub path: Vec<StateVec>,
    pub cost: Cost,
    /// Elapsed milliseconds since the planner was created.
    pub found_at_ms: f64,
    pub iteration: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// A solution exists and meets the target cost, if one was set.
    Solved,
    /// No solution was found.
    Failed,
    /// A solution exists but the target cost was not reached.
    Timeout,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Solved => "solved",
            Status::Failed => "failed",
            Status::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Counters {
    pub iterations: u64,
    pub collision_checks: u64,
    pub lazy_pops: [u64; 2],
    pub edge_pops: u64,
    pub samples: u64,
    pub batches: u64,
    pub repair_events: u64,
    /// Vertices whose lazy bookkeeping was reset by repairs.
    pub repair_footprint: u64,
    /// Total lazy pops at the first moment an edge queue held a finite key.
    pub lazy_pops_before_finite_edge: Option<u64>,
}

impl Counters {
    pub fn lazy_pops_total(&self) -> u64 {
        self.lazy_pops[0] + self.lazy_pops[1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Event {
    SampleBatch { batch: usize, size: usize, near: usize },
    LazyPop { role: Role, vertex: VertexId },
    EdgePop { role: Role, parent: VertexId, child: VertexId },
    CollisionCheck { a: VertexId, b: VertexId, valid: bool },
    Meet { a: VertexId, b: VertexId, lazy: bool },
    Solution { cost: Cost, iteration: u64 },
}

/// Final outcome of a `plan` call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub status: Status,
    pub solutions: Vec<Solution>,
    pub counters: Counters,
    pub elapsed_ms: f64,
}

impl PlanReport {
    pub fn best(&self) -> Option<&Solution> {
        self.solutions.last()
    }

    pub fn first(&self) -> Option<&Solution> {
        self.solutions.first()
    }
}
