//! Trial traces: the scenario, a final snapshot of the search graph and the
//! optional event log, stored as one JSON document.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use crate::error::Result;
use crate::planner::{Algorithm, Event, Planner, Role, Status, VertexId};
use crate::space::{Cost, StateVec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceVertex {
    pub id: VertexId,
    pub state: StateVec,
}

/// Parent links as `(parent, child)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub forward: Vec<(VertexId, VertexId)>,
    pub reverse: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub scenario: Scenario,
    pub planner: Option<Algorithm>,
    pub seed: u64,
    pub status: Option<Status>,
    pub vertices: Vec<TraceVertex>,
    pub lazy: Forest,
    pub trees: Forest,
    pub solution: Option<Vec<StateVec>>,
    pub solution_costs: Vec<Cost>,
    #[serde(default)]
    pub events: Vec<Event>,
}

impl Trace {
    /// A trace with nothing but the scenario.
    pub fn empty(scenario: &Scenario) -> Self {
        Trace {
            scenario: scenario.clone(),
            planner: None,
            seed: 0,
            status: None,
            vertices: Vec::new(),
            lazy: Forest::default(),
            trees: Forest::default(),
            solution: None,
            solution_costs: Vec::new(),
            events: Vec::new(),
        }
    }

    pub fn capture(scenario: &Scenario, planner: &Planner, seed: u64) -> Self {
        let mut lazy = Forest::default();
        let mut trees = Forest::default();
        let mut vertices = Vec::new();
        for v in planner.vertices() {
            vertices.push(TraceVertex {
                id: v.id,
                state: v.state.clone(),
            });
            for (r, lazy_out, tree_out) in [
                (Role::A, &mut lazy.forward, &mut trees.forward),
                (Role::B, &mut lazy.reverse, &mut trees.reverse),
            ] {
                if let Some(p) = v.lazy(r).parent {
                    lazy_out.push((p, v.id));
                }
                if let Some(p) = v.tree(r).parent {
                    tree_out.push((p, v.id));
                }
            }
        }
        let report = planner.report();
        Trace {
            scenario: scenario.clone(),
            planner: Some(planner.algorithm()),
            seed,
            status: Some(report.status),
            vertices,
            lazy,
            trees,
            solution: report.best().map(|s| s.path.clone()),
            solution_costs: report.solutions.iter().map(|s| s.cost).collect(),
            events: planner.events().map(<[Event]>::to_vec).unwrap_or_default(),
        }
    }

    pub fn state_of(&self, id: VertexId) -> Option<&StateVec> {
        self.vertices
            .binary_search_by_key(&id, |v| v.id)
            .ok()
            .map(|i| &self.vertices[i].state)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn save_trace(trace: &Trace, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, trace.to_json())?;
    Ok(())
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Trace> {
    Trace::from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::trial::run_trial;
    use crate::bench::worlds::{builtin_world, WorldParams};
    use crate::planner::{PlannerConfig, Termination};

    #[test]
    fn trace_round_trips_with_events() {
        let s = builtin_world("wallgap2d", &WorldParams::default()).unwrap();
        let cfg = PlannerConfig {
            record_events: true,
            termination: Termination {
                time_budget_ms: None,
                max_batches: Some(4),
                ..Termination::default()
            },
            ..PlannerConfig::default()
        };
        let t = run_trial(&s, Algorithm::BiAit, &cfg, 2).unwrap().trace;
        assert!(!t.events.is_empty());
        assert!(t.solution.is_some());
        assert_eq!(Trace::from_json(&t.to_json()).unwrap(), t);
        for &(p, c) in t.trees.forward.iter().chain(&t.lazy.reverse) {
            assert!(t.state_of(p).is_some() && t.state_of(c).is_some());
        }
    }
}
