//! Lazy-heuristic anytime planners over a batch-sampled random geometric
//! graph: the symmetric bidirectional planner and its unidirectional
//! baseline.

mod ait;
mod biait;
mod checks;
mod config;
mod edges;
mod links;
mod propagate;
mod report;
mod search;
mod vertex;

use std::collections::BTreeSet;

use rustc_hash::FxHashSet as HashSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nngraph::NeighborIndex;
use crate::queues::AddressablePQ;

use links::Links;
use crate::sampling::RngStream;
use crate::space::{Cost, ProblemDef, StateVec};

pub use checks::HeuristicChain;
pub use config::{PlannerConfig, Termination};
pub use edges::{Edge, EdgeQueue};
pub use report::{Counters, Event, PlanReport, Solution, Status};
pub use vertex::{LazyRecord, Propagated, TreeRecord, VertexRecord, Via};

pub type VertexId = usize;

/// Search direction. `A` is rooted at the start, `B` at the goal set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    A,
    B,
}

impl Role {
    pub const BOTH: [Role; 2] = [Role::A, Role::B];

    pub fn index(self) -> usize {
        match self {
            Role::A => 0,
            Role::B => 1,
        }
    }

    pub fn other(self) -> Role {
        match self {
            Role::A => Role::B,
            Role::B => Role::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Symmetric bidirectional search; two lazy trees share heuristics
    /// through meet edges.
    BiAit,
    /// One lazy reverse search guiding one forward search.
    Ait,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::BiAit => "biait",
            Algorithm::Ait => "ait",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "biait" => Ok(Algorithm::BiAit),
            "ait" => Ok(Algorithm::Ait),
            other => Err(Error::invalid("planner", format!("unknown planner `{other}`"))),
        }
    }
}

/// Planner state. Every per-role structure is a two-element array indexed
/// by [`Role::index`]; swapping the active role only flips a flag.
#[derive(Debug, Clone)]
pub struct Planner {
    algorithm: Algorithm,
    problem: ProblemDef,
    cfg: PlannerConfig,
    rng: RngStream,
    vertices: Vec<VertexRecord>,
    index: NeighborIndex,
    adjacency: Vec<Vec<(VertexId, Cost)>>,
    adjacency_epoch: u64,
    roots: [Vec<VertexId>; 2],
    active: Role,
    lazy_q: [AddressablePQ<VertexId>; 2],
    edge_q: [EdgeQueue; 2],
    /// Lazy meet edges as `(a_side, b_side)`.
    lazy_meets: BTreeSet<(VertexId, VertexId)>,
    /// `meet_partners[s][x]`: opposite endpoints of lazy meets where `x`
    /// sits on side `s`.
    meet_partners: [Links; 2],
    /// `prop_deps[q][s]`: vertices whose `prop[q]` was derived from `s`.
    prop_deps: [Links; 2],
    /// While set, guide changes are collected here (role, vertex, guide
    /// before the first change) instead of re-keying edges immediately.
    deferred_rekeys: Option<Vec<(Role, VertexId, Cost)>>,
    /// Valid-tree meet edges as `(in tree A, in tree B)`.
    meets: BTreeSet<(VertexId, VertexId)>,
    checked_valid: HashSet<(VertexId, VertexId)>,
    c_cur: Cost,
    solutions: Vec<Solution>,
    batch_index: usize,
    counters: Counters,
    events: Option<Vec<Event>>,
    clock: Instant,
    out_of_samples: bool,
}

impl Planner {
    pub fn new(algorithm: Algorithm, problem: ProblemDef, cfg: PlannerConfig) -> Result<Self> {
        let mut problem = problem;
        if let Some(res) = cfg.resolution {
            problem.resolution = res;
        }
        problem.validate()?;
        cfg.validate()?;
        let mut planner = Planner {
            algorithm,
            rng: RngStream::new(cfg.sampler.seed),
            index: NeighborIndex::new(problem.dim, cfg.eta),
            events: cfg.record_events.then(Vec::new),
            problem,
            cfg,
            vertices: Vec::new(),
            adjacency: Vec::new(),
            adjacency_epoch: u64::MAX,
            roots: [Vec::new(), Vec::new()],
            active: Role::A,
            lazy_q: Default::default(),
            edge_q: Default::default(),
            lazy_meets: BTreeSet::new(),
            meet_partners: Default::default(),
            prop_deps: Default::default(),
            deferred_rekeys: None,
            meets: BTreeSet::new(),
            checked_valid: HashSet::default(),
            c_cur: f64::INFINITY,
            solutions: Vec::new(),
            batch_index: 0,
            counters: Counters::default(),
            clock: Instant::now(),
            out_of_samples: false,
        };
        let start = planner.problem.start.clone();
        let s = planner.push_vertex(start);
        planner.set_root(Role::A, s);
        for goal in planner.problem.goals.clone() {
            let g = planner.push_vertex(goal);
            planner.set_root(Role::B, g);
        }
        let pts: Vec<_> = planner
            .vertices
            .iter()
            .map(|v| (v.id, v.state.clone()))
            .collect();
        planner.index.insert_batch(&pts)?;
        Ok(planner)
    }

    pub fn biait(problem: ProblemDef, cfg: PlannerConfig) -> Result<Self> {
        Self::new(Algorithm::BiAit, problem, cfg)
    }

    pub fn ait(problem: ProblemDef, cfg: PlannerConfig) -> Result<Self> {
        Self::new(Algorithm::Ait, problem, cfg)
    }

    fn push_vertex(&mut self, state: StateVec) -> VertexId {
        let id = self.vertices.len();
        let (to_start, to_goal) = self.problem.heuristic_bounds(&state);
        self.vertices
            .push(VertexRecord::new(id, state, to_start, to_goal));
        id
    }

    fn set_root(&mut self, r: Role, x: VertexId) {
        self.vertices[x].tree[r.index()].cost = 0.0;
        self.roots[r.index()].push(x);
    }

    /// Adds hand-placed states as samples (no validity filtering beyond
    /// the state check). Returns their ids.
    pub fn add_samples(&mut self, states: &[StateVec]) -> Result<Vec<VertexId>> {
        for (i, x) in states.iter().enumerate() {
            if !self.problem.state_valid(x)? {
                return Err(Error::invalid(format!("samples[{i}]"), "state is not valid"));
            }
        }
        let ids: Vec<VertexId> = states.iter().map(|x| self.push_vertex(x.clone())).collect();
        let pts: Vec<_> = ids
            .iter()
            .map(|&id| (id, self.vertices[id].state.clone()))
            .collect();
        self.index.insert_batch(&pts)?;
        self.counters.samples += ids.len() as u64;
        Ok(ids)
    }

    // Read-only accessors.

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn problem(&self) -> &ProblemDef {
        &self.problem
    }

    pub fn config(&self) -> &PlannerConfig {
        &self.cfg
    }

    pub fn active_role(&self) -> Role {
        self.active
    }

    pub fn c_cur(&self) -> Cost {
        self.c_cur
    }

    pub fn solutions(&self) -> &[Solution] {
        &self.solutions
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn events(&self) -> Option<&[Event]> {
        self.events.as_deref()
    }

    pub fn batch_index(&self) -> usize {
        self.batch_index
    }

    pub fn vertex(&self, id: VertexId) -> Option<&VertexRecord> {
        self.vertices.get(id).filter(|v| v.alive)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexRecord> {
        self.vertices.iter().filter(|v| v.alive)
    }

    pub fn roots(&self, r: Role) -> &[VertexId] {
        &self.roots[r.index()]
    }

    pub fn start_id(&self) -> VertexId {
        self.roots[0][0]
    }

    /// Ids in the valid tree of role `r`, ascending.
    pub fn tree_members(&self, r: Role) -> Vec<VertexId> {
        self.vertices()
            .filter(|v| v.tree(r).contains())
            .map(|v| v.id)
            .collect()
    }

    pub fn lazy_queue(&self, r: Role) -> &AddressablePQ<VertexId> {
        &self.lazy_q[r.index()]
    }

    pub fn edge_queue(&self, r: Role) -> &EdgeQueue {
        &self.edge_q[r.index()]
    }

    pub fn lazy_meets(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.lazy_meets
    }

    pub fn meets(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.meets
    }

    /// Current undirected neighbour graph as `(neighbour, distance)` lists.
    pub fn graph(&self) -> &[Vec<(VertexId, Cost)>] {
        &self.adjacency
    }

    /// Edges proven collision-free so far, as `(lower id, higher id)`.
    pub fn checked_valid_edges(&self) -> &HashSet<(VertexId, VertexId)> {
        &self.checked_valid
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.clock.elapsed().as_secs_f64() * 1e3
    }

    fn emit(&mut self, e: impl FnOnce() -> Event) {
        if let Some(log) = self.events.as_mut() {
            log.push(e());
        }
    }

    /// Flips the active role. O(1); no data moves.
    pub fn swap_roles(&mut self) {
        self.active = self.active.other();
    }

    fn should_stop(&self) -> bool {
        let t = &self.cfg.termination;
        if self.out_of_samples {
            return true;
        }
        if t.stop_on_first_solution && self.c_cur.is_finite() {
            return true;
        }
        if let Some(target) = t.target_cost {
            if self.c_cur <= target {
                return true;
            }
        }
        if let Some(n) = t.max_iterations {
            if self.counters.iterations >= n {
                return true;
            }
        }
        if let Some(ms) = t.time_budget_ms {
            if self.elapsed_ms() >= ms as f64 {
                return true;
            }
        }
        false
    }

    /// True when the next batch may not be drawn under `max_batches`.
    fn batch_limit_reached(&self) -> bool {
        self.cfg
            .termination
            .max_batches
            .is_some_and(|n| self.batch_index >= n)
    }

    /// Runs one main-loop iteration of the configured algorithm.
    pub fn step(&mut self) -> Result<()> {
        self.counters.iterations += 1;
        match self.algorithm {
            Algorithm::BiAit => self.biait_step()?,
            Algorithm::Ait => self.ait_step()?,
        }
        self.note_first_finite_edge();
        if self.cfg.check_invariants {
            if let Err(msg) = self.check_invariants() {
                panic!("invariant violated at iteration {}: {msg}", self.counters.iterations);
            }
        }
        Ok(())
    }

    /// Runs until a termination criterion fires.
    pub fn plan(&mut self) -> Result<PlanReport> {
        while !self.should_stop() {
            match self.step() {
                Ok(()) => {}
                Err(Error::SpaceSaturated(_)) => self.out_of_samples = true,
                Err(e) => return Err(e),
            }
        }
        Ok(self.report())
    }

    pub fn report(&self) -> PlanReport {
        let status = if self.c_cur.is_infinite() {
            Status::Failed
        } else if self
            .cfg
            .termination
            .target_cost
            .is_some_and(|t| self.c_cur > t)
        {
            Status::Timeout
        } else {
            Status::Solved
        };
        PlanReport {
            status,
            solutions: self.solutions.clone(),
            counters: self.counters.clone(),
            elapsed_ms: self.elapsed_ms(),
        }
    }

    fn note_first_finite_edge(&mut self) {
        if self.counters.lazy_pops_before_finite_edge.is_some() {
            return;
        }
        let roles: &[Role] = match self.algorithm {
            Algorithm::BiAit => &Role::BOTH,
            Algorithm::Ait => &[Role::A],
        };
        let finite = roles.iter().any(|r| {
            self.edge_q[r.index()]
                .peek()
                .is_some_and(|(_, k)| k.first().is_finite())
        });
        if finite {
            self.counters.lazy_pops_before_finite_edge = Some(self.counters.lazy_pops_total());
        }
    }
}
