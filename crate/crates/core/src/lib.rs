//! Anytime, asymptotically optimal path planning for point robots in R^d.
//!
//! Two planners share one graph, sampler and collision checker: a symmetric
//! bidirectional planner whose two lazy (collision-unchecked) searches
//! exchange heuristics where they meet, and a unidirectional baseline with a
//! single lazy reverse search. See [`planner::Planner`].

pub mod bench;
pub mod error;
pub mod nngraph;
pub mod planner;
pub mod queues;
pub mod sampling;
pub mod space;

pub use error::{Error, Result};
pub use planner::{Algorithm, PlanReport, Planner, PlannerConfig, Role, Solution, Status};
pub use space::{Bounds, Cost, Obstacle, ProblemDef, StateVec};

// The guide's examples run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/planning.md")]
    mod planning {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
