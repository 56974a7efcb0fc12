use crate::error::Result;

use super::{Planner, PlanReport, Role, VertexId};

impl Planner {
    /// Yield test for the single lazy reverse search.
    pub(super) fn ait_lazy_done(&self) -> bool {
        let Some((_, lazy_key)) = self.lazy_q[Role::B.index()].peek() else {
            return true;
        };
        let Some(((p, c), edge_key)) = self.edge_q[Role::A.index()].peek() else {
            return true;
        };
        let lk = lazy_key.first();
        lk >= self.c_cur || (lk >= edge_key.first() && self.edge_settled(Role::A, p, c))
    }

    /// One pop of the lazy reverse search.
    pub fn ait_reverse_lazy_step(&mut self) -> Result<()> {
        self.lazy_step(Role::B)
    }

    /// Resets the whole lazy reverse subtree hanging below the collided
    /// edge `{u, v}`.
    pub fn ait_update_lazy(&mut self, u: VertexId, v: VertexId) {
        self.counters.repair_events += 1;
        self.block(u, v);
        if self.vertices[v].lazy(Role::B).parent == Some(u) {
            self.invalidate_subtree(Role::B, v);
        }
        if self.vertices[u].lazy(Role::B).parent == Some(v) {
            self.invalidate_subtree(Role::B, u);
        }
    }

    pub(super) fn ait_step(&mut self) -> Result<()> {
        if !self.ait_lazy_done() {
            self.lazy_step(Role::B)
        } else if self.may_improve(Role::A) {
            self.forward_step(Role::A)
        } else {
            self.new_batch()
        }
    }

    /// Same as [`Planner::plan`]; provided for symmetry with the baseline's
    /// usual name.
    pub fn ait_plan(&mut self) -> Result<PlanReport> {
        self.plan()
    }
}
