use crate::error::Result;

use super::{Planner, Role, VertexId};

impl Planner {
    /// Whether the lazy search of the active role should yield.
    pub fn lazy_search_terminate(&self) -> bool {
        self.lazy_done(self.active)
    }

    /// True when the lazy queue of `r` or either edge queue is empty, or
    /// when the best lazy key can no longer beat the best edge and the
    /// endpoints of the edges it is compared against are settled.
    pub(super) fn lazy_done(&self, r: Role) -> bool {
        let o = r.other();
        let Some((_, lazy_key)) = self.lazy_q[r.index()].peek() else {
            return true;
        };
        let (Some(best_r), Some(best_o)) =
            (self.edge_q[r.index()].peek(), self.edge_q[o.index()].peek())
        else {
            return true;
        };
        let lk = lazy_key.first();
        if lk >= self.c_cur {
            return true;
        }
        if lk < best_r.1.first().min(best_o.1.first()) {
            return false;
        }
        [(r, best_r), (o, best_o)]
            .into_iter()
            .filter(|(_, (_, k))| k.first() <= lk)
            .all(|(queue_role, ((p, c), _))| self.edge_settled(queue_role, p, c))
    }

    /// Both endpoints consistent in the lazy search guiding the queue.
    pub(super) fn edge_settled(&self, queue_role: Role, p: VertexId, c: VertexId) -> bool {
        let guide = queue_role.other();
        self.vertices[p].lazy(guide).consistent() && self.vertices[c].lazy(guide).consistent()
    }

    pub fn lazy_search_step(&mut self) -> Result<()> {
        self.lazy_step(self.active)
    }

    pub fn forward_search_may_improve(&self) -> bool {
        self.may_improve(self.active)
    }

    pub fn forward_search_step(&mut self) -> Result<()> {
        self.forward_step(self.active)
    }

    fn role_busy(&self, r: Role) -> bool {
        !self.lazy_done(r) || self.may_improve(r)
    }

    pub(super) fn biait_step(&mut self) -> Result<()> {
        let r = self.active;
        if !self.lazy_done(r) {
            self.lazy_step(r)?;
        } else if self.may_improve(r) {
            self.forward_step(r)?;
        } else if !self.role_busy(r.other()) {
            self.new_batch()?;
        }
        self.swap_roles();
        Ok(())
    }
}
