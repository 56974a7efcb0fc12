//! Sharing of cost-to-root estimates between the two lazy trees.
//!
//! `prop[q]` on a vertex of side `p = q.other()` estimates its cost to the
//! root of `q`. Values enter at lazy meet edges and flow towards the root of
//! `p` along up links. Each value records its source (`Via`) so it can be
//! withdrawn exactly when that source disappears.

use rustc_hash::FxHashSet as HashSet;

use crate::space::Cost;

use super::{Planner, Role, VertexId, Via};

const INF: Cost = f64::INFINITY;

impl Planner {
    /// Next vertex towards the root of side `p`: the lazy parent, or the
    /// valid-tree parent for vertices anchored by their tree cost.
    pub(super) fn up_link(&self, p: Role, z: VertexId) -> Option<VertexId> {
        let v = &self.vertices[z];
        v.lazy(p).parent.or(v.tree(p).parent)
    }

    fn up_children(&self, p: Role, y: VertexId) -> Vec<VertexId> {
        let v = &self.vertices[y];
        let mut out = v.lazy(p).children.clone();
        for &t in &v.tree(p).children {
            if self.vertices[t].lazy(p).parent.is_none() {
                out.push(t);
            }
        }
        out
    }

    fn set_prop(&mut self, q: Role, y: VertexId, value: Cost, via: Via) {
        let qi = q.index();
        let old = self.vertices[y].prop[qi];
        if old.via != via {
            if let Some(s) = old.via.source() {
                self.prop_deps[qi].detach(s, y);
            }
            if let Some(s) = via.source() {
                self.prop_deps[qi].push(s, y);
            }
        }
        let guide0 = self.vertices[y].guide(q);
        self.vertices[y].prop[qi].value = value;
        self.vertices[y].prop[qi].via = via;
        if let Some(pending) = &mut self.deferred_rekeys {
            pending.push((q, y, guide0));
        } else if self.vertices[y].guide(q) != guide0 {
            self.rekey_by_child(q.other(), y);
        }
    }

    fn up_dependents(&self, q: Role, z: VertexId) -> Vec<VertexId> {
        self.prop_deps[q.index()]
            .get(z)
            .iter()
            .copied()
            .filter(|&d| self.vertices[d].prop(q).via == Via::Up(z))
            .collect()
    }

    /// Offers `value` as `y`'s cost to the root of `q`; on improvement the
    /// decrease is pushed up the tree and to every vertex derived from `y`.
    pub(super) fn lower_prop(&mut self, q: Role, y: VertexId, value: Cost, via: Via) {
        if value >= self.vertices[y].prop(q).value {
            return;
        }
        self.set_prop(q, y, value, via);
        let p = q.other();
        let mut stack = vec![y];
        while let Some(z) = stack.pop() {
            let vz = self.vertices[z].prop(q).value;
            for d in self.up_dependents(q, z) {
                let nv = vz + self.c_hat(z, d);
                if nv < self.vertices[d].prop(q).value {
                    self.set_prop(q, d, nv, Via::Up(z));
                    stack.push(d);
                }
            }
            if let Some(up) = self.up_link(p, z) {
                let nv = vz + self.c_hat(z, up);
                if nv < self.vertices[up].prop(q).value {
                    self.set_prop(q, up, nv, Via::Up(z));
                    stack.push(up);
                }
            }
        }
    }

    /// Withdraws the values of `seeds` and of everything derived from them
    /// through up links, then recomputes them from the surviving sources.
    pub(super) fn refresh_prop(&mut self, q: Role, seeds: &[VertexId]) {
        // Values drop to infinity and mostly come back; re-key edges once,
        // at the end, for the vertices whose guide really moved.
        let outer = self.deferred_rekeys.is_none();
        if outer {
            self.deferred_rekeys = Some(Vec::new());
        }
        self.refresh_prop_inner(q, seeds);
        if outer {
            let pending = self.deferred_rekeys.take().unwrap_or_default();
            let mut seen: HashSet<(Role, VertexId)> = HashSet::default();
            for (r, y, guide0) in pending {
                if seen.insert((r, y)) && self.vertices[y].guide(r) != guide0 {
                    self.rekey_by_child(r.other(), y);
                }
            }
        }
    }

    fn refresh_prop_inner(&mut self, q: Role, seeds: &[VertexId]) {
        let p = q.other();
        let mut set: Vec<VertexId> = Vec::new();
        let mut member: HashSet<VertexId> = HashSet::default();
        let mut stack: Vec<VertexId> = seeds.to_vec();
        while let Some(u) = stack.pop() {
            if member.insert(u) {
                set.push(u);
                stack.extend(self.up_dependents(q, u));
            }
        }
        for &u in &set {
            self.set_prop(q, u, INF, Via::None);
        }
        let mut seeds: Vec<(Cost, VertexId, Via)> = Vec::new();
        for &u in &set {
            let mut best = INF;
            let mut src = Via::None;
            for &m in self.meet_partners[p.index()].get(u) {
                let cand = self.vertices[m].own(q) + self.c_hat(u, m);
                if cand < best {
                    best = cand;
                    src = Via::Meet(m);
                }
            }
            for t in self.up_children(p, u) {
                if member.contains(&t) {
                    continue;
                }
                let cand = self.vertices[t].prop(q).value + self.c_hat(t, u);
                if cand < best {
                    best = cand;
                    src = Via::Up(t);
                }
            }
            if best.is_finite() {
                seeds.push((best, u, src));
            }
        }
        // Cheapest first keeps the label-correcting pass close to Dijkstra.
        seeds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (value, u, src) in seeds {
            self.lower_prop(q, u, value, src);
        }
    }

    /// Reacts to a change of `x`'s own cost to the root of `q` by updating
    /// values sourced through lazy meets at `x`.
    pub(super) fn on_own_changed(&mut self, q: Role, x: VertexId, own0: Cost) {
        let partners = self.meet_partners[q.index()].get(x).to_vec();
        if partners.is_empty() {
            return;
        }
        let now = self.vertices[x].own(q);
        let mut raise = Vec::new();
        for y in partners {
            if self.vertices[y].prop(q).via == Via::Meet(x) && now > own0 {
                raise.push(y);
            } else {
                let c = self.c_hat(x, y);
                self.lower_prop(q, y, now + c, Via::Meet(x));
            }
        }
        if !raise.is_empty() {
            self.refresh_prop(q, &raise);
        }
    }

    /// Meeting test from role `r` at `x`, a vertex owned by the opposite
    /// side: every consistent neighbour on `r`'s side forms a lazy meet.
    pub(super) fn meet_branch(&mut self, r: Role, x: VertexId) {
        let o = r.other();
        let vx = &self.vertices[x];
        if !vx.lazy(o).consistent() || !vx.own(o).is_finite() {
            return;
        }
        for xi in self.neighbor_ids(x) {
            let v = &self.vertices[xi];
            if !v.alive
                || self.is_blocked(x, xi)
                || !(v.lazy(r).claimed() || v.tree(r).contains())
                || !v.lazy(r).consistent()
                || !v.own(r).is_finite()
            {
                continue;
            }
            self.insert_lazy_meet(r, xi, x);
            self.lazy_trees_meet(r, xi, x);
        }
    }

    fn insert_lazy_meet(&mut self, r: Role, r_side: VertexId, o_side: VertexId) {
        let (a, b) = match r {
            Role::A => (r_side, o_side),
            Role::B => (o_side, r_side),
        };
        if self.lazy_meets.insert((a, b)) {
            self.meet_partners[0].push(a, b);
            self.meet_partners[1].push(b, a);
            self.emit(|| super::Event::Meet { a, b, lazy: true });
        }
    }

    /// Shares heuristics across the lazy meet `{x1, x2}`, where `x1` is on
    /// `r`'s side and `x2` on the other.
    pub fn lazy_trees_meet(&mut self, r: Role, x1: VertexId, x2: VertexId) {
        let o = r.other();
        let c = self.c_hat(x1, x2);
        let to_o = self.vertices[x2].own(o) + c;
        self.lower_prop(o, x1, to_o, Via::Meet(x2));
        let to_r = self.vertices[x1].own(r) + c;
        self.lower_prop(r, x2, to_r, Via::Meet(x1));
    }

    fn remove_lazy_meet(&mut self, a: VertexId, b: VertexId) {
        if !self.lazy_meets.remove(&(a, b)) {
            return;
        }
        self.meet_partners[0].detach(a, b);
        self.meet_partners[1].detach(b, a);
        self.update_predecessor(a, b);
    }

    /// Withdraws every propagated value sourced through the (removed) meet
    /// `{u, v}` and recomputes it from the remaining meets.
    pub fn update_predecessor(&mut self, u: VertexId, v: VertexId) {
        for q in Role::BOTH {
            for (y, m) in [(u, v), (v, u)] {
                if self.vertices[y].prop(q).via == Via::Meet(m) {
                    self.refresh_prop(q, &[y]);
                }
            }
        }
    }

    /// Removes every lazy meet in which `u` sits on side `q`.
    pub(super) fn drop_meets_at(&mut self, q: Role, u: VertexId) {
        let partners = self.meet_partners[q.index()].get(u).to_vec();
        for m in partners {
            match q {
                Role::A => self.remove_lazy_meet(u, m),
                Role::B => self.remove_lazy_meet(m, u),
            }
        }
    }

    /// Repairs both lazy searches after `{u, v}` was found in collision.
    /// Only the lazy subtree hanging below the edge is reset; the other
    /// tree keeps its structure.
    pub fn update_lazy_search(&mut self, u: VertexId, v: VertexId) {
        self.counters.repair_events += 1;
        self.block(u, v);
        for q in Role::BOTH {
            if self.vertices[v].lazy(q).parent == Some(u) {
                self.invalidate_subtree(q, v);
            }
            if self.vertices[u].lazy(q).parent == Some(v) {
                self.invalidate_subtree(q, u);
            }
        }
        self.remove_lazy_meet(u, v);
        self.remove_lazy_meet(v, u);
        for q in Role::BOTH {
            for (y, z) in [(u, v), (v, u)] {
                if self.vertices[y].prop(q).via == Via::Up(z) {
                    self.refresh_prop(q, &[y]);
                }
            }
        }
    }
}

#[cfg(test)]
pub(super) mod tests_support {
    use super::*;

    /// Forgets a lazy meet's partner entries without any propagation.
    pub fn detach_partners(p: &mut Planner, (a, b): (VertexId, VertexId)) {
        p.meet_partners[0].detach(a, b);
        p.meet_partners[1].detach(b, a);
    }
}
