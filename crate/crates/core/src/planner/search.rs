use crate::error::{Error, Result};
use crate::queues::{edge_key, lazy_vertex_key, meet_key, LexKey};
use crate::sampling::sample_batch;
use crate::space::{euclid_cost, Cost, StateVec};

use super::{Algorithm, Edge, Event, Planner, Role, Solution, VertexId};

const INF: Cost = f64::INFINITY;

impl Planner {
    pub(super) fn dist(&self, a: VertexId, b: VertexId) -> Cost {
        euclid_cost(&self.vertices[a].state, &self.vertices[b].state)
    }

    pub(super) fn is_blocked(&self, a: VertexId, b: VertexId) -> bool {
        self.vertices[a].blocked.contains(&b)
    }

    /// Heuristic edge cost; infinite once the edge is known to collide.
    pub(super) fn c_hat(&self, a: VertexId, b: VertexId) -> Cost {
        if self.is_blocked(a, b) {
            INF
        } else {
            self.dist(a, b)
        }
    }

    pub fn is_root(&self, r: Role, x: VertexId) -> bool {
        self.roots[r.index()].contains(&x)
    }

    pub(super) fn claimed(&self, r: Role, x: VertexId) -> bool {
        self.vertices[x].lazy(r).claimed()
    }

    pub(super) fn in_tree(&self, r: Role, x: VertexId) -> bool {
        self.vertices[x].tree(r).contains()
    }

    pub(super) fn neighbor_ids(&self, x: VertexId) -> Vec<VertexId> {
        self.adjacency
            .get(x)
            .map(|l| l.iter().map(|&(n, _)| n).collect())
            .unwrap_or_default()
    }

    pub(super) fn refresh_adjacency(&mut self) {
        if self.adjacency_epoch == self.index.epoch() {
            return;
        }
        let mut adj = self.index.symmetric_adjacency();
        adj.resize(self.vertices.len(), Vec::new());
        self.adjacency = adj;
        self.adjacency_epoch = self.index.epoch();
    }

    pub(super) fn lazy_key(&self, r: Role, x: VertexId) -> LexKey {
        let v = &self.vertices[x];
        lazy_vertex_key(v.lazy(r).g, v.lazy(r).rhs, v.ghat[r.other().index()])
    }

    /// Key of `(p, c)` in the edge queue of role `r`.
    pub(super) fn edge_key_for(&self, r: Role, (p, c): Edge) -> LexKey {
        edge_key(
            self.vertices[p].tree(r).cost,
            self.c_hat(p, c),
            self.vertices[c].guide(r.other()),
        )
    }

    // Value setters. Every change to a value that feeds a queue key goes
    // through one of these so the keys stay current.

    pub(super) fn set_lazy_g(&mut self, q: Role, x: VertexId, g: Cost) {
        let (own0, guide0) = (self.vertices[x].own(q), self.vertices[x].guide(q));
        self.vertices[x].lazy[q.index()].g = g;
        self.after_value_change(q, x, own0, guide0);
    }

    pub(super) fn set_tree_cost(&mut self, q: Role, x: VertexId, cost: Cost) {
        let (own0, guide0) = (self.vertices[x].own(q), self.vertices[x].guide(q));
        self.vertices[x].tree[q.index()].cost = cost;
        self.rekey_by_parent(q, x);
        self.after_value_change(q, x, own0, guide0);
    }

    fn after_value_change(&mut self, q: Role, x: VertexId, own0: Cost, guide0: Cost) {
        if self.vertices[x].guide(q) != guide0 {
            self.rekey_by_child(q.other(), x);
        }
        if self.algorithm == Algorithm::BiAit && self.vertices[x].own(q) != own0 {
            self.on_own_changed(q, x, own0);
        }
    }

    pub(super) fn rekey_by_child(&mut self, r: Role, c: VertexId) {
        for e in self.edge_q[r.index()].with_child(c) {
            let k = self.edge_key_for(r, e);
            self.edge_q[r.index()].rekey(e, k);
        }
    }

    fn rekey_by_parent(&mut self, r: Role, p: VertexId) {
        for e in self.edge_q[r.index()].with_parent(p) {
            let k = self.edge_key_for(r, e);
            self.edge_q[r.index()].rekey(e, k);
        }
    }

    fn set_lazy_parent(&mut self, r: Role, x: VertexId, parent: Option<VertexId>) {
        let ri = r.index();
        let old = self.vertices[x].lazy[ri].parent;
        if old == parent {
            return;
        }
        if let Some(p) = old {
            let ch = &mut self.vertices[p].lazy[ri].children;
            if let Some(i) = ch.iter().position(|&c| c == x) {
                ch.swap_remove(i);
            }
        }
        if let Some(p) = parent {
            self.vertices[p].lazy[ri].children.push(x);
        }
        self.vertices[x].lazy[ri].parent = parent;
    }

    /// Re-derives `x`'s lookahead value for role `r` and its queue
    /// membership. For the bidirectional planner, a vertex owned by the
    /// opposite side instead becomes a candidate meeting point.
    pub fn update_state(&mut self, r: Role, x: VertexId) {
        if !self.vertices[x].alive || self.is_root(r, x) {
            return;
        }
        let o = r.other();
        if self.algorithm == Algorithm::BiAit
            && !self.claimed(r, x)
            && (self.claimed(o, x) || self.in_tree(o, x))
        {
            self.meet_branch(r, x);
            return;
        }
        let ri = r.index();
        let v = &self.vertices[x];
        let mut rhs = v.tree(r).cost;
        let mut parent = None;
        if let Some(list) = self.adjacency.get(x) {
            for &(n, d) in list {
                if v.blocked.contains(&n) {
                    continue;
                }
                let cand = self.vertices[n].lazy(r).g + d;
                if cand < rhs {
                    rhs = cand;
                    parent = Some(n);
                }
            }
        }
        self.vertices[x].lazy[ri].rhs = rhs;
        self.set_lazy_parent(r, x, parent);
        if self.vertices[x].lazy(r).consistent() {
            self.lazy_q[ri].remove(&x);
        } else {
            let k = self.lazy_key(r, x);
            self.lazy_q[ri].push_or_update(x, k);
        }
    }

    /// One pop of the lazy search of role `r`.
    pub(super) fn lazy_step(&mut self, r: Role) -> Result<()> {
        let ri = r.index();
        let (x, _) = self.lazy_q[ri].pop_best()?;
        self.counters.lazy_pops[ri] += 1;
        self.emit(|| Event::LazyPop { role: r, vertex: x });
        let rec = self.vertices[x].lazy(r);
        if rec.rhs < rec.g {
            let rhs = rec.rhs;
            self.set_lazy_g(r, x, rhs);
        } else {
            self.set_lazy_g(r, x, INF);
            self.update_state(r, x);
        }
        for n in self.neighbor_ids(x) {
            self.update_state(r, n);
        }
        Ok(())
    }

    pub(super) fn may_improve(&self, r: Role) -> bool {
        self.edge_q[r.index()]
            .peek()
            .is_some_and(|(_, k)| k.first() < self.c_cur)
    }

    /// Pushes the outgoing edges of `x` into the edge queue of role `r`.
    pub fn expand(&mut self, r: Role, x: VertexId) {
        let tree_parent = self.vertices[x].tree(r).parent;
        let mut cands = self.neighbor_ids(x);
        for &c in &self.vertices[x].lazy(r).children {
            if !cands.contains(&c) {
                cands.push(c);
            }
        }
        for n in cands {
            if n == x
                || Some(n) == tree_parent
                || !self.vertices[n].alive
                || self.is_root(r, n)
                || self.is_blocked(x, n)
            {
                continue;
            }
            let k = self.edge_key_for(r, (x, n));
            let f = k.first();
            if f.is_infinite() || f < self.c_cur {
                self.edge_q[r.index()].push_or_update((x, n), k);
            }
        }
    }

    /// Motion check with caching; a failed edge is blocked for good.
    pub(super) fn check_edge(&mut self, a: VertexId, b: VertexId) -> bool {
        let key = (a.min(b), a.max(b));
        if self.checked_valid.contains(&key) {
            return true;
        }
        if self.is_blocked(a, b) {
            return false;
        }
        self.counters.collision_checks += 1;
        let ok = self
            .problem
            .is_motion_valid(&self.vertices[a].state, &self.vertices[b].state);
        self.emit(|| Event::CollisionCheck { a, b, valid: ok });
        if ok {
            self.checked_valid.insert(key);
        } else {
            self.block(a, b);
        }
        ok
    }

    pub(super) fn block(&mut self, a: VertexId, b: VertexId) {
        if !self.vertices[a].blocked.contains(&b) {
            self.vertices[a].blocked.push(b);
            self.vertices[b].blocked.push(a);
        }
        for r in Role::BOTH {
            self.edge_q[r.index()].remove(&(a, b));
            self.edge_q[r.index()].remove(&(b, a));
        }
    }

    /// One pop of the edge queue of role `r`.
    pub(super) fn forward_step(&mut self, r: Role) -> Result<()> {
        let ((p, c), _) = self.edge_q[r.index()]
            .pop()
            .ok_or_else(|| Error::Usage("edge queue is empty".into()))?;
        self.counters.edge_pops += 1;
        self.emit(|| Event::EdgePop {
            role: r,
            parent: p,
            child: c,
        });
        let o = r.other();
        if self.vertices[c].tree(r).parent == Some(p) {
            self.expand(r, c);
            return Ok(());
        }
        let g_p = self.vertices[p].tree(r).cost;
        if g_p + self.c_hat(p, c) >= self.vertices[c].tree(r).cost {
            return Ok(());
        }
        if !self.check_edge(p, c) {
            self.on_collision(p, c);
            return Ok(());
        }
        let cost = self.dist(p, c);
        if g_p + cost + self.vertices[c].guide(o) < self.c_cur {
            if self.in_tree(o, c) {
                self.add_meet(r, p, c);
                self.update_solution();
            }
            if g_p + cost < self.vertices[c].tree(r).cost && self.attach(r, p, c) {
                self.expand(r, c);
                if !self.meets.is_empty() {
                    self.update_solution();
                }
            }
        }
        Ok(())
    }

    fn on_collision(&mut self, a: VertexId, b: VertexId) {
        let lazy_link = Role::BOTH.iter().any(|&q| {
            self.vertices[a].lazy(q).parent == Some(b) || self.vertices[b].lazy(q).parent == Some(a)
        });
        let meet = self.lazy_meets.contains(&(a, b)) || self.lazy_meets.contains(&(b, a));
        let prop_link = Role::BOTH.iter().any(|&q| {
            self.vertices[a].prop(q).via == super::Via::Up(b)
                || self.vertices[b].prop(q).via == super::Via::Up(a)
        });
        if lazy_link || meet || prop_link {
            match self.algorithm {
                Algorithm::BiAit => self.update_lazy_search(a, b),
                Algorithm::Ait => self.ait_update_lazy(a, b),
            }
        }
    }

    fn add_meet(&mut self, r: Role, p: VertexId, c: VertexId) {
        let (a, b) = match r {
            Role::A => (p, c),
            Role::B => (c, p),
        };
        if self.meets.insert((a, b)) {
            self.emit(|| Event::Meet { a, b, lazy: false });
        }
    }

    /// Hangs `c` under `p` in the valid tree of role `r` and pushes the new
    /// costs through `c`'s subtree. Refuses to create a cycle.
    pub(super) fn attach(&mut self, r: Role, p: VertexId, c: VertexId) -> bool {
        let ri = r.index();
        let mut up = Some(p);
        while let Some(u) = up {
            if u == c {
                return false;
            }
            up = self.vertices[u].tree(r).parent;
        }
        debug_assert!(self.checked_valid.contains(&(p.min(c), p.max(c))));
        if let Some(old) = self.vertices[c].tree[ri].parent {
            let ch = &mut self.vertices[old].tree[ri].children;
            if let Some(i) = ch.iter().position(|&x| x == c) {
                ch.swap_remove(i);
            }
        }
        self.vertices[c].tree[ri].parent = Some(p);
        self.vertices[p].tree[ri].children.push(c);
        let cost = self.vertices[p].tree(r).cost + self.dist(p, c);
        self.set_tree_cost(r, c, cost);
        let mut stack = vec![c];
        while let Some(u) = stack.pop() {
            let base = self.vertices[u].tree(r).cost;
            for ch in self.vertices[u].tree(r).children.clone() {
                let nc = base + self.dist(u, ch);
                self.set_tree_cost(r, ch, nc);
                stack.push(ch);
            }
        }
        true
    }

    /// Path from the root of role `r` down to `x` along valid-tree links.
    fn tree_path(&self, r: Role, x: VertexId) -> Vec<VertexId> {
        let mut out = vec![x];
        let mut cur = x;
        while let Some(p) = self.vertices[cur].tree(r).parent {
            out.push(p);
            cur = p;
            assert!(out.len() <= self.vertices.len(), "cycle in valid tree");
        }
        out.reverse();
        out
    }

    /// Picks the cheapest valid meet; adopts it when it beats the
    /// incumbent.
    pub fn update_solution(&mut self) {
        let mut best: Option<(Cost, (VertexId, VertexId))> = None;
        for &(a, b) in &self.meets {
            let k = meet_key(
                self.vertices[a].tree(Role::A).cost,
                self.dist(a, b),
                self.vertices[b].tree(Role::B).cost,
            )
            .first();
            if k.is_finite() && best.is_none_or(|(bk, _)| k < bk) {
                best = Some((k, (a, b)));
            }
        }
        let Some((cost, (a, b))) = best else { return };
        if cost >= self.c_cur {
            return;
        }
        let mut ids = self.tree_path(Role::A, a);
        let mut tail = self.tree_path(Role::B, b);
        tail.reverse();
        ids.extend(tail);
        let path: Vec<StateVec> = ids.iter().map(|&i| self.vertices[i].state.clone()).collect();
        self.c_cur = cost;
        let iteration = self.counters.iterations;
        self.solutions.push(Solution {
            path,
            cost,
            found_at_ms: self.elapsed_ms(),
            iteration,
        });
        self.emit(|| Event::Solution { cost, iteration });
    }

    /// Drops every sample that cannot lie on a path cheaper than the
    /// incumbent. Valid-tree descendants of dropped vertices become
    /// unconnected samples.
    pub fn prune(&mut self) -> Result<()> {
        if !self.c_cur.is_finite() {
            return Ok(());
        }
        let doomed: Vec<VertexId> = self
            .vertices
            .iter()
            .filter(|v| v.alive && v.ghat[0] + v.ghat[1] > self.c_cur)
            .map(|v| v.id)
            .filter(|&id| !self.is_root(Role::A, id) && !self.is_root(Role::B, id))
            .collect();
        if doomed.is_empty() {
            return Ok(());
        }
        for &d in &doomed {
            self.vertices[d].alive = false;
        }
        for r in Role::BOTH {
            let ri = r.index();
            for &d in &doomed {
                if !self.in_tree(r, d) {
                    continue;
                }
                if let Some(p) = self.vertices[d].tree[ri].parent {
                    let ch = &mut self.vertices[p].tree[ri].children;
                    if let Some(i) = ch.iter().position(|&x| x == d) {
                        ch.swap_remove(i);
                    }
                }
                let mut stack = vec![d];
                while let Some(u) = stack.pop() {
                    let t = &mut self.vertices[u].tree[ri];
                    t.cost = INF;
                    t.parent = None;
                    stack.append(&mut t.children);
                }
            }
        }
        let vs = &self.vertices;
        self.meets
            .retain(|&(a, b)| vs[a].tree(Role::A).contains() && vs[b].tree(Role::B).contains());
        self.index.remove_batch(&doomed)?;
        Ok(())
    }

    /// Prune, draw the next batch, and restart the lazy searches.
    pub(super) fn new_batch(&mut self) -> Result<()> {
        if self.batch_limit_reached() {
            self.out_of_samples = true;
            return Ok(());
        }
        self.prune()?;
        let path = self.solutions.last().map(|s| s.path.clone());
        let batch = sample_batch(
            &self.problem,
            &self.cfg.sampler,
            self.batch_index,
            self.c_cur,
            path.as_deref(),
            &mut self.rng,
        )?;
        let (bi, size, near) = (self.batch_index, batch.states.len(), batch.near_draws);
        self.emit(|| Event::SampleBatch {
            batch: bi,
            size,
            near,
        });
        let ids: Vec<VertexId> = batch
            .states
            .into_iter()
            .map(|x| self.push_vertex(x))
            .collect();
        let pts: Vec<_> = ids
            .iter()
            .map(|&id| (id, self.vertices[id].state.clone()))
            .collect();
        self.index.insert_batch(&pts)?;
        self.counters.samples += size as u64;
        self.counters.batches += 1;
        self.batch_index += 1;
        self.init_batch();
        Ok(())
    }

    /// Clears both lazy searches and all queues, then reseeds them from the
    /// valid trees.
    pub fn init_batch(&mut self) {
        self.refresh_adjacency();
        for v in &mut self.vertices {
            v.clear_lazy();
        }
        for r in Role::BOTH {
            self.lazy_q[r.index()].clear();
            self.edge_q[r.index()].clear();
        }
        self.lazy_meets.clear();
        for r in Role::BOTH {
            self.meet_partners[r.index()].clear();
            self.prop_deps[r.index()].clear();
        }
        match self.algorithm {
            Algorithm::BiAit => {
                for x in 0..self.vertices.len() {
                    if !self.vertices[x].alive {
                        continue;
                    }
                    let role = if self.in_tree(Role::A, x) {
                        Role::A
                    } else if self.in_tree(Role::B, x) {
                        Role::B
                    } else {
                        continue;
                    };
                    let ri = role.index();
                    self.vertices[x].lazy[ri].rhs = self.vertices[x].tree[ri].cost;
                    let k = self.lazy_key(role, x);
                    self.lazy_q[ri].push_or_update(x, k);
                }
                for r in Role::BOTH {
                    for root in self.roots[r.index()].clone() {
                        self.expand(r, root);
                    }
                }
            }
            Algorithm::Ait => {
                let bi = Role::B.index();
                for goal in self.roots[bi].clone() {
                    self.vertices[goal].lazy[bi].rhs = 0.0;
                    let k = self.lazy_key(Role::B, goal);
                    self.lazy_q[bi].push_or_update(goal, k);
                }
                self.expand(Role::A, self.start_id());
            }
        }
    }

    /// Resets the lazy subtree of role `q` rooted at `c` and re-derives the
    /// reset vertices from their surviving neighbours. Returns the number
    /// of vertices reset.
    pub(super) fn invalidate_subtree(&mut self, q: Role, c: VertexId) -> usize {
        let qi = q.index();
        let mut order = Vec::new();
        let mut stack = vec![c];
        while let Some(u) = stack.pop() {
            order.push(u);
            stack.extend(self.vertices[u].lazy[qi].children.iter().rev());
        }
        self.set_lazy_parent(q, c, None);
        for &u in &order {
            self.lazy_q[qi].remove(&u);
            self.vertices[u].lazy[qi].rhs = INF;
            if self.algorithm == Algorithm::BiAit {
                self.drop_meets_at(q, u);
            }
            self.set_lazy_g(q, u, INF);
        }
        for &u in &order {
            let rec = &mut self.vertices[u].lazy[qi];
            rec.parent = None;
            rec.children.clear();
        }
        self.counters.repair_footprint += order.len() as u64;
        for &u in order.iter().rev() {
            self.update_state(q, u);
            if self.algorithm == Algorithm::BiAit && !self.claimed(q, u) {
                self.update_state(q.other(), u);
            }
        }
        order.len()
    }

    /// Treats `{a, b}` as colliding without running the motion check, then
    /// repairs the lazy searches. Intended for tests and experiments.
    pub fn mark_edge_invalid(&mut self, a: VertexId, b: VertexId) {
        self.block(a, b);
        self.on_collision(a, b);
    }

    /// Drains both lazy-vertex queues, always popping the smaller key.
    pub fn run_lazy_to_quiescence(&mut self) -> Result<()> {
        loop {
            let ka = self.lazy_q[0].peek().map(|(_, k)| k);
            let kb = self.lazy_q[1].peek().map(|(_, k)| k);
            match (ka, kb) {
                (None, None) => return Ok(()),
                (Some(_), None) => self.lazy_step(Role::A)?,
                (None, Some(_)) => self.lazy_step(Role::B)?,
                (Some(a), Some(b)) => {
                    if a <= b {
                        self.lazy_step(Role::A)?
                    } else {
                        self.lazy_step(Role::B)?
                    }
                }
            }
        }
    }
}
