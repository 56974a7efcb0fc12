//! Structural self-checks and explicit witnesses for heuristic values.

use crate::space::Cost;

use super::{Planner, Role, VertexId, Via};

const TOL: f64 = 1e-9;

/// A vertex sequence realizing a heuristic value: it starts at the queried
/// vertex and ends at a root of the queried role.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicChain {
    pub vertices: Vec<VertexId>,
    /// Sum of edge lengths along `vertices`.
    pub length: Cost,
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * a.abs().max(b.abs()).max(1.0)
}

impl Planner {
    fn chain_len(&self, ids: &[VertexId]) -> Cost {
        // Summed from the root end, in the order the stored values were built.
        ids.windows(2).rev().fold(0.0, |acc, w| acc + self.dist(w[0], w[1]))
    }

    /// Follows valid-tree parents of role `q` from `x` to the root.
    fn tree_walk(&self, q: Role, x: VertexId, out: &mut Vec<VertexId>) -> Option<()> {
        let mut cur = x;
        loop {
            if self.is_root(q, cur) {
                return Some(());
            }
            cur = self.vertices[cur].tree(q).parent?;
            out.push(cur);
            if out.len() > self.vertices.len() {
                return None;
            }
        }
    }

    /// Follows lazy parents of role `q`, switching to valid-tree parents at
    /// the vertex where the lazy chain is anchored.
    fn lazy_walk(&self, q: Role, x: VertexId, out: &mut Vec<VertexId>) -> Option<()> {
        let mut cur = x;
        loop {
            if self.is_root(q, cur) {
                return Some(());
            }
            match self.vertices[cur].lazy(q).parent {
                Some(p) => {
                    cur = p;
                    out.push(cur);
                }
                None => return self.tree_walk(q, cur, out),
            }
            if out.len() > self.vertices.len() {
                return None;
            }
        }
    }

    fn own_walk(&self, q: Role, x: VertexId, out: &mut Vec<VertexId>) -> Option<()> {
        let v = &self.vertices[x];
        if v.tree(q).cost <= v.lazy(q).g {
            self.tree_walk(q, x, out)
        } else {
            self.lazy_walk(q, x, out)
        }
    }

    fn prop_walk(&self, q: Role, x: VertexId, out: &mut Vec<VertexId>) -> Option<()> {
        let mut cur = x;
        loop {
            match self.vertices[cur].prop(q).via {
                Via::None => return None,
                Via::Up(z) => {
                    cur = z;
                    out.push(cur);
                }
                Via::Meet(m) => {
                    out.push(m);
                    return self.own_walk(q, m, out);
                }
            }
            if out.len() > self.vertices.len() {
                return None;
            }
        }
    }

    /// Witness for the lazy g-value of role `q` at `x`.
    pub fn lazy_chain(&self, q: Role, x: VertexId) -> Option<HeuristicChain> {
        if !self.vertices[x].lazy(q).g.is_finite() {
            return None;
        }
        let mut ids = vec![x];
        self.lazy_walk(q, x, &mut ids)?;
        Some(HeuristicChain {
            length: self.chain_len(&ids),
            vertices: ids,
        })
    }

    /// Witness for the propagated estimate of the cost to the root of `q`.
    pub fn propagated_chain(&self, q: Role, x: VertexId) -> Option<HeuristicChain> {
        if !self.vertices[x].prop(q).value.is_finite() {
            return None;
        }
        let mut ids = vec![x];
        self.prop_walk(q, x, &mut ids)?;
        Some(HeuristicChain {
            length: self.chain_len(&ids),
            vertices: ids,
        })
    }

    /// Witness for the value that orders edges heading towards the root of
    /// `q` (the smallest of lazy g, tree cost and propagated estimate).
    pub fn heuristic_chain(&self, q: Role, x: VertexId) -> Option<HeuristicChain> {
        let v = &self.vertices[x];
        let g = v.guide(q);
        if !g.is_finite() {
            return None;
        }
        let mut ids = vec![x];
        if v.own(q) <= v.prop(q).value {
            self.own_walk(q, x, &mut ids)?;
        } else {
            self.prop_walk(q, x, &mut ids)?;
        }
        Some(HeuristicChain {
            length: self.chain_len(&ids),
            vertices: ids,
        })
    }

    /// Checks tree soundness, cost coherence, link symmetry, queue
    /// bookkeeping and admissibility of every finite heuristic.
    pub fn check_invariants(&self) -> Result<(), String> {
        for v in self.vertices() {
            let x = v.id;
            for r in Role::BOTH {
                let t = v.tree(r);
                if self.is_root(r, x) {
                    if t.cost != 0.0 {
                        return Err(format!("root {x} of {r:?} has cost {}", t.cost));
                    }
                } else if let Some(p) = t.parent {
                    let key = (p.min(x), p.max(x));
                    if !self.checked_valid.contains(&key) {
                        return Err(format!("tree edge {p}-{x} never passed a motion check"));
                    }
                    let want = self.vertices[p].tree(r).cost + self.dist(p, x);
                    if !close(t.cost, want) {
                        return Err(format!("cost of {x} in {r:?} is {} not {want}", t.cost));
                    }
                    if !self.vertices[p].tree(r).children.contains(&x) {
                        return Err(format!("tree link {p}->{x} not mirrored"));
                    }
                } else if t.cost.is_finite() {
                    return Err(format!("{x} has finite {r:?} cost but no parent"));
                }
                for &c in &t.children {
                    if self.vertices[c].tree(r).parent != Some(x) {
                        return Err(format!("tree child {c} of {x} has another parent"));
                    }
                }
                let l = v.lazy(r);
                if let Some(p) = l.parent {
                    if !self.vertices[p].lazy(r).children.contains(&x) {
                        return Err(format!("lazy link {p}->{x} not mirrored"));
                    }
                }
                for &c in &l.children {
                    if self.vertices[c].lazy(r).parent != Some(x) {
                        return Err(format!("lazy child {c} of {x} has another parent"));
                    }
                }
                let queued = self.lazy_q[r.index()].contains(&x);
                if queued == l.consistent() {
                    return Err(format!(
                        "{x} in {r:?}: queued={queued} but rhs={} g={}",
                        l.rhs, l.g
                    ));
                }
                let bound = v.ghat[r.index()];
                if l.g.is_finite() && l.g < bound - TOL * bound.max(1.0) {
                    return Err(format!("lazy g of {x} in {r:?} below straight line"));
                }
                let pv = v.prop(r).value;
                if pv.is_finite() && pv < bound - TOL * bound.max(1.0) {
                    return Err(format!("propagated value of {x} in {r:?} below straight line"));
                }
            }
        }
        Ok(())
    }
}
