use crate::space::{Cost, StateVec};

use super::{Role, VertexId};

const INF: Cost = f64::INFINITY;

/// LPA*-style bookkeeping for one lazy search.
#[derive(Debug, Clone, PartialEq)]
pub struct LazyRecord {
    pub rhs: Cost,
    pub g: Cost,
    pub parent: Option<VertexId>,
    pub children: Vec<VertexId>,
}

impl Default for LazyRecord {
    fn default() -> Self {
        LazyRecord {
            rhs: INF,
            g: INF,
            parent: None,
            children: Vec::new(),
        }
    }
}

impl LazyRecord {
    pub fn consistent(&self) -> bool {
        self.rhs == self.g
    }

    /// Reached by this lazy search.
    pub fn claimed(&self) -> bool {
        self.rhs.is_finite() || self.g.is_finite()
    }
}

/// Membership in a collision-checked tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeRecord {
    pub cost: Cost,
    pub parent: Option<VertexId>,
    pub children: Vec<VertexId>,
}

impl Default for TreeRecord {
    fn default() -> Self {
        TreeRecord {
            cost: INF,
            parent: None,
            children: Vec::new(),
        }
    }
}

impl TreeRecord {
    pub fn contains(&self) -> bool {
        self.cost.is_finite()
    }
}

/// Where a propagated cost-to-root value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Via {
    None,
    /// Across a lazy meet edge to this vertex on the other side.
    Meet(VertexId),
    /// From this vertex below, on the same side.
    Up(VertexId),
}

impl Via {
    pub fn source(&self) -> Option<VertexId> {
        match *self {
            Via::None => None,
            Via::Meet(v) | Via::Up(v) => Some(v),
        }
    }
}

/// Cost-to-root estimate shared across the lazy trees through meet edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagated {
    pub value: Cost,
    pub via: Via,
}

impl Default for Propagated {
    fn default() -> Self {
        Propagated {
            value: INF,
            via: Via::None,
        }
    }
}

/// One sampled state and all per-role bookkeeping. Every per-role field is
/// indexed by [`Role::index`]; `ghat[r]` is the straight-line distance to the
/// root of role `r`.
#[derive(Debug, Clone)]
pub struct VertexRecord {
    pub id: VertexId,
    pub state: StateVec,
    pub ghat: [Cost; 2],
    pub lazy: [LazyRecord; 2],
    pub tree: [TreeRecord; 2],
    /// `prop[q]`: propagated estimate of the cost to the root of role `q`.
    pub prop: [Propagated; 2],
    /// Neighbours whose connecting edge failed a motion check.
    pub blocked: Vec<VertexId>,
    pub alive: bool,
}

impl VertexRecord {
    pub fn new(id: VertexId, state: StateVec, to_start: Cost, to_goal: Cost) -> Self {
        VertexRecord {
            id,
            state,
            ghat: [to_start, to_goal],
            lazy: Default::default(),
            tree: Default::default(),
            prop: Default::default(),
            blocked: Vec::new(),
            alive: true,
        }
    }

    pub fn lazy(&self, r: Role) -> &LazyRecord {
        &self.lazy[r.index()]
    }

    pub fn tree(&self, r: Role) -> &TreeRecord {
        &self.tree[r.index()]
    }

    pub fn prop(&self, q: Role) -> &Propagated {
        &self.prop[q.index()]
    }

    /// Realized cost to the root of `q` from this vertex's own side: the
    /// lazy g-value or the valid-tree cost, whichever is smaller.
    pub fn own(&self, q: Role) -> Cost {
        self.lazy(q).g.min(self.tree(q).cost)
    }

    /// Heuristic cost to the root of `q` used to order edges searching
    /// towards it.
    pub fn guide(&self, q: Role) -> Cost {
        self.own(q).min(self.prop(q).value)
    }

    pub fn clear_lazy(&mut self) {
        self.lazy = Default::default();
        self.prop = Default::default();
    }
}
