use crate::queues::{AddressablePQ, LexKey};

use super::links::Links;
use super::VertexId;

pub type Edge = (VertexId, VertexId);

/// Edge queue of one valid tree, indexed by both endpoints so entries can be
/// re-keyed when a parent's cost or a child's heuristic changes.
#[derive(Debug, Clone, Default)]
pub struct EdgeQueue {
    pq: AddressablePQ<Edge>,
    by_parent: Links,
    by_child: Links,
}

impl EdgeQueue {
    pub fn len(&self) -> usize {
        self.pq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pq.is_empty()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.pq.contains(e)
    }

    pub fn key_of(&self, e: &Edge) -> Option<LexKey> {
        self.pq.key_of(e)
    }

    pub fn peek(&self) -> Option<(Edge, LexKey)> {
        self.pq.peek()
    }

    pub fn clear(&mut self) {
        self.pq.clear();
        self.by_parent.clear();
        self.by_child.clear();
    }

    pub fn push_or_update(&mut self, e: Edge, key: LexKey) {
        if !self.pq.contains(&e) {
            self.by_parent.push(e.0, e.1);
            self.by_child.push(e.1, e.0);
        }
        self.pq.push_or_update(e, key);
    }

    /// Re-keys an edge already in the queue.
    pub(super) fn rekey(&mut self, e: Edge, key: LexKey) {
        debug_assert!(self.pq.contains(&e));
        self.pq.push_or_update(e, key);
    }

    pub fn pop(&mut self) -> Option<(Edge, LexKey)> {
        let (e, k) = self.pq.pop_best().ok()?;
        self.unindex(e);
        Some((e, k))
    }

    pub fn remove(&mut self, e: &Edge) -> bool {
        if self.pq.remove(e) {
            self.unindex(*e);
            true
        } else {
            false
        }
    }

    fn unindex(&mut self, (p, c): Edge) {
        self.by_parent.detach(p, c);
        self.by_child.detach(c, p);
    }

    pub fn with_parent(&self, p: VertexId) -> Vec<Edge> {
        self.by_parent.get(p).iter().map(|&c| (p, c)).collect()
    }

    pub fn with_child(&self, c: VertexId) -> Vec<Edge> {
        self.by_child.get(c).iter().map(|&p| (p, c)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Edge, LexKey)> + '_ {
        self.pq.entries()
    }
}
