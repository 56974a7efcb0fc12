//! k-nearest-neighbour structure over all samples and vertices.
//!
//! The implicit search graph connects `a` and `b` when either is among the
//! other's `k` nearest points, with `k` taken from the random-geometric-graph
//! bound. Queries above [`LINEAR_SCAN_LIMIT`] points go through a k-d tree
//! rebuilt whenever the point set changes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::space::{euclid_cost, StateVec};

pub const LINEAR_SCAN_LIMIT: usize = 256;
const LEAF_SIZE: usize = 8;

/// `ceil(eta * e * (1 + 1/d) * ln n)`, never below `d + 1`.
pub fn rgg_k(n: usize, d: usize, eta: f64) -> usize {
    let n = n.max(2) as f64;
    let d_f = d as f64;
    let k = (eta * std::f64::consts::E * (1.0 + 1.0 / d_f) * n.ln()).ceil() as usize;
    k.max(d + 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    dist2: f64,
    id: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2
            .total_cmp(&other.dist2)
            .then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[inline]
fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Bounded max-heap keeping the k best candidates.
struct KBest {
    k: usize,
    heap: BinaryHeap<Candidate>,
}

impl KBest {
    fn new(k: usize) -> Self {
        KBest {
            k,
            heap: BinaryHeap::with_capacity(k + 1),
        }
    }

    fn offer(&mut self, c: Candidate) {
        if self.heap.len() < self.k {
            self.heap.push(c);
        } else if let Some(worst) = self.heap.peek() {
            if c < *worst {
                self.heap.pop();
                self.heap.push(c);
            }
        }
    }

    fn admits(&self, bound2: f64) -> bool {
        self.heap.len() < self.k || self.heap.peek().is_some_and(|w| bound2 <= w.dist2)
    }

    fn into_sorted_ids(self) -> Vec<usize> {
        self.heap.into_sorted_vec().into_iter().map(|c| c.id).collect()
    }
}

/// Implicit k-d tree: each subtree is a contiguous range of `order`, split at
/// its midpoint on the axis stored for that position.
#[derive(Debug, Clone, Default)]
struct KdTree {
    order: Vec<usize>,
    axis: Vec<usize>,
}

impl KdTree {
    fn build(points: &[Option<StateVec>], ids: Vec<usize>, dim: usize) -> Self {
        let n = ids.len();
        let mut tree = KdTree {
            order: ids,
            axis: vec![0; n],
        };
        tree.build_range(points, dim, 0, n);
        tree
    }

    fn build_range(&mut self, points: &[Option<StateVec>], dim: usize, lo: usize, hi: usize) {
        if hi - lo <= LEAF_SIZE {
            return;
        }
        let coord = |id: usize, ax: usize| points[id].as_ref().expect("live point")[ax];
        let mut best_axis = 0;
        let mut best_spread = f64::NEG_INFINITY;
        for ax in 0..dim {
            let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
            for &id in &self.order[lo..hi] {
                let v = coord(id, ax);
                mn = mn.min(v);
                mx = mx.max(v);
            }
            if mx - mn > best_spread {
                best_spread = mx - mn;
                best_axis = ax;
            }
        }
        let mid = (lo + hi) / 2;
        self.order[lo..hi].select_nth_unstable_by(mid - lo, |&a, &b| {
            coord(a, best_axis).total_cmp(&coord(b, best_axis))
        });
        self.axis[mid] = best_axis;
        self.build_range(points, dim, lo, mid);
        self.build_range(points, dim, mid + 1, hi);
    }

    fn search(
        &self,
        points: &[Option<StateVec>],
        q: &[f64],
        skip: usize,
        best: &mut KBest,
        lo: usize,
        hi: usize,
    ) {
        if hi <= lo {
            return;
        }
        if hi - lo <= LEAF_SIZE {
            for &id in &self.order[lo..hi] {
                if id != skip {
                    let p = points[id].as_ref().expect("live point");
                    best.offer(Candidate { dist2: dist2(p, q), id });
                }
            }
            return;
        }
        let mid = (lo + hi) / 2;
        let id = self.order[mid];
        let p = points[id].as_ref().expect("live point");
        if id != skip {
            best.offer(Candidate { dist2: dist2(p, q), id });
        }
        let ax = self.axis[mid];
        let diff = q[ax] - p[ax];
        let (first, second) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(points, q, skip, best, first.0, first.1);
        if best.admits(diff * diff) {
            self.search(points, q, skip, best, second.0, second.1);
        }
    }
}

/// Point set with k-nearest queries; `epoch` increments on every mutation.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    dim: usize,
    eta: f64,
    points: Vec<Option<StateVec>>,
    live: usize,
    epoch: u64,
    tree: Option<KdTree>,
}

impl NeighborIndex {
    pub fn new(dim: usize, eta: f64) -> Self {
        NeighborIndex {
            dim,
            eta,
            points: Vec::new(),
            live: 0,
            epoch: 0,
            tree: None,
        }
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn contains(&self, id: usize) -> bool {
        self.points.get(id).is_some_and(|p| p.is_some())
    }

    /// Current connection count for the live point set.
    pub fn k(&self) -> usize {
        rgg_k(self.live, self.dim, self.eta)
    }

    pub fn insert_batch(&mut self, pts: &[(usize, StateVec)]) -> Result<()> {
        for (i, (id, x)) in pts.iter().enumerate() {
            if x.len() != self.dim {
                return Err(Error::Usage(format!("point {id} has wrong dimension")));
            }
            if self.contains(*id) || pts[..i].iter().any(|(other, _)| other == id) {
                return Err(Error::Usage(format!("duplicate id {id}")));
            }
        }
        for (id, x) in pts {
            if *id >= self.points.len() {
                self.points.resize(id + 1, None);
            }
            self.points[*id] = Some(x.clone());
            self.live += 1;
        }
        self.touch();
        Ok(())
    }

    pub fn remove_batch(&mut self, ids: &[usize]) -> Result<()> {
        if let Some(&bad) = ids.iter().find(|&&id| !self.contains(id)) {
            return Err(Error::UnknownId(bad));
        }
        for &id in ids {
            if self.points[id].take().is_some() {
                self.live -= 1;
            }
        }
        self.touch();
        Ok(())
    }

    fn touch(&mut self) {
        self.epoch += 1;
        self.tree = if self.live > LINEAR_SCAN_LIMIT {
            let ids: Vec<usize> = self.live_ids().collect();
            Some(KdTree::build(&self.points, ids, self.dim))
        } else {
            None
        };
    }

    pub fn live_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.as_ref().map(|_| i))
    }

    pub fn point(&self, id: usize) -> Option<&StateVec> {
        self.points.get(id).and_then(|p| p.as_ref())
    }

    /// The `k()` nearest other points to `id`, nearest first, ties broken by
    /// lower id.
    pub fn neighbors(&self, id: usize) -> Result<Vec<usize>> {
        let q = self.point(id).ok_or(Error::UnknownId(id))?;
        Ok(self.nearest(q, self.k(), id))
    }

    fn nearest(&self, q: &[f64], k: usize, skip: usize) -> Vec<usize> {
        let mut best = KBest::new(k);
        match &self.tree {
            Some(tree) => tree.search(&self.points, q, skip, &mut best, 0, tree.order.len()),
            None => {
                for id in self.live_ids() {
                    if id != skip {
                        let p = self.points[id].as_ref().expect("live point");
                        best.offer(Candidate { dist2: dist2(p, q), id });
                    }
                }
            }
        }
        best.into_sorted_ids()
    }

    /// Undirected adjacency: `a ~ b` iff either lies in the other's k-nearest
    /// list. Indexed by id (empty for dead ids); each list holds
    /// `(neighbour, distance)` sorted by neighbour id.
    pub fn symmetric_adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let k = self.k();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.points.len()];
        for id in self.live_ids() {
            let q = self.points[id].as_ref().expect("live point");
            for n in self.nearest(q, k, id) {
                adj[id].push(n);
                adj[n].push(id);
            }
        }
        adj.into_iter()
            .enumerate()
            .map(|(id, mut list)| {
                list.sort_unstable();
                list.dedup();
                list.into_iter()
                    .map(|n| {
                        let d = euclid_cost(
                            self.points[id].as_ref().expect("live point"),
                            self.points[n].as_ref().expect("live point"),
                        );
                        (n, d)
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(points: &[(usize, StateVec)], id: usize, k: usize) -> Vec<usize> {
        let q = &points.iter().find(|(i, _)| *i == id).unwrap().1;
        let mut all: Vec<(f64, usize)> = points
            .iter()
            .filter(|(i, _)| *i != id)
            .map(|(i, p)| (euclid_cost(p, q), *i))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        all.into_iter().take(k).map(|(_, i)| i).collect()
    }

    fn random_points(n: usize, d: usize, seed: u64) -> Vec<(usize, StateVec)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| (i, (0..d).map(|_| rng.random::<f64>() * 10.0).collect()))
            .collect()
    }

    #[test]
    fn rgg_k_values() {
        assert_eq!(rgg_k(100, 2, 1.001), 19);
        assert_eq!(rgg_k(2, 2, 1.001), 3);
        assert_eq!(rgg_k(1000, 7, 1.001), 22);
    }

    #[test]
    fn rgg_k_is_monotone() {
        let mut last = 0;
        for n in 2..5000 {
            let k = rgg_k(n, 3, 1.001);
            assert!(k >= last);
            last = k;
        }
    }

    #[test]
    fn collinear_points() {
        let mut idx = NeighborIndex::new(2, 1.001);
        idx.insert_batch(&[
            (0, vec![0.0, 0.0]),
            (1, vec![1.0, 0.0]),
            (2, vec![3.0, 0.0]),
        ])
        .unwrap();
        assert_eq!(idx.neighbors(0).unwrap(), vec![1, 2]);
        assert_eq!(idx.neighbors(1).unwrap(), vec![0, 2]);
        assert_eq!(idx.neighbors(2).unwrap(), vec![1, 0]);
    }

    #[test]
    fn ties_prefer_lower_id() {
        let mut idx = NeighborIndex::new(2, 1.001);
        idx.insert_batch(&[
            (0, vec![-1.0, 0.0]),
            (1, vec![0.0, 0.0]),
            (2, vec![1.0, 0.0]),
        ])
        .unwrap();
        assert_eq!(idx.nearest(&[0.0, 0.0], 1, 1), vec![0]);
    }

    #[test]
    fn cardinality_and_errors() {
        let pts = random_points(100, 2, 1);
        let mut idx = NeighborIndex::new(2, 1.001);
        idx.insert_batch(&pts).unwrap();
        assert_eq!(idx.neighbors(17).unwrap().len(), rgg_k(100, 2, 1.001));
        assert!(idx.insert_batch(&[(3, vec![0.0, 0.0])]).is_err());
        idx.remove_batch(&[5]).unwrap();
        assert!(matches!(idx.neighbors(5), Err(Error::UnknownId(5))));
        assert!(idx.remove_batch(&[5]).is_err());
    }

    #[test]
    fn epochs_and_incremental_inserts_match_brute_force() {
        let pts = random_points(100, 2, 2);
        let mut idx = NeighborIndex::new(2, 1.001);
        idx.insert_batch(&pts[..50]).unwrap();
        let e = idx.epoch();
        idx.insert_batch(&pts[50..]).unwrap();
        assert!(idx.epoch() > e);
        let k = rgg_k(100, 2, 1.001);
        for id in 0..100 {
            assert_eq!(idx.neighbors(id).unwrap(), brute_force(&pts, id, k));
        }
    }

    #[test]
    fn kd_tree_matches_brute_force() {
        for (n, d, seed) in [(200, 2, 3), (500, 3, 4), (400, 7, 5)] {
            let pts = random_points(n, d, seed);
            let mut idx = NeighborIndex::new(d, 1.001);
            idx.insert_batch(&pts).unwrap();
            let k = rgg_k(n, d, 1.001);
            for id in 0..n {
                assert_eq!(idx.neighbors(id).unwrap(), brute_force(&pts, id, k), "n={n} id={id}");
            }
        }
    }

    #[test]
    fn adjacency_is_symmetric() {
        let pts = random_points(300, 2, 6);
        let mut idx = NeighborIndex::new(2, 1.001);
        idx.insert_batch(&pts).unwrap();
        let adj = idx.symmetric_adjacency();
        for (a, list) in adj.iter().enumerate() {
            for &(b, d) in list {
                assert!(adj[b].iter().any(|&(x, e)| x == a && e == d));
            }
        }
    }
}
