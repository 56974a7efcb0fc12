//! Lexicographic keys and the addressable priority queue used for vertex,
//! edge and meet bookkeeping.

use std::cmp::Ordering;
use rustc_hash::FxHashMap as HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::space::Cost;

/// A 1-3 component lexicographic priority. Lower is better; infinite
/// components sort after every finite one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LexKey {
    parts: [f64; 3],
    len: u8,
}

impl LexKey {
    fn build(parts: &[f64]) -> Self {
        assert!((1..=3).contains(&parts.len()), "keys have 1 to 3 components");
        assert!(parts.iter().all(|p| !p.is_nan()), "NaN in priority key");
        let mut k = LexKey {
            parts: [0.0; 3],
            len: parts.len() as u8,
        };
        k.parts[..parts.len()].copy_from_slice(parts);
        k
    }

    pub fn one(a: f64) -> Self {
        Self::build(&[a])
    }

    pub fn two(a: f64, b: f64) -> Self {
        Self::build(&[a, b])
    }

    pub fn three(a: f64, b: f64, c: f64) -> Self {
        Self::build(&[a, b, c])
    }

    pub fn components(&self) -> &[f64] {
        &self.parts[..self.len as usize]
    }

    pub fn first(&self) -> f64 {
        self.parts[0]
    }
}

impl Eq for LexKey {}

impl Ord for LexKey {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.components().iter().zip(other.components()) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for LexKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lazy-vertex key: `(min(g, rhs) + ghat_other, min(g, rhs))`.
pub fn lazy_vertex_key(g: Cost, rhs: Cost, ghat_to_other_root: Cost) -> LexKey {
    let m = g.min(rhs);
    LexKey::two(m + ghat_to_other_root, m)
}

/// Edge key: `(g(p) + c_hat + h(c), g(p) + c_hat, g(p))`.
pub fn edge_key(g_parent: Cost, c_hat: Cost, h_child: Cost) -> LexKey {
    let through = g_parent + c_hat;
    LexKey::three(through + h_child, through, g_parent)
}

/// Lazy meet key: `h_to_start(x1) + c_hat + h_to_goal(x2)`.
pub fn lazy_meet_key(h1: Cost, c_hat: Cost, h2: Cost) -> LexKey {
    LexKey::one(h1 + c_hat + h2)
}

/// Valid meet key: `g_start(x1) + c + g_goal(x2)`.
pub fn meet_key(g1: Cost, c: Cost, g2: Cost) -> LexKey {
    LexKey::one(g1 + c + g2)
}

#[derive(Debug, Clone)]
struct Slot<E> {
    key: LexKey,
    seq: u64,
    entry: E,
}

impl<E> Slot<E> {
    fn before(&self, other: &Self) -> bool {
        (self.key, self.seq) < (other.key, other.seq)
    }
}

/// Binary heap with a handle map, supporting keyed update and removal.
///
/// Entries with exactly equal keys pop in insertion order; updating an
/// entry's key keeps its original insertion rank.
#[derive(Debug, Clone)]
pub struct AddressablePQ<E: Copy + Eq + Hash> {
    heap: Vec<Slot<E>>,
    pos: HashMap<E, usize>,
    next_seq: u64,
}

impl<E: Copy + Eq + Hash> Default for AddressablePQ<E> {
    fn default() -> Self {
        AddressablePQ {
            heap: Vec::new(),
            pos: HashMap::default(),
            next_seq: 0,
        }
    }
}

impl<E: Copy + Eq + Hash> AddressablePQ<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, entry: &E) -> bool {
        self.pos.contains_key(entry)
    }

    pub fn key_of(&self, entry: &E) -> Option<LexKey> {
        self.pos.get(entry).map(|&i| self.heap[i].key)
    }

    pub fn clear(&mut self) {
        self.heap.clear();
        self.pos.clear();
    }

    pub fn peek(&self) -> Option<(E, LexKey)> {
        self.heap.first().map(|s| (s.entry, s.key))
    }

    pub fn push_or_update(&mut self, entry: E, key: LexKey) {
        if let Some(&i) = self.pos.get(&entry) {
            let old = self.heap[i].key;
            if key == old {
                return;
            }
            self.heap[i].key = key;
            if key < old {
                self.sift_up(i);
            } else {
                self.sift_down(i);
            }
            return;
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Slot { key, seq, entry });
        let i = self.heap.len() - 1;
        self.pos.insert(entry, i);
        self.sift_up(i);
    }

    pub fn pop_best(&mut self) -> Result<(E, LexKey)> {
        if self.heap.is_empty() {
            return Err(Error::Usage("pop from an empty queue".into()));
        }
        let slot = self.take(0);
        Ok((slot.entry, slot.key))
    }

    pub fn remove(&mut self, entry: &E) -> bool {
        match self.pos.get(entry) {
            Some(&i) => {
                self.take(i);
                true
            }
            None => false,
        }
    }

    /// All entries in heap order (unsorted).
    pub fn entries(&self) -> impl Iterator<Item = (E, LexKey)> + '_ {
        self.heap.iter().map(|s| (s.entry, s.key))
    }

    fn take(&mut self, i: usize) -> Slot<E> {
        let last = self.heap.len() - 1;
        self.heap.swap(i, last);
        let slot = self.heap.pop().expect("non-empty heap");
        self.pos.remove(&slot.entry);
        if i < self.heap.len() {
            self.pos.insert(self.heap[i].entry, i);
            self.sift_down(i);
            self.sift_up(i);
        }
        slot
    }

    fn place(&mut self, i: usize, slot: Slot<E>) {
        self.pos.insert(slot.entry, i);
        self.heap[i] = slot;
    }

    // Both sifts move a hole instead of swapping, so each level costs one
    // position write.
    fn sift_up(&mut self, mut i: usize) {
        let moving = self.heap[i].clone();
        while i > 0 {
            let parent = (i - 1) / 2;
            if !moving.before(&self.heap[parent]) {
                break;
            }
            let up = self.heap[parent].clone();
            self.place(i, up);
            i = parent;
        }
        self.place(i, moving);
    }

    fn sift_down(&mut self, mut i: usize) {
        let moving = self.heap[i].clone();
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && self.heap[r].before(&self.heap[l]) { r } else { l };
            if !self.heap[child].before(&moving) {
                break;
            }
            let down = self.heap[child].clone();
            self.place(i, down);
            i = child;
        }
        self.place(i, moving);
    }
}
