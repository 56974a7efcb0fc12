//! Dense one-to-many relation keyed by vertex id.

use super::VertexId;

/// `key -> [values]` stored in a vector indexed by key. Vertex ids are
/// dense, so this avoids hashing on the hot propagation paths.
#[derive(Debug, Clone, Default)]
pub struct Links {
    lists: Vec<Vec<VertexId>>,
}

impl Links {
    pub fn get(&self, k: VertexId) -> &[VertexId] {
        self.lists.get(k).map_or(&[], |l| l.as_slice())
    }

    pub fn push(&mut self, k: VertexId, v: VertexId) {
        if k >= self.lists.len() {
            self.lists.resize_with(k + 1, Vec::new);
        }
        self.lists[k].push(v);
    }

    /// Removes one occurrence of `v` under `k`; order is not preserved.
    pub fn detach(&mut self, k: VertexId, v: VertexId) {
        if let Some(list) = self.lists.get_mut(k) {
            if let Some(i) = list.iter().position(|&x| x == v) {
                list.swap_remove(i);
            }
        }
    }

    pub fn clear(&mut self) {
        for l in &mut self.lists {
            l.clear();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_get_detach() {
        let mut l = Links::default();
        assert!(l.get(7).is_empty());
        l.push(3, 1);
        l.push(3, 2);
        l.push(0, 9);
        assert_eq!(l.get(3), &[1, 2]);
        l.detach(3, 1);
        assert_eq!(l.get(3), &[2]);
        l.detach(3, 5);
        assert_eq!(l.get(3), &[2]);
        l.clear();
        assert!(l.get(3).is_empty() && l.get(0).is_empty());
    }
}
