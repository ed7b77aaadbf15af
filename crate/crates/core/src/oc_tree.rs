//! Trees of ordered cuts.
//!
//! For a sequence `s v1 .. vl` over a ground set, the tree partitions the
//! ground set into one component per sequence element and links every
//! non-root element to a parent with a smaller index. The down-set of `v`
//! (the union of the components of `v` and all its descendants) is a
//! minimum cut separating the prefix before `v` from `v`.

use std::fmt::Write as _;

use crate::error::{arg_err, Result};
use crate::graph::{NodeId, Weight};

const ROOT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OcTree {
    seq: Vec<NodeId>,
    /// Sequence index of the component holding each ground element.
    comp_of: Vec<u32>,
    /// Parent sequence index per sequence index; the root has none.
    parent: Vec<u32>,
    /// Cost of the down-set per sequence index; zero for the root.
    cost: Vec<Weight>,
    index_of: Vec<u32>,
    children: Vec<Vec<u32>>,
}

impl OcTree {
    /// Builds and validates a tree. `comp_of[x]` is the sequence index of
    /// the component containing ground element `x`; `parent[i]` is the
    /// parent index of sequence element `i` (ignored for `i = 0`).
    pub fn from_parts(seq: Vec<NodeId>, comp_of: Vec<u32>, parent: Vec<u32>, cost: Vec<Weight>) -> Result<OcTree> {
        let tree = Self::from_parts_unchecked(seq, comp_of, parent, cost)?;
        let problems = tree.structural_problems();
        if let Some(p) = problems.first() {
            return arg_err(format!("malformed tree of ordered cuts: {p}"));
        }
        Ok(tree)
    }

    /// Builds a tree checking only what indexing needs. Use
    /// [`OcTree::structural_problems`] to validate the rest.
    pub fn from_parts_unchecked(
        seq: Vec<NodeId>,
        comp_of: Vec<u32>,
        mut parent: Vec<u32>,
        cost: Vec<Weight>,
    ) -> Result<OcTree> {
        let l = seq.len();
        if l == 0 {
            return arg_err("empty sequence");
        }
        if parent.len() != l || cost.len() != l {
            return arg_err("parent and cost need one entry per sequence element");
        }
        if seq.iter().any(|&v| v >= comp_of.len()) {
            return arg_err("sequence element outside the ground set");
        }
        if comp_of.iter().any(|&c| c as usize >= l) {
            return arg_err("component index out of range");
        }
        parent[0] = ROOT;
        if parent[1..].iter().any(|&p| p as usize >= l) {
            return arg_err("parent index out of range");
        }
        let mut index_of = vec![ROOT; comp_of.len()];
        for (i, &v) in seq.iter().enumerate() {
            if index_of[v] != ROOT {
                return arg_err(format!("element {v} repeated in the sequence"));
            }
            index_of[v] = i as u32;
        }
        let mut children = vec![Vec::new(); l];
        for i in 1..l {
            children[parent[i] as usize].push(i as u32);
        }
        Ok(OcTree { seq, comp_of, parent, cost, index_of, children })
    }

    /// Violations of the structural rules, empty when valid.
    pub fn structural_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, &v) in self.seq.iter().enumerate() {
            if self.comp_of[v] as usize != i {
                out.push(format!("element {v} lies outside its own component"));
            }
            if i > 0 && self.parent[i] as usize >= i {
                out.push(format!("element {v} has parent index {} >= {i}", self.parent[i]));
            }
        }
        out
    }

    pub fn sequence(&self) -> &[NodeId] {
        &self.seq
    }

    pub fn root(&self) -> NodeId {
        self.seq[0]
    }

    pub fn ground_size(&self) -> usize {
        self.comp_of.len()
    }

    /// Sequence index of `v`, if it is a sequence element.
    pub fn index_of(&self, v: NodeId) -> Option<usize> {
        match self.index_of.get(v) {
            Some(&i) if i != ROOT => Some(i as usize),
            _ => None,
        }
    }

    fn require_index(&self, v: NodeId) -> Result<usize> {
        match self.index_of(v) {
            Some(i) => Ok(i),
            None => arg_err(format!("{v} is not in the sequence")),
        }
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let i = self.index_of(v)?;
        (i > 0).then(|| self.seq[self.parent[i] as usize])
    }

    /// Children of `v` in increasing sequence order.
    pub fn children(&self, v: NodeId) -> Vec<NodeId> {
        match self.index_of(v) {
            Some(i) => self.children[i].iter().map(|&c| self.seq[c as usize]).collect(),
            None => Vec::new(),
        }
    }

    /// Cached cost of the down-set of `v`; zero for the root.
    pub fn cost(&self, v: NodeId) -> Option<Weight> {
        self.index_of(v).map(|i| self.cost[i])
    }

    /// The sequence element whose component holds ground element `x`.
    pub fn component_owner(&self, x: NodeId) -> NodeId {
        self.seq[self.comp_of[x] as usize]
    }

    pub fn component(&self, v: NodeId) -> Result<Vec<NodeId>> {
        let i = self.require_index(v)? as u32;
        Ok((0..self.comp_of.len()).filter(|&x| self.comp_of[x] == i).collect())
    }

    /// Union of the components of `v` and all of its descendants, sorted.
    pub fn down_set(&self, v: NodeId) -> Result<Vec<NodeId>> {
        let i = self.require_index(v)?;
        let mut inside = vec![false; self.seq.len()];
        let mut stack = vec![i as u32];
        while let Some(j) = stack.pop() {
            inside[j as usize] = true;
            stack.extend_from_slice(&self.children[j as usize]);
        }
        Ok((0..self.comp_of.len()).filter(|&x| inside[self.comp_of[x] as usize]).collect())
    }

    /// Predecessor pointer of a non-root index: the previous sibling if
    /// there is one, otherwise the parent.
    fn pi_index(&self, i: usize) -> usize {
        let p = self.parent[i] as usize;
        let sibs = &self.children[p];
        let pos = sibs.iter().position(|&c| c as usize == i).expect("child listed under its parent");
        if pos == 0 {
            p
        } else {
            sibs[pos - 1] as usize
        }
    }

    /// The pointer chain from `v` back to the root, reversed: starts at the
    /// root, ends just before `v`, and passes through the parent of `v`.
    pub fn pi_star(&self, v: NodeId) -> Result<Vec<NodeId>> {
        let mut i = self.require_index(v)?;
        if i == 0 {
            return arg_err("the root has no predecessor chain");
        }
        let mut out = Vec::new();
        while i != 0 {
            i = self.pi_index(i);
            out.push(self.seq[i]);
        }
        out.reverse();
        Ok(out)
    }

    /// Elements `u` whose down-set is certified a minimum root-`u` cut: no
    /// non-root element on the pointer chain of `u` has a cheaper down-set.
    /// Returned in sequence order.
    pub fn certified(&self) -> Vec<NodeId> {
        let l = self.seq.len();
        // best[i]: minimum cost over the chain of i without the root
        let mut best = vec![Weight::MAX; l];
        let mut prev_sib = vec![usize::MAX; l];
        for p in 0..l {
            for w in self.children[p].windows(2) {
                prev_sib[w[1] as usize] = w[0] as usize;
            }
        }
        let mut out = Vec::new();
        for i in 1..l {
            let pi = if prev_sib[i] == usize::MAX { self.parent[i] as usize } else { prev_sib[i] };
            best[i] = if pi == 0 { Weight::MAX } else { best[pi].min(self.cost[pi]) };
            if best[i] >= self.cost[i] {
                out.push(self.seq[i]);
            }
        }
        out
    }

    /// Every certified element with its down-set.
    pub fn extract_valid_cuts(&self) -> Vec<(NodeId, Vec<NodeId>)> {
        self.certified().into_iter().map(|u| (u, self.down_set(u).expect("sequence element"))).collect()
    }

    /// Minimum cached cost over the tree path from `u` up to, but not
    /// including, ancestor `stop`. `None` if `stop` is not a proper ancestor.
    pub fn path_min(&self, u: NodeId, stop: NodeId) -> Option<Weight> {
        let mut i = self.index_of(u)?;
        let stop = self.index_of(stop)?;
        let mut m = Weight::MAX;
        while i != stop {
            if i == 0 {
                return None;
            }
            m = m.min(self.cost[i]);
            i = self.parent[i] as usize;
        }
        (m != Weight::MAX).then_some(m)
    }

    /// One line per sequence element: index, parent index, members, cost.
    pub fn dump(&self) -> String {
        let mut members = vec![Vec::new(); self.seq.len()];
        for (x, &c) in self.comp_of.iter().enumerate() {
            members[c as usize].push(x.to_string());
        }
        let mut out = String::new();
        for i in 0..self.seq.len() {
            let p = if i == 0 { "-".to_string() } else { self.parent[i].to_string() };
            let _ = writeln!(out, "{i} {p} [{}] {}", members[i].join(","), self.cost[i]);
        }
        out
    }

    pub fn parts(&self) -> (&[NodeId], &[u32], &[u32], &[Weight]) {
        (&self.seq, &self.comp_of, &self.parent, &self.cost)
    }
}

/// Whether every two sets are nested or disjoint.
pub fn is_laminar(sets: &[Vec<NodeId>]) -> bool {
    use std::collections::HashSet;
    let hashed: Vec<HashSet<NodeId>> = sets.iter().map(|s| s.iter().copied().collect()).collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let common = hashed[i].intersection(&hashed[j]).count();
            if common != 0 && common != hashed[i].len() && common != hashed[j].len() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    /// s=0 with children 1 and 2, and 3 below 1. Components are singletons
    /// except that ground element 4 sits with 1.
    fn sample() -> OcTree {
        OcTree::from_parts(vec![0, 1, 2, 3], vec![0, 1, 2, 3, 1], vec![ROOT, 0, 0, 1], vec![0, 5, 4, 3]).unwrap()
    }

    #[test]
    fn down_sets() {
        let t = sample();
        assert_eq!(t.down_set(3).unwrap(), vec![3]);
        assert_eq!(t.down_set(1).unwrap(), vec![1, 3, 4]);
        assert_eq!(t.down_set(0).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(t.down_set(4).is_err());
    }

    #[test]
    fn pointer_chains() {
        let t = sample();
        assert_eq!(t.pi_star(1).unwrap(), vec![0]);
        // 2 follows sibling 1; 3 hangs under 1
        assert_eq!(t.pi_star(2).unwrap(), vec![0, 1]);
        assert_eq!(t.pi_star(3).unwrap(), vec![0, 1]);
        assert!(t.pi_star(0).is_err());
        let chain = OcTree::from_parts(vec![0, 1, 2], vec![0, 1, 2], vec![ROOT, 0, 1], vec![0, 2, 2]).unwrap();
        assert_eq!(chain.pi_star(2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn certification_rule() {
        let t = sample();
        // 1 always; 2 needs cost(1)=5 >= 4; 3 needs cost(1)=5 >= 3
        assert_eq!(t.certified(), vec![1, 2, 3]);
        let t = OcTree::from_parts(vec![0, 1, 2], vec![0, 1, 2], vec![ROOT, 0, 0], vec![0, 2, 3]).unwrap();
        assert_eq!(t.certified(), vec![1]);
        let cuts = t.extract_valid_cuts();
        assert_eq!(cuts, vec![(1, vec![1])]);
    }

    #[test]
    fn monotone_chain_certifies_everything() {
        let t = OcTree::from_parts(vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![ROOT, 0, 1, 2], vec![0, 9, 7, 7]).unwrap();
        assert_eq!(t.certified(), vec![1, 2, 3]);
    }

    #[test]
    fn structure_is_validated() {
        assert!(OcTree::from_parts(vec![0, 1], vec![0, 0], vec![ROOT, 0], vec![0, 1]).is_err());
        assert!(OcTree::from_parts(vec![0, 1], vec![0, 1], vec![ROOT, 1], vec![0, 1]).is_err());
        assert!(OcTree::from_parts(vec![0, 0], vec![0, 1], vec![ROOT, 0], vec![0, 1]).is_err());
    }

    #[test]
    fn path_minimum() {
        let t = sample();
        assert_eq!(t.path_min(3, 1), Some(3));
        assert_eq!(t.path_min(3, 0), Some(3));
        assert_eq!(t.path_min(4, 0), None);
        assert_eq!(t.path_min(2, 1), None);
        let chain = OcTree::from_parts(vec![0, 1, 2, 3], vec![0, 1, 2, 3], vec![ROOT, 0, 1, 2], vec![0, 1, 3, 5]).unwrap();
        assert_eq!(chain.path_min(3, 1), Some(3));
    }

    #[test]
    fn laminarity() {
        assert!(is_laminar(&[vec![1, 2], vec![1], vec![3]]));
        assert!(!is_laminar(&[vec![1, 2], vec![2, 3]]));
    }

    #[test]
    fn dump_format() {
        assert_eq!(sample().dump(), "0 - [0] 0\n1 0 [1,4] 5\n2 0 [2] 4\n3 1 [3] 3\n");
    }
}
