//! Undirected weighted graphs in forward-star form.
//!
//! A [`Graph`] is always normalized: self-loops are dropped and parallel
//! edges are merged by summing their weights. Each node carries a label,
//! the id of the original vertex it stands for. Contracted nodes keep the
//! label of their representative.

use std::collections::VecDeque;

use crate::error::{arg_err, Error, Result};

pub type NodeId = usize;
pub type Weight = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub w: Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Adj {
    pub to: u32,
    pub edge: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<u32>,
    edges: Vec<Edge>,
    first: Vec<usize>,
    adj: Vec<Adj>,
}

impl Graph {
    /// Builds a graph on `n` nodes labeled `0..n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Weight)>,
    {
        Graph::with_labels((0..n as u32).collect(), edges)
    }

    pub fn with_labels<I>(labels: Vec<u32>, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Weight)>,
    {
        let n = labels.len();
        let mut raw = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return arg_err(format!("edge ({u}, {v}) out of range for {n} nodes"));
            }
            raw.push(Edge { u: u as u32, v: v as u32, w });
        }
        Ok(Graph::build(labels, raw))
    }

    /// Normalizes `raw` (drops loops, merges parallel edges) and builds the
    /// forward-star index. Linear in `n + m`.
    pub(crate) fn build(labels: Vec<u32>, raw: Vec<Edge>) -> Graph {
        let n = labels.len();
        // bucket by smaller endpoint
        let mut count = vec![0usize; n + 1];
        for e in &raw {
            if e.u != e.v {
                count[e.u.min(e.v) as usize + 1] += 1;
            }
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let total = count[n];
        let mut bucket = vec![Edge { u: 0, v: 0, w: 0 }; total];
        let mut fill = count.clone();
        for e in &raw {
            if e.u != e.v {
                let (a, b) = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
                let slot = &mut fill[a as usize];
                bucket[*slot] = Edge { u: a, v: b, w: e.w };
                *slot += 1;
            }
        }
        let mut edges: Vec<Edge> = Vec::with_capacity(total);
        let mut seen = vec![u32::MAX; n];
        let mut pos = vec![0usize; n];
        for a in 0..n {
            let start = edges.len();
            for e in &bucket[count[a]..count[a + 1]] {
                let b = e.v as usize;
                if seen[b] == a as u32 {
                    edges[pos[b]].w += e.w;
                } else {
                    seen[b] = a as u32;
                    pos[b] = edges.len();
                    edges.push(*e);
                }
            }
            edges[start..].sort_unstable_by_key(|e| e.v);
        }
        Graph::index(labels, edges)
    }

    fn index(labels: Vec<u32>, edges: Vec<Edge>) -> Graph {
        let n = labels.len();
        let mut first = vec![0usize; n + 1];
        for e in &edges {
            first[e.u as usize + 1] += 1;
            first[e.v as usize + 1] += 1;
        }
        for i in 0..n {
            first[i + 1] += first[i];
        }
        let mut fill = first.clone();
        let mut adj = vec![Adj { to: 0, edge: 0 }; 2 * edges.len()];
        for (i, e) in edges.iter().enumerate() {
            adj[fill[e.u as usize]] = Adj { to: e.v, edge: i as u32 };
            fill[e.u as usize] += 1;
            adj[fill[e.v as usize]] = Adj { to: e.u, edge: i as u32 };
            fill[e.v as usize] += 1;
        }
        Graph { labels, edges, first, adj }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, v: NodeId) -> u32 {
        self.labels[v]
    }

    pub fn neighbors(&self, v: NodeId) -> &[Adj] {
        &self.adj[self.first[v]..self.first[v + 1]]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.first[v + 1] - self.first[v]
    }

    pub fn weight(&self, edge: u32) -> Weight {
        self.edges[edge as usize].w
    }

    pub fn weighted_degree(&self, v: NodeId) -> Weight {
        self.neighbors(v).iter().map(|a| self.weight(a.edge)).sum()
    }

    pub fn total_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Cost of the cut `members`: total weight of edges with exactly one
    /// endpoint inside.
    pub fn cut_cost(&self, members: &[NodeId]) -> Result<Weight> {
        let mut inside = vec![false; self.node_count()];
        let mut count = 0;
        for &v in members {
            if v >= self.node_count() {
                return arg_err(format!("node {v} out of range"));
            }
            if !inside[v] {
                inside[v] = true;
                count += 1;
            }
        }
        if count == 0 || count == self.node_count() {
            return Err(Error::InvalidCut(self.node_count()));
        }
        Ok(self.cut_cost_mask(&inside))
    }

    /// Cut cost for a membership mask. No validity checks.
    pub fn cut_cost_mask(&self, inside: &[bool]) -> Weight {
        self.edges
            .iter()
            .filter(|e| inside[e.u as usize] != inside[e.v as usize])
            .map(|e| e.w)
            .sum()
    }

    /// Merges the nodes of `class` into new nodes: node `v` becomes
    /// `class[v]`. `labels` gives the label of each new node.
    pub fn quotient(&self, class: &[u32], labels: Vec<u32>) -> Graph {
        debug_assert_eq!(class.len(), self.node_count());
        let raw = self
            .edges
            .iter()
            .map(|e| Edge { u: class[e.u as usize], v: class[e.v as usize], w: e.w })
            .collect();
        Graph::build(labels, raw)
    }

    /// Contracts `members` into `representative`. Returns the contracted graph
    /// and the old-to-new node mapping. Surviving nodes keep their relative
    /// order.
    pub fn contract_set(
        &self,
        members: &[NodeId],
        representative: NodeId,
    ) -> Result<(Graph, Vec<NodeId>)> {
        let n = self.node_count();
        if members.iter().any(|&v| v >= n) || representative >= n {
            return arg_err("contraction node out of range");
        }
        if !members.contains(&representative) {
            return arg_err("representative must belong to the contracted set");
        }
        let mut merged = vec![false; n];
        for &v in members {
            merged[v] = true;
        }
        let mut map = vec![0usize; n];
        let mut labels = Vec::with_capacity(n);
        for v in 0..n {
            if !merged[v] || v == representative {
                map[v] = labels.len();
                labels.push(self.labels[v]);
            }
        }
        for &v in members {
            map[v] = map[representative];
        }
        let class: Vec<u32> = map.iter().map(|&c| c as u32).collect();
        Ok((self.quotient(&class, labels), map))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        self.bfs_order_from(0).len() == n
    }

    fn bfs_order_from(&self, root: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.node_count()];
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for a in self.neighbors(v) {
                let u = a.to as usize;
                if !seen[u] {
                    seen[u] = true;
                    order.push(u);
                }
            }
        }
        order
    }

    /// Renumbers nodes in BFS discovery order (component by component, each
    /// started from its lowest unvisited id). Returns the reordered graph and
    /// `perm` with `perm[old] = new`.
    pub fn bfs_reorder(&self) -> (Graph, Vec<NodeId>) {
        let n = self.node_count();
        let mut perm = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for root in 0..n {
            if perm[root] != usize::MAX {
                continue;
            }
            perm[root] = next;
            next += 1;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for a in self.neighbors(v) {
                    let u = a.to as usize;
                    if perm[u] == usize::MAX {
                        perm[u] = next;
                        next += 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        let mut labels = vec![0u32; n];
        for v in 0..n {
            labels[perm[v]] = self.labels[v];
        }
        let class: Vec<u32> = perm.iter().map(|&p| p as u32).collect();
        (self.quotient(&class, labels), perm)
    }

    /// Unit-length BFS distances from `root`; unreachable nodes get `u32::MAX`.
    pub fn bfs_distances(&self, root: NodeId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for a in self.neighbors(v) {
                let u = a.to as usize;
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.node_count() < 2 {
            return Err(Error::TooSmall);
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1, 3), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn cut_cost_small_cases() {
        assert_eq!(path3().cut_cost(&[2]).unwrap(), 1);
        let c4 = Graph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        for v in 0..4 {
            assert_eq!(c4.cut_cost(&[v]).unwrap(), 2);
        }
    }

    #[test]
    fn cut_cost_rejects_empty_and_full() {
        let g = path3();
        assert_eq!(g.cut_cost(&[]), Err(Error::InvalidCut(3)));
        assert_eq!(g.cut_cost(&[0, 1, 2]), Err(Error::InvalidCut(3)));
    }

    #[test]
    fn cut_cost_matches_naive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = 12;
            let raw: Vec<(usize, usize, u64)> = (0..30)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..20)))
                .collect();
            let g = Graph::from_edges(n, raw.iter().copied()).unwrap();
            let members: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if members.is_empty() || members.len() == n {
                continue;
            }
            let naive: u64 = raw
                .iter()
                .filter(|&&(u, v, _)| members.contains(&u) != members.contains(&v))
                .map(|e| e.2)
                .sum();
            assert_eq!(g.cut_cost(&members).unwrap(), naive);
        }
    }

    #[test]
    fn normalization_drops_loops_and_merges() {
        let g = Graph::from_edges(3, [(0, 0, 5), (0, 1, 2), (1, 0, 3), (2, 1, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges()[0], Edge { u: 0, v: 1, w: 5 });
        assert_eq!(g.edges()[1], Edge { u: 1, v: 2, w: 1 });
        let again = Graph::from_edges(3, g.edges().iter().map(|e| (e.v as usize, e.u as usize, e.w)))
            .unwrap();
        assert_eq!(again.edges(), g.edges());
    }

    #[test]
    fn adjacency_lists_each_edge_twice() {
        let g = Graph::from_edges(4, [(0, 1, 1), (1, 2, 2), (2, 0, 3), (2, 3, 4)]).unwrap();
        let mut seen = vec![0; g.edge_count()];
        for v in 0..4 {
            for a in g.neighbors(v) {
                seen[a.edge as usize] += 1;
                let e = g.edges()[a.edge as usize];
                assert!(e.u as usize == v || e.v as usize == v);
            }
        }
        assert!(seen.iter().all(|&c| c == 2));
    }

    #[test]
    fn contract_singleton_is_identity() {
        let g = path3();
        let (h, map) = g.contract_set(&[1], 1).unwrap();
        assert_eq!(h, g);
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn contract_triangle_pair() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        let (h, map) = g.contract_set(&[1, 2], 1).unwrap();
        assert_eq!(h.node_count(), 2);
        assert_eq!(h.edges(), &[Edge { u: 0, v: 1, w: 2 }]);
        assert_eq!(map, vec![0, 1, 1]);
        assert_eq!(h.labels(), &[0, 1]);
    }

    #[test]
    fn contract_requires_representative_in_set() {
        assert!(matches!(path3().contract_set(&[0, 1], 2), Err(Error::Argument(_))));
    }

    #[test]
    fn bfs_reorder_identity_on_path() {
        let g = Graph::from_edges(4, [(0, 1, 1), (1, 2, 2), (2, 3, 3)]).unwrap();
        let (h, perm) = g.bfs_reorder();
        assert_eq!(perm, vec![0, 1, 2, 3]);
        assert_eq!(h, g);
    }

    #[test]
    fn bfs_reorder_star_center_last() {
        // center is node 4
        let g = Graph::from_edges(5, (0..4).map(|i| (i, 4, i as u64 + 1))).unwrap();
        let (h, perm) = g.bfs_reorder();
        assert_eq!(perm[0], 0);
        assert_eq!(perm[4], 1);
        let mut sorted = perm.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2, 3, 4]);
        for e in g.edges() {
            let (a, b) = (perm[e.u as usize], perm[e.v as usize]);
            let found = h.neighbors(a).iter().find(|x| x.to as usize == b).unwrap();
            assert_eq!(h.weight(found.edge), e.w);
        }
        assert_eq!(h.label(1), 4);
    }
}
