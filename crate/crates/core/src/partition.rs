//! Partition trees, finished cut trees, and the auxiliary graph of a
//! supernode.

use std::collections::VecDeque;

use crate::error::{arg_err, Error, Result};
use crate::graph::{Graph, NodeId, Weight};

/// Edge between two supernodes. `a` and `b` are supernode ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeEdge {
    pub a: u32,
    pub b: u32,
    pub w: Weight,
}

impl TreeEdge {
    pub fn other(&self, x: u32) -> u32 {
        if self.a == x {
            self.b
        } else {
            self.a
        }
    }
}

/// Spanning tree over disjoint supernodes partitioning the vertex set.
#[derive(Debug, Clone)]
pub struct PartitionTree {
    super_of: Vec<u32>,
    members: Vec<Vec<NodeId>>,
    edges: Vec<TreeEdge>,
    adj: Vec<Vec<u32>>,
    mark: Vec<bool>,
}

impl PartitionTree {
    /// One supernode holding all `n` vertices.
    pub fn new(n: usize) -> Self {
        PartitionTree {
            super_of: vec![0; n],
            members: vec![(0..n).collect()],
            edges: Vec::new(),
            adj: vec![Vec::new()],
            mark: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.super_of.len()
    }

    pub fn supernode_count(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self, x: u32) -> &[NodeId] {
        &self.members[x as usize]
    }

    pub fn supernode_of(&self, v: NodeId) -> u32 {
        self.super_of[v]
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn edge(&self, e: u32) -> TreeEdge {
        self.edges[e as usize]
    }

    /// Ids of tree edges incident to supernode `x`.
    pub fn incident(&self, x: u32) -> &[u32] {
        &self.adj[x as usize]
    }

    pub fn is_complete(&self) -> bool {
        self.members.iter().all(|m| m.len() == 1)
    }

    /// Moves `b_members` out of supernode `x` into a new supernode joined to
    /// `x` by an edge of weight `w`. The tree edges in `moved` are reattached
    /// from `x` to the new supernode. Returns the new supernode id and the
    /// id of the new edge.
    pub fn split(&mut self, x: u32, b_members: &[NodeId], w: Weight, moved: &[u32]) -> (u32, u32) {
        let b = self.members.len() as u32;
        for &v in b_members {
            debug_assert_eq!(self.super_of[v], x);
            self.super_of[v] = b;
        }
        let super_of = &self.super_of;
        self.members[x as usize].retain(|&v| super_of[v] == x);
        debug_assert!(!self.members[x as usize].is_empty());
        self.members.push(b_members.to_vec());

        if self.mark.len() < self.edges.len() {
            self.mark.resize(self.edges.len(), false);
        }
        for &e in moved {
            let edge = &mut self.edges[e as usize];
            if edge.a == x {
                edge.a = b;
            } else {
                debug_assert_eq!(edge.b, x);
                edge.b = b;
            }
            self.mark[e as usize] = true;
        }
        let mark = &self.mark;
        self.adj[x as usize].retain(|&e| !mark[e as usize]);
        for &e in moved {
            self.mark[e as usize] = false;
        }
        let mut b_adj = moved.to_vec();
        let e = self.edges.len() as u32;
        self.edges.push(TreeEdge { a: x, b, w });
        self.mark.push(false);
        self.adj[x as usize].push(e);
        b_adj.push(e);
        self.adj.push(b_adj);
        (b, e)
    }

    /// Vertices on the `b` side of tree edge `e`.
    pub fn edge_cut(&self, e: u32) -> Vec<NodeId> {
        let edge = self.edges[e as usize];
        let mut out = Vec::new();
        let mut seen = vec![false; self.members.len()];
        seen[edge.a as usize] = true;
        seen[edge.b as usize] = true;
        let mut queue = VecDeque::from([edge.b]);
        while let Some(y) = queue.pop_front() {
            out.extend_from_slice(&self.members[y as usize]);
            for &f in &self.adj[y as usize] {
                let z = self.edges[f as usize].other(y);
                if !seen[z as usize] {
                    seen[z as usize] = true;
                    queue.push_back(z);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Recomputes every edge's induced cut from scratch. Returns the first
    /// edge whose weight disagrees, with the recomputed cost.
    pub fn check_edge_costs(&self, g: &Graph) -> Result<()> {
        for e in 0..self.edges.len() as u32 {
            let cost = g.cut_cost(&self.edge_cut(e))?;
            if cost != self.edges[e as usize].w {
                return Err(Error::Internal(format!(
                    "tree edge {e} has weight {} but its cut costs {cost}",
                    self.edges[e as usize].w
                )));
            }
        }
        Ok(())
    }

    /// Converts a tree of singletons into a cut tree rooted at vertex 0.
    pub fn to_cut_tree(&self) -> Result<CutTree> {
        if !self.is_complete() {
            return Err(Error::State("partition tree still has non-singleton supernodes".into()));
        }
        let edges: Vec<(NodeId, NodeId, Weight)> = self
            .edges
            .iter()
            .map(|e| (self.members[e.a as usize][0], self.members[e.b as usize][0], e.w))
            .collect();
        CutTree::from_undirected(self.vertex_count(), &edges)
    }
}

/// Auxiliary graph of one supernode. Nodes `0..vertices.len()` are the
/// supernode's vertices; node `vertices.len() + i` is the contraction of
/// the tree component behind edge `neighbor_edges[i]`.
#[derive(Debug, Clone)]
pub struct AuxGraph {
    pub graph: Graph,
    pub vertices: Vec<NodeId>,
    pub neighbor_edges: Vec<u32>,
}

impl AuxGraph {
    pub fn neighbor_node(&self, i: usize) -> NodeId {
        self.vertices.len() + i
    }
}

/// Builds the auxiliary graph of supernode `x`: every component of the tree
/// with `x` removed is contracted to one node.
pub fn auxiliary_graph(g: &Graph, tree: &PartitionTree, x: u32) -> Result<AuxGraph> {
    if x as usize >= tree.supernode_count() {
        return arg_err(format!("supernode {x} does not exist"));
    }
    let vertices = tree.members(x).to_vec();
    if vertices.len() < 2 {
        return arg_err("auxiliary graph of a singleton supernode");
    }
    let mut class = vec![u32::MAX; g.node_count()];
    let mut labels = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        class[v] = i as u32;
        labels.push(g.label(v));
    }
    let neighbor_edges = tree.incident(x).to_vec();
    let mut seen = vec![false; tree.supernode_count()];
    seen[x as usize] = true;
    for &e in &neighbor_edges {
        let id = labels.len() as u32;
        let y = tree.edge(e).other(x);
        labels.push(g.label(tree.members(y)[0]));
        seen[y as usize] = true;
        let mut queue = VecDeque::from([y]);
        while let Some(z) = queue.pop_front() {
            for &v in tree.members(z) {
                class[v] = id;
            }
            for &f in tree.incident(z) {
                let w = tree.edge(f).other(z);
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    debug_assert!(class.iter().all(|&c| c != u32::MAX));
    Ok(AuxGraph { graph: g.quotient(&class, labels), vertices, neighbor_edges })
}

/// A weighted spanning tree on `0..n` stored by parent pointers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutTree {
    parent: Vec<Option<(NodeId, Weight)>>,
}

impl CutTree {
    /// Builds a tree from `(child, parent, weight)` triples. Exactly one
    /// vertex must be without a parent and the parent links must be acyclic.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId, Weight)]) -> Result<CutTree> {
        if n == 0 {
            return Err(Error::TooSmall);
        }
        if edges.len() != n - 1 {
            return arg_err(format!("a tree on {n} vertices needs {} edges, got {}", n - 1, edges.len()));
        }
        let mut parent = vec![None; n];
        for &(c, p, w) in edges {
            if c >= n || p >= n {
                return arg_err("tree vertex out of range");
            }
            if parent[c].is_some() {
                return arg_err(format!("vertex {c} has two parents"));
            }
            parent[c] = Some((p, w));
        }
        let tree = CutTree { parent };
        // every vertex must reach the root
        let mut state = vec![0u8; n];
        for v in 0..n {
            let mut path = Vec::new();
            let mut u = v;
            loop {
                match state[u] {
                    2 => break,
                    1 => return arg_err("parent links contain a cycle"),
                    _ => {}
                }
                state[u] = 1;
                path.push(u);
                match tree.parent[u] {
                    Some((p, _)) => u = p,
                    None => break,
                }
            }
            for p in path {
                state[p] = 2;
            }
        }
        Ok(tree)
    }

    /// Roots an undirected edge list at vertex 0.
    pub fn from_undirected(n: usize, edges: &[(NodeId, NodeId, Weight)]) -> Result<CutTree> {
        if n == 0 {
            return Err(Error::TooSmall);
        }
        if edges.len() != n - 1 {
            return arg_err(format!("a tree on {n} vertices needs {} edges, got {}", n - 1, edges.len()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return arg_err("tree vertex out of range");
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &(v, w) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, w));
                    queue.push_back(v);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return arg_err("edges do not span the vertex set");
        }
        Ok(CutTree { parent })
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: NodeId) -> Option<(NodeId, Weight)> {
        self.parent[v]
    }

    /// `(child, parent, weight)` for every non-root vertex.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, Weight)> {
        (0..self.node_count())
            .filter_map(|v| self.parent[v].map(|(p, w)| (v, p, w)))
            .collect()
    }

    fn undirected_adj(&self) -> Vec<Vec<(NodeId, Weight)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for (c, p, w) in self.edges() {
            adj[c].push((p, w));
            adj[p].push((c, w));
        }
        adj
    }

    /// Minimum edge weight on every tree path. The diagonal is zero.
    pub fn all_pairs(&self) -> Vec<Vec<Weight>> {
        let n = self.node_count();
        let adj = self.undirected_adj();
        let mut out = vec![vec![0; n]; n];
        let mut stack = Vec::new();
        for s in 0..n {
            let row = &mut out[s];
            stack.push((s, usize::MAX, Weight::MAX));
            while let Some((u, from, m)) = stack.pop() {
                if u != s {
                    row[u] = m;
                }
                for &(v, w) in &adj[u] {
                    if v != from {
                        stack.push((v, u, m.min(w)));
                    }
                }
            }
        }
        out
    }

    /// Unweighted diameter (number of edges on the longest path).
    pub fn diameter(&self) -> usize {
        let n = self.node_count();
        if n < 2 {
            return 0;
        }
        let adj = self.undirected_adj();
        let far = |root: usize| {
            let mut dist = vec![usize::MAX; n];
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            let mut last = root;
            while let Some(u) = queue.pop_front() {
                last = u;
                for &(v, _) in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            (last, dist[last])
        };
        let (a, _) = far(0);
        far(a).1
    }

    /// Checks that every tree edge weight equals the cost of the cut it
    /// induces in `g`.
    pub fn check_fundamental_cuts(&self, g: &Graph) -> Result<()> {
        let n = self.node_count();
        if g.node_count() != n {
            return arg_err("graph and tree have different vertex counts");
        }
        let adj = self.undirected_adj();
        for (c, p, w) in self.edges() {
            let mut side = vec![false; n];
            side[c] = true;
            let mut stack = vec![(c, p)];
            while let Some((u, from)) = stack.pop() {
                for &(v, _) in &adj[u] {
                    if v != from && !side[v] {
                        side[v] = true;
                        stack.push((v, u));
                    }
                }
            }
            let cost = g.cut_cost_mask(&side);
            if cost != w {
                return Err(Error::Internal(format!(
                    "tree edge {c}-{p} has weight {w} but its cut costs {cost}"
                )));
            }
        }
        Ok(())
    }
}
