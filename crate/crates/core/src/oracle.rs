//! Brute-force ground truth for small graphs.
//!
//! Nothing here uses [`crate::FlowState`]: the flow mode runs its own
//! Edmonds-Karp on a dense capacity matrix so that it can judge the engine.

use std::collections::VecDeque;

use crate::error::{arg_err, Result};
use crate::graph::{Graph, NodeId, Weight};
use crate::oc_tree::OcTree;
use crate::partition::CutTree;

/// Largest graph the exhaustive mode accepts.
pub const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Enumerate all bipartitions.
    Exhaustive,
    /// One independent maxflow per pair.
    MaxFlow,
}

/// Minimum cut value of every vertex pair. The diagonal is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllPairsCuts {
    pub values: Vec<Vec<Weight>>,
}

impl AllPairsCuts {
    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Weight {
        self.values[u][v]
    }

    /// For every triple, the smallest of the three pairwise values occurs at
    /// least twice.
    pub fn satisfies_triple_rule(&self) -> bool {
        let n = self.node_count();
        for u in 0..n {
            for v in u + 1..n {
                for w in v + 1..n {
                    let mut t = [self.values[u][v], self.values[v][w], self.values[u][w]];
                    t.sort_unstable();
                    if t[0] != t[1] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn all_pairs_min_cut(g: &Graph, mode: OracleMode) -> Result<AllPairsCuts> {
    let n = g.node_count();
    match mode {
        OracleMode::Exhaustive => {
            if n > EXHAUSTIVE_LIMIT {
                return arg_err(format!("exhaustive oracle refuses n = {n} > {EXHAUSTIVE_LIMIT}"));
            }
            let mut values = vec![vec![Weight::MAX; n]; n];
            for u in 0..n {
                values[u][u] = 0;
            }
            if n < 2 {
                return Ok(AllPairsCuts { values });
            }
            // node 0 always inside; the other n - 1 bits choose the rest
            let full = (1u32 << (n - 1)) - 1;
            let mut inside = vec![false; n];
            for mask in 0..full {
                inside[0] = true;
                for v in 1..n {
                    inside[v] = mask >> (v - 1) & 1 == 1;
                }
                let c = g.cut_cost_mask(&inside);
                for u in 0..n {
                    if !inside[u] {
                        continue;
                    }
                    for v in 0..n {
                        if !inside[v] && c < values[u][v] {
                            values[u][v] = c;
                            values[v][u] = c;
                        }
                    }
                }
            }
            Ok(AllPairsCuts { values })
        }
        OracleMode::MaxFlow => {
            let mut values = vec![vec![0; n]; n];
            for u in 0..n {
                for v in u + 1..n {
                    let f = set_min_cut(g, &[u], &[v])?;
                    values[u][v] = f;
                    values[v][u] = f;
                }
            }
            Ok(AllPairsCuts { values })
        }
    }
}

/// Minimum cut separating node set `a` from node set `b`, computed by
/// contracting each set to one node and running Edmonds-Karp.
pub fn set_min_cut(g: &Graph, a: &[NodeId], b: &[NodeId]) -> Result<Weight> {
    let n = g.node_count();
    if a.is_empty() || b.is_empty() {
        return arg_err("both terminal sets must be nonempty");
    }
    let mut class: Vec<usize> = (0..n).collect();
    for &x in a.iter().chain(b) {
        if x >= n {
            return arg_err("terminal out of range");
        }
    }
    for &x in a {
        class[x] = a[0];
    }
    for &x in b {
        if a.contains(&x) {
            return arg_err("terminal sets overlap");
        }
        class[x] = b[0];
    }
    let mut cap = vec![vec![0i128; n]; n];
    for e in g.edges() {
        let (u, v) = (class[e.u as usize], class[e.v as usize]);
        if u != v {
            cap[u][v] += e.w as i128;
            cap[v][u] += e.w as i128;
        }
    }
    Ok(edmonds_karp(&mut cap, a[0], b[0]).0)
}

/// Maximum flow on a dense symmetric capacity matrix. Returns the value and
/// the set reachable from `s` in the final residual graph.
fn edmonds_karp(cap: &mut [Vec<i128>], s: usize, t: usize) -> (Weight, Vec<bool>) {
    let n = cap.len();
    let mut total: i128 = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            let reach = prev.iter().map(|&p| p != usize::MAX).collect();
            return (total as Weight, reach);
        }
        let mut delta = i128::MAX;
        let mut v = t;
        while v != s {
            let u = prev[v];
            delta = delta.min(cap[u][v]);
            v = u;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            cap[u][v] -= delta;
            cap[v][u] += delta;
            v = u;
        }
        total += delta;
    }
}

/// Minimum `s`-`t` cut with its source-minimal side (nodes reachable from
/// `s` in the residual graph).
pub fn min_cut_source_side(g: &Graph, s: NodeId, t: NodeId) -> Result<(Weight, Vec<NodeId>)> {
    let n = g.node_count();
    if s >= n || t >= n || s == t {
        return arg_err("bad terminal pair");
    }
    let mut cap = vec![vec![0i128; n]; n];
    for e in g.edges() {
        cap[e.u as usize][e.v as usize] += e.w as i128;
        cap[e.v as usize][e.u as usize] += e.w as i128;
    }
    let (f, reach) = edmonds_karp(&mut cap, s, t);
    Ok((f, (0..n).filter(|&v| reach[v]).collect()))
}

/// A pair whose tree value disagrees with the truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub u: NodeId,
    pub v: NodeId,
    pub expected: Weight,
    pub got: Weight,
}

/// Compares tree path bottlenecks against `truth` for every pair.
pub fn check_cut_tree(tree: &CutTree, truth: &AllPairsCuts) -> Result<Vec<Mismatch>> {
    let n = tree.node_count();
    if n != truth.node_count() {
        return arg_err(format!("tree has {n} vertices, truth has {}", truth.node_count()));
    }
    let got = tree.all_pairs();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if got[u][v] != truth.values[u][v] {
                out.push(Mismatch { u, v, expected: truth.values[u][v], got: got[u][v] });
            }
        }
    }
    Ok(out)
}

/// Checks a tree of ordered cuts over the nodes of `g`: structure, cached
/// costs, and that each down-set is a minimum cut between the preceding
/// prefix and its element. Returns the problems found.
pub fn check_oc_tree(tree: &OcTree, g: &Graph) -> Vec<String> {
    let mut problems = tree.structural_problems();
    if tree.ground_size() != g.node_count() {
        problems.push(format!("ground set has {} elements, graph has {}", tree.ground_size(), g.node_count()));
    }
    if !problems.is_empty() {
        return problems;
    }
    let seq = tree.sequence();
    for k in 1..seq.len() {
        let v = seq[k];
        let down = tree.down_set(v).expect("sequence element");
        let prefix = &seq[..k];
        let mut inside = vec![false; g.node_count()];
        for &x in &down {
            inside[x] = true;
        }
        if !inside[v] {
            problems.push(format!("down-set of {v} misses {v}"));
            continue;
        }
        if let Some(&p) = prefix.iter().find(|&&p| inside[p]) {
            problems.push(format!("down-set of {v} contains earlier element {p}"));
            continue;
        }
        let cost = g.cut_cost_mask(&inside);
        if Some(cost) != tree.cost(v) {
            problems.push(format!("cached cost of {v} is {:?}, down-set costs {cost}", tree.cost(v)));
        }
        match set_min_cut(g, prefix, &[v]) {
            Ok(f) if f == cost => {}
            Ok(f) => problems.push(format!("down-set of {v} costs {cost}, minimum is {f}")),
            Err(e) => problems.push(e.to_string()),
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tiny_cases() {
        let g = Graph::from_edges(2, [(0, 1, 5)]).unwrap();
        for mode in [OracleMode::Exhaustive, OracleMode::MaxFlow] {
            assert_eq!(all_pairs_min_cut(&g, mode).unwrap().get(0, 1), 5);
        }
        let c4 = Graph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let f = all_pairs_min_cut(&c4, OracleMode::Exhaustive).unwrap();
        assert!((0..4).all(|u| (0..4).all(|v| u == v || f.get(u, v) == 2)));
    }

    #[test]
    fn modes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let n = rng.gen_range(2..=9);
            let mut edges: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v, rng.gen_range(1..=9))).collect();
            for _ in 0..n {
                edges.push((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(1..=9)));
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let a = all_pairs_min_cut(&g, OracleMode::Exhaustive).unwrap();
            let b = all_pairs_min_cut(&g, OracleMode::MaxFlow).unwrap();
            assert_eq!(a, b);
            assert!(a.satisfies_triple_rule());
        }
    }

    #[test]
    fn exhaustive_refuses_large() {
        let g = Graph::from_edges(17, (0..16).map(|i| (i, i + 1, 1))).unwrap();
        assert!(all_pairs_min_cut(&g, OracleMode::Exhaustive).is_err());
    }

    #[test]
    fn mutated_tree_is_caught() {
        let g = Graph::from_edges(3, [(0, 1, 3), (1, 2, 1)]).unwrap();
        let truth = all_pairs_min_cut(&g, OracleMode::Exhaustive).unwrap();
        let good = CutTree::from_edges(3, &[(1, 0, 3), (2, 1, 1)]).unwrap();
        assert!(check_cut_tree(&good, &truth).unwrap().is_empty());
        let bad = CutTree::from_edges(3, &[(1, 0, 4), (2, 1, 1)]).unwrap();
        let m = check_cut_tree(&bad, &truth).unwrap();
        assert_eq!(m, vec![Mismatch { u: 0, v: 1, expected: 3, got: 4 }]);
        let small = CutTree::from_edges(2, &[(1, 0, 4)]).unwrap();
        assert!(check_cut_tree(&small, &truth).is_err());
    }

    #[test]
    fn set_cut_overlap_rejected() {
        let g = Graph::from_edges(3, [(0, 1, 3), (1, 2, 1)]).unwrap();
        assert!(set_min_cut(&g, &[0, 1], &[1]).is_err());
        assert_eq!(set_min_cut(&g, &[0, 1], &[2]).unwrap(), 1);
        assert_eq!(set_min_cut(&g, &[0], &[1, 2]).unwrap(), 3);
    }
}
