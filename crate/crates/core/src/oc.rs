//! Generalized Gomory-Hu construction driven by ordered cuts.
//!
//! Each round on a supernode `X` fixes a source `s`, orders the other
//! vertices by upper bounds `mu(v) >= f(s, v)`, builds a tree of ordered
//! cuts for that order, and keeps the down-sets certified as minimum
//! `s`-`v` cuts. Those cuts form a laminar family, and all of them split
//! `X` in one pass: each certified `v` becomes the source of a new
//! supernode holding the vertices whose smallest enclosing cut is `v`'s.

use std::time::Instant;

use crate::error::{arg_err, Error, Result};
use crate::gh::CutTreeRun;
use crate::graph::{Graph, NodeId, Weight};
use crate::metrics::{RunMetrics, SizePair};
use crate::oc_tree::OcTree;
use crate::ordered_cuts::ordered_cuts;
use crate::partition::{auxiliary_graph, PartitionTree};

/// Source maximizing the singleton cut (lowest id on ties) and the
/// singleton cut cost of every vertex as its bound.
pub fn init_mu_for_root(g: &Graph) -> (NodeId, Vec<Weight>) {
    let mu: Vec<Weight> = (0..g.node_count()).map(|v| g.weighted_degree(v)).collect();
    let mut s = 0;
    for v in 1..mu.len() {
        if mu[v] > mu[s] {
            s = v;
        }
    }
    (s, mu)
}

/// Bounds for the supernode created from the cut of `v`: for each `u` of
/// `members` other than `v`, the smallest cached cost on the tree path from
/// `u` up to `v`, excluding `v`.
pub fn mu_for_child_b(tree: &OcTree, v: NodeId, members: &[NodeId]) -> Result<Vec<(NodeId, Weight)>> {
    members
        .iter()
        .filter(|&&u| u != v)
        .map(|&u| {
            tree.path_min(u, v)
                .map(|m| (u, m))
                .ok_or_else(|| Error::Internal(format!("{u} does not lie below {v}")))
        })
        .collect()
}

/// Lowers each bound to the smallest cached cost on the path to the root.
pub fn mu_refresh_for_x(tree: &OcTree, current: &[(NodeId, Weight)]) -> Vec<(NodeId, Weight)> {
    let root = tree.root();
    current
        .iter()
        .map(|&(u, m)| (u, tree.path_min(u, root).map_or(m, |p| p.min(m))))
        .collect()
}

/// Output of one round on a supernode.
#[derive(Debug, Clone)]
pub struct Line4 {
    /// The order handed to ordered cuts, source first.
    pub seq: Vec<NodeId>,
    pub tree: OcTree,
    /// Sequence elements whose down-sets are minimum cuts from the source.
    pub certified: Vec<NodeId>,
}

impl Line4 {
    /// The laminar family: one down-set per certified element.
    pub fn family(&self) -> Vec<Vec<NodeId>> {
        self.certified.iter().map(|&u| self.tree.down_set(u).expect("sequence element")).collect()
    }
}

/// One round on graph `h`: sorts `candidates` by `mu` descending, breaking
/// ties by `rank` ascending, and builds and filters the tree of ordered cuts
/// rooted at `s`. `mu` and `rank` are indexed by node of `h`.
pub fn line4(
    h: &Graph,
    s: NodeId,
    candidates: &[NodeId],
    mu: &[Weight],
    rank: &[usize],
    metrics: &mut RunMetrics,
) -> Result<Line4> {
    if candidates.is_empty() {
        return arg_err("no candidates besides the source");
    }
    let mut order = candidates.to_vec();
    order.sort_by_key(|&v| (std::cmp::Reverse(mu[v]), rank[v]));
    let mut seq = Vec::with_capacity(order.len() + 1);
    seq.push(s);
    seq.extend(order);
    let tree = ordered_cuts(h, &seq, metrics)?;
    metrics.ordered_cuts_calls += 1;
    let certified = tree.certified();
    Ok(Line4 { seq, tree, certified })
}

pub fn oc_gomory_hu(g: &Graph) -> Result<CutTreeRun> {
    let start = Instant::now();
    g.require_connected()?;
    let n = g.node_count();
    let check = crate::debug_checks_enabled();
    let mut metrics = RunMetrics { size_g: SizePair::of(g), ..Default::default() };
    let mut tree = PartitionTree::new(n);

    // per vertex; supernodes are disjoint so one table serves all of them
    let (s0, mut mu) = init_mu_for_root(g);
    let mut rank: Vec<usize> = (0..n).collect();
    let mut source = vec![s0];
    let mut rounds = vec![0usize];
    let mut stack = vec![0u32];

    while let Some(x) = stack.pop() {
        rounds[x as usize] += 1;
        if rounds[x as usize] > n {
            return Err(Error::Internal(format!("supernode {x} made no progress in {n} rounds")));
        }
        let aux = auxiliary_graph(g, &tree, x)?;
        let h = &aux.graph;
        let hn = h.node_count();
        metrics.size_h += SizePair::of(h);

        let s_vertex = source[x as usize];
        let mut s = usize::MAX;
        let mut candidates = Vec::with_capacity(aux.vertices.len());
        let mut mu_h = vec![0; hn];
        let mut rank_h = vec![usize::MAX; hn];
        for (i, &v) in aux.vertices.iter().enumerate() {
            if v == s_vertex {
                s = i;
            } else {
                candidates.push(i);
                mu_h[i] = mu[v];
                rank_h[i] = rank[v];
            }
        }
        debug_assert!(s != usize::MAX, "source outside its supernode");
        let round = line4(h, s, &candidates, &mu_h, &rank_h, &mut metrics)?;
        let oc = &round.tree;
        for (i, &u) in round.seq.iter().enumerate() {
            rank[aux.vertices[u]] = i;
        }

        // per sequence index: nearest certified ancestor-or-self, and the
        // path minimum from the element up to (excluding) that ancestor or
        // the root
        let (seq, comp_of, parent, cost) = oc.parts();
        let l = seq.len();
        let mut certified = vec![false; l];
        for &u in &round.certified {
            certified[oc.index_of(u).unwrap()] = true;
        }
        const NONE: usize = usize::MAX;
        let mut owner = vec![NONE; l];
        let mut pmin = vec![Weight::MAX; l];
        for i in 1..l {
            let p = parent[i] as usize;
            owner[i] = if certified[i] { i } else { owner[p] };
            pmin[i] = if p == 0 || certified[p] { cost[i] } else { cost[i].min(pmin[p]) };
        }

        // apply the family innermost first: descendants have larger indices
        let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); l];
        let mut moved: Vec<Vec<u32>> = vec![Vec::new(); l];
        for hx in 0..hn {
            let o = owner[comp_of[hx] as usize];
            if o == NONE {
                continue;
            }
            if hx < aux.vertices.len() {
                members[o].push(hx);
            } else {
                moved[o].push(aux.neighbor_edges[hx - aux.vertices.len()]);
            }
        }
        let mut children = Vec::new();
        for i in (1..l).rev() {
            if !certified[i] {
                continue;
            }
            let v = aux.vertices[seq[i]];
            let local = std::mem::take(&mut members[i]);
            let m: Vec<NodeId> = local.iter().map(|&u| aux.vertices[u]).collect();
            let mv = std::mem::take(&mut moved[i]);
            let (b, e) = tree.split(x, &m, cost[i], &mv);
            debug_assert_eq!(b as usize, source.len());
            source.push(v);
            rounds.push(0);
            for &u in &local {
                if u != seq[i] {
                    mu[aux.vertices[u]] = pmin[oc.index_of(u).unwrap()];
                }
            }
            let lp = owner[parent[i] as usize];
            if lp != NONE {
                moved[lp].push(e);
            }
            if m.len() >= 2 {
                children.push((m.len(), b));
            }
        }
        for i in 1..l {
            if owner[i] == NONE {
                let u = aux.vertices[seq[i]];
                mu[u] = mu[u].min(pmin[i]);
            }
        }
        if check {
            tree.check_edge_costs(g)?;
        }
        let rest = tree.members(x).len();
        if rest >= 2 {
            children.push((rest, x));
        }
        children.sort_by_key(|c| std::cmp::Reverse(c.0));
        stack.extend(children.into_iter().map(|c| c.1));
    }

    let tree = tree.to_cut_tree()?;
    metrics.tree_diameter = tree.diameter();
    metrics.t_total = start.elapsed();
    Ok(CutTreeRun { tree, metrics, terminals: Vec::new() })
}
