//! Classical Gomory-Hu construction over a partition tree, and Gusfield's
//! variant without contraction.

use std::collections::VecDeque;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::maxflow::{FlowState, MinCut};
use crate::metrics::RunMetrics;
use crate::partition::{auxiliary_graph, CutTree, PartitionTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairHeuristic {
    /// Two heaviest vertices of the supernode.
    Heaviest,
    /// Keep one terminal after a split and pick the other near both the
    /// kept terminal and the contracted one.
    Reuse,
}

#[derive(Debug, Clone, Copy)]
pub struct GhOptions {
    pub heuristic: PairHeuristic,
    /// Rebuild every auxiliary graph from the partition tree instead of
    /// contracting the live flow network.
    pub cold_rebuild: bool,
    /// Recompute every tree edge's cut after each split.
    pub check_edges: bool,
}

impl GhOptions {
    pub fn new(heuristic: PairHeuristic) -> Self {
        GhOptions { heuristic, cold_rebuild: false, check_edges: crate::debug_checks_enabled() }
    }
}

/// A finished tree with the work spent on it.
#[derive(Debug, Clone)]
pub struct CutTreeRun {
    pub tree: CutTree,
    pub metrics: RunMetrics,
    /// Source and sink vertex of every minimum cut computed, in order.
    /// Empty for algorithms without vertex pairs.
    pub terminals: Vec<(NodeId, NodeId)>,
}

/// What a node of the current flow network stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Vertex(NodeId),
    /// Contracted tree component behind this partition tree edge.
    Neighbor(u32),
}

#[derive(Debug, Clone, Copy)]
struct Keep {
    /// Terminal kept from the previous split and its role (0 source, 1 sink).
    vertex: NodeId,
    role: usize,
    /// Tree edge whose contracted node holds the other old terminal.
    edge: u32,
}

struct Work {
    x: u32,
    net: Option<(FlowState, Vec<Slot>)>,
    keep: Option<Keep>,
    /// Slots currently holding a nonzero excess.
    terms: Vec<usize>,
}

/// Orders `x` by weighted degree in `g`, heaviest first, ties by lower id,
/// and returns the first two.
pub fn pick_pair_heaviest(g: &Graph, x: &[NodeId]) -> (NodeId, NodeId) {
    assert!(x.len() >= 2, "pair needs two vertices");
    let key = |v: NodeId| (std::cmp::Reverse(g.weighted_degree(v)), v);
    let mut best = [x[0], x[1]];
    if key(best[1]) < key(best[0]) {
        best.swap(0, 1);
    }
    for &v in &x[2..] {
        if key(v) < key(best[0]) {
            best = [v, best[0]];
        } else if key(v) < key(best[1]) {
            best[1] = v;
        }
    }
    (best[0], best[1])
}

/// Breadth-first layers from `from` over the flow network; returns the
/// candidate in the first layer containing one, minimizing `dist` and then
/// vertex id.
fn pick_pair_reuse(
    flow: &FlowState,
    slots: &[Slot],
    from: usize,
    eligible: impl Fn(NodeId) -> bool,
    dist: &[u32],
) -> Option<usize> {
    let mut seen = vec![false; flow.node_slots()];
    seen[from] = true;
    let mut layer = vec![from];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &u in &layer {
            for (q, _) in flow.arcs(u) {
                if !seen[q] {
                    seen[q] = true;
                    next.push(q);
                }
            }
        }
        let best = next
            .iter()
            .filter_map(|&q| match slots[q] {
                Slot::Vertex(v) if eligible(v) => Some((dist[v], v, q)),
                _ => None,
            })
            .min();
        if let Some((_, _, q)) = best {
            return Some(q);
        }
        layer = next;
    }
    None
}

fn bfs_from(flow: &FlowState, root: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; flow.node_slots()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for (q, _) in flow.arcs(u) {
            if dist[q] == u32::MAX {
                dist[q] = dist[u] + 1;
                queue.push_back(q);
            }
        }
    }
    dist
}

pub fn gomory_hu(g: &Graph, heuristic: PairHeuristic) -> Result<CutTreeRun> {
    gomory_hu_with(g, &GhOptions::new(heuristic))
}

pub fn gomory_hu_with(g: &Graph, opts: &GhOptions) -> Result<CutTreeRun> {
    let start = Instant::now();
    g.require_connected()?;
    let n = g.node_count();
    let mut metrics = RunMetrics { size_g: crate::SizePair::of(g), ..Default::default() };
    let mut tree = PartitionTree::new(n);
    // unit distances from the two terminals a supernode started with,
    // indexed by vertex; supernodes are disjoint so one array serves all
    let mut dist = [vec![u32::MAX; n], vec![u32::MAX; n]];
    let mut terminals = Vec::with_capacity(n - 1);

    let net0 = if opts.cold_rebuild {
        None
    } else {
        Some((FlowState::new(g), (0..n).map(Slot::Vertex).collect()))
    };
    let mut stack = vec![Work { x: 0, net: net0, keep: None, terms: Vec::new() }];

    while let Some(mut work) = stack.pop() {
        let (mut flow, mut slots) = match work.net.take() {
            Some(net) => net,
            None => {
                let aux = auxiliary_graph(g, &tree, work.x)?;
                let mut slots: Vec<Slot> = aux.vertices.iter().map(|&v| Slot::Vertex(v)).collect();
                slots.extend(aux.neighbor_edges.iter().map(|&e| Slot::Neighbor(e)));
                work.terms.clear();
                (FlowState::new(&aux.graph), slots)
            }
        };
        let vertex_slots: Vec<usize> =
            (0..slots.len()).filter(|&i| flow.is_alive(i) && matches!(slots[i], Slot::Vertex(_))).collect();
        debug_assert!(vertex_slots.len() >= 2);

        // choose terminals
        let (s, t) = match (opts.heuristic, work.keep) {
            (PairHeuristic::Reuse, Some(keep)) => {
                let kept = *vertex_slots
                    .iter()
                    .find(|&&i| slots[i] == Slot::Vertex(keep.vertex))
                    .ok_or_else(|| Error::Internal("kept terminal lost".into()))?;
                let from = (0..slots.len())
                    .find(|&i| flow.is_alive(i) && slots[i] == Slot::Neighbor(keep.edge))
                    .ok_or_else(|| Error::Internal("contracted terminal lost".into()))?;
                let other = pick_pair_reuse(&flow, &slots, from, |v| v != keep.vertex, &dist[keep.role])
                    .ok_or_else(|| Error::Internal("no eligible terminal".into()))?;
                if keep.role == 0 {
                    (kept, other)
                } else {
                    (other, kept)
                }
            }
            _ => {
                let xs: Vec<NodeId> = vertex_slots
                    .iter()
                    .map(|&i| match slots[i] {
                        Slot::Vertex(v) => v,
                        Slot::Neighbor(_) => unreachable!(),
                    })
                    .collect();
                let (a, b) = pick_pair_heaviest(g, &xs);
                let sa = vertex_slots[xs.iter().position(|&v| v == a).unwrap()];
                let sb = vertex_slots[xs.iter().position(|&v| v == b).unwrap()];
                if opts.heuristic == PairHeuristic::Reuse {
                    for (role, root) in [sa, sb].into_iter().enumerate() {
                        let d = bfs_from(&flow, root);
                        for &i in &vertex_slots {
                            if let Slot::Vertex(v) = slots[i] {
                                dist[role][v] = d[i];
                            }
                        }
                    }
                }
                (sa, sb)
            }
        };

        if let (Slot::Vertex(a), Slot::Vertex(b)) = (slots[s], slots[t]) {
            terminals.push((a, b));
        }
        let inf = flow.sentinel();
        for &i in &work.terms {
            if flow.is_alive(i) && i != s && i != t {
                flow.set_excess(i, 0)?;
            }
        }
        flow.set_excess(s, inf)?;
        flow.set_excess(t, -inf)?;

        let t0 = Instant::now();
        let cut: MinCut = flow.solve();
        metrics.t_mf += t0.elapsed();
        metrics.maxflow_calls += 1;
        metrics.size_mf += cut.size;
        metrics.size_h += cut.size;

        // enumerated side E; membership of everything else via the flow
        let mut in_e = vec![false; slots.len()];
        for &i in &cut.side {
            in_e[i] = true;
        }
        let in_source = |i: usize| in_e[i] == cut.side_is_source;
        let mut b_members = Vec::new();
        let mut a_count = 0usize;
        for &i in &vertex_slots {
            if let Slot::Vertex(v) = slots[i] {
                if in_source(i) {
                    b_members.push(v);
                } else {
                    a_count += 1;
                }
            }
        }
        let mut moved = Vec::new();
        for i in 0..slots.len() {
            if let Slot::Neighbor(e) = slots[i] {
                if flow.is_alive(i) && in_source(i) {
                    moved.push(e);
                }
            }
        }
        debug_assert!(!b_members.is_empty() && a_count > 0);
        let (b, new_edge) = tree.split(work.x, &b_members, cut.value, &moved);
        if opts.check_edges {
            tree.check_edge_costs(g)?;
        }
        let (e_super, rest_super) = if cut.side_is_source { (b, work.x) } else { (work.x, b) };
        let e_vertices = if cut.side_is_source { b_members.len() } else { a_count };
        let rest_vertices = vertex_slots.len() - e_vertices;

        // GH_r keeps a terminal of the larger part, A on ties
        let a_larger = a_count >= b_members.len();
        let keep_for = |source_part: bool| -> Option<Keep> {
            if opts.heuristic != PairHeuristic::Reuse || source_part == a_larger {
                return None;
            }
            // the kept terminal is the one inside this part
            let (vertex, role) = if source_part { (s, 0) } else { (t, 1) };
            let Slot::Vertex(vertex) = slots[vertex] else { unreachable!() };
            Some(Keep { vertex, role, edge: new_edge })
        };
        let e_keep = keep_for(cut.side_is_source);
        let rest_keep = keep_for(!cut.side_is_source);

        let (e_net, rest_net) = if opts.cold_rebuild {
            (None, None)
        } else {
            // E is rebuilt from its own arcs plus one node for the rest
            let mut index = vec![u32::MAX; slots.len()];
            for (k, &i) in cut.side.iter().enumerate() {
                index[i] = k as u32;
            }
            let out = cut.side.len();
            let mut edges = Vec::new();
            for &i in &cut.side {
                for (q, w) in flow.arcs(i) {
                    if in_e[q] {
                        if i < q {
                            edges.push((index[i] as usize, index[q] as usize, w));
                        }
                    } else {
                        edges.push((index[i] as usize, out, w));
                    }
                }
            }
            let mut e_slots: Vec<Slot> = cut.side.iter().map(|&i| slots[i]).collect();
            e_slots.push(Slot::Neighbor(new_edge));
            let e_graph = Graph::from_edges(out + 1, edges)?;
            let e_net = (FlowState::new(&e_graph), e_slots);

            let rep = cut.side[0];
            flow.contract_nodes(&cut.side, rep)?;
            slots[rep] = Slot::Neighbor(new_edge);
            flow.set_excess(rep, 0)?;
            (Some(e_net), Some((flow, slots)))
        };
        let kept_term = if cut.side_is_source { t } else { s };
        let e_work = Work { x: e_super, net: e_net, keep: e_keep, terms: Vec::new() };
        let rest_work = Work { x: rest_super, net: rest_net, keep: rest_keep, terms: vec![kept_term] };

        let mut children = [(e_vertices, e_work), (rest_vertices, rest_work)];
        // larger first on the stack so the smaller part is processed next
        children.sort_by_key(|c| std::cmp::Reverse(c.0));
        for (count, w) in children {
            if count >= 2 {
                stack.push(w);
            }
        }
    }

    let tree = tree.to_cut_tree()?;
    metrics.tree_diameter = tree.diameter();
    metrics.t_total = start.elapsed();
    Ok(CutTreeRun { tree, metrics, terminals })
}

/// Gusfield's algorithm: `n - 1` minimum cuts on the uncontracted graph.
pub fn gusfield(g: &Graph) -> Result<CutTreeRun> {
    let start = Instant::now();
    g.require_connected()?;
    let n = g.node_count();
    let mut metrics = RunMetrics { size_g: crate::SizePair::of(g), ..Default::default() };
    let mut parent = vec![0usize; n];
    let mut weight = vec![0u64; n];
    let mut flow = FlowState::new(g);
    let inf = flow.sentinel();
    let mut prev: Option<(usize, usize)> = None;
    let mut terminals = Vec::with_capacity(n - 1);
    for s in 1..n {
        let t = parent[s];
        if let Some((a, b)) = prev {
            flow.set_excess(a, 0)?;
            flow.set_excess(b, 0)?;
        }
        flow.set_excess(s, inf)?;
        flow.set_excess(t, -inf)?;
        prev = Some((s, t));
        terminals.push((s, t));
        let t0 = Instant::now();
        let cut = flow.solve();
        metrics.t_mf += t0.elapsed();
        metrics.maxflow_calls += 1;
        metrics.size_mf += cut.size;
        metrics.size_h += cut.size;
        let mut on_s = vec![!cut.side_is_source; n];
        for &v in &cut.side {
            on_s[v] = cut.side_is_source;
        }
        for i in 0..n {
            if i != s && on_s[i] && parent[i] == t {
                parent[i] = s;
            }
        }
        if on_s[parent[t]] {
            parent[s] = parent[t];
            parent[t] = s;
            weight[s] = weight[t];
            weight[t] = cut.value;
        } else {
            weight[s] = cut.value;
        }
    }
    let edges: Vec<_> = (1..n).map(|v| (v, parent[v], weight[v])).collect();
    let tree = CutTree::from_edges(n, &edges)?;
    metrics.tree_diameter = tree.diameter();
    metrics.t_total = start.elapsed();
    Ok(CutTreeRun { tree, metrics, terminals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_tree_is_the_path() {
        let g = Graph::from_edges(5, [(0, 1, 4), (1, 2, 2), (2, 3, 7), (3, 4, 1)]).unwrap();
        for h in [PairHeuristic::Heaviest, PairHeuristic::Reuse] {
            let run = gomory_hu(&g, h).unwrap();
            let mut got: Vec<_> = run
                .tree
                .edges()
                .into_iter()
                .map(|(c, p, w)| (c.min(p), c.max(p), w))
                .collect();
            got.sort();
            assert_eq!(got, vec![(0, 1, 4), (1, 2, 2), (2, 3, 7), (3, 4, 1)]);
            assert_eq!(run.metrics.maxflow_calls, 4);
            assert_eq!(run.metrics.size_h, run.metrics.size_mf);
        }
    }

    #[test]
    fn heaviest_pair_rules() {
        let star = Graph::from_edges(5, (1..5).map(|i| (0, i, 1))).unwrap();
        assert_eq!(pick_pair_heaviest(&star, &[1, 2, 0, 3, 4]), (0, 1));
        let g = Graph::from_edges(3, [(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        assert_eq!(pick_pair_heaviest(&g, &[2, 1, 0]), (0, 1));
    }

    #[test]
    fn reuse_picks_neighbor_of_contracted_sink_on_path() {
        // unit path of 6: heaviest pair is (1, 2) and the cut is edge 1-2.
        // Sink 2 survives in the larger part {2..5}; the contracted old
        // source is adjacent only to 2, so the next layer gives source 3.
        let g = Graph::from_edges(6, (0..5).map(|i| (i, i + 1, 1))).unwrap();
        let run = gomory_hu(&g, PairHeuristic::Reuse).unwrap();
        assert_eq!(run.metrics.maxflow_calls, 5);
        assert_eq!(run.terminals[0], (1, 2));
        // the smaller part {0, 1} goes first and restarts from scratch
        assert_eq!(run.terminals[1], (1, 0));
        assert_eq!(run.terminals[2], (3, 2));
        assert_eq!(gomory_hu(&g, PairHeuristic::Heaviest).unwrap().terminals[0], (1, 2));
        assert_eq!(run.tree.all_pairs(), gomory_hu(&g, PairHeuristic::Heaviest).unwrap().tree.all_pairs());
    }

    #[test]
    fn gusfield_small_cases() {
        let g = Graph::from_edges(2, [(0, 1, 9)]).unwrap();
        let run = gusfield(&g).unwrap();
        assert_eq!(run.tree.edges(), vec![(1, 0, 9)]);
        let c4 = Graph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)]).unwrap();
        let f = gusfield(&c4).unwrap().tree.all_pairs();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert_eq!(f[u][v], 2);
                }
            }
        }
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = Graph::from_edges(4, [(0, 1, 1), (2, 3, 1)]).unwrap();
        assert_eq!(gomory_hu(&g, PairHeuristic::Heaviest).unwrap_err(), Error::Disconnected);
        assert_eq!(gusfield(&g).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn cold_rebuild_agrees_with_warm() {
        let g = Graph::from_edges(
            6,
            [(0, 1, 3), (1, 2, 5), (2, 0, 1), (2, 3, 2), (3, 4, 4), (4, 5, 6), (5, 3, 2), (1, 4, 1)],
        )
        .unwrap();
        for h in [PairHeuristic::Heaviest, PairHeuristic::Reuse] {
            let warm = gomory_hu(&g, h).unwrap();
            let opts = GhOptions { heuristic: h, cold_rebuild: true, check_edges: true };
            let cold = gomory_hu_with(&g, &opts).unwrap();
            assert_eq!(warm.tree.all_pairs(), cold.tree.all_pairs());
            cold.tree.check_fundamental_cuts(&g).unwrap();
        }
    }

    #[test]
    fn warm_solves_after_contraction_terminate() {
        // used to build a cyclic search tree from stale distance stamps
        let spec: crate::GenSpec = "tree_like:n=20,k=1,w=1..50,seed=32".parse().unwrap();
        let g = crate::generate(&spec).unwrap().graph;
        let truth = crate::oracle::all_pairs_min_cut(&g, crate::oracle::OracleMode::MaxFlow).unwrap();
        for h in [PairHeuristic::Heaviest, PairHeuristic::Reuse] {
            let run = gomory_hu(&g, h).unwrap();
            assert!(crate::oracle::check_cut_tree(&run.tree, &truth).unwrap().is_empty());
        }
    }
}
