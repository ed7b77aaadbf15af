#![allow(dead_code)]

use cuttree::oracle::min_cut_source_side;
use cuttree::{FlowState, Graph, NodeId, Weight};
use rand::Rng;

/// Random spanning tree plus random extra edges; `m` edges are drawn in
/// total before parallel edges merge.
pub fn random_connected(rng: &mut impl Rng, n: usize, m: usize, wmax: Weight) -> Graph {
    let mut edges: Vec<(NodeId, NodeId, Weight)> =
        (1..n).map(|v| (rng.gen_range(0..v), v, rng.gen_range(1..=wmax))).collect();
    while edges.len() < m.max(n - 1) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.push((u, v, rng.gen_range(1..=wmax)));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Minimum cut of the flow network `g` with node excesses `demand`: a node
/// of positive excess `d` hangs off a super source with capacity `d`, a node
/// of negative excess off a super sink. Solved by the oracle's own
/// Edmonds-Karp.
pub fn excess_cut_value(g: &Graph, demand: &[i64]) -> Weight {
    let n = g.node_count();
    let (src, snk) = (n, n + 1);
    let mut edges: Vec<(NodeId, NodeId, Weight)> =
        g.edges().iter().map(|e| (e.u as usize, e.v as usize, e.w)).collect();
    for (v, &d) in demand.iter().enumerate() {
        if d > 0 {
            edges.push((src, v, d as Weight));
        } else if d < 0 {
            edges.push((v, snk, (-d) as Weight));
        }
    }
    let h = Graph::from_edges(n + 2, edges).unwrap();
    min_cut_source_side(&h, src, snk).unwrap().0
}

/// The live network of `flow` as a graph with per-node instance excesses.
pub fn snapshot(flow: &FlowState) -> (Graph, Vec<i64>) {
    let (g, slots) = flow.to_graph();
    let demand = slots.iter().map(|&s| flow.excess(s)).collect();
    (g, demand)
}

/// Value of a fresh engine on the same instance.
pub fn cold_value(flow: &FlowState) -> Weight {
    let (g, demand) = snapshot(flow);
    let mut cold = FlowState::new(&g);
    for (v, &d) in demand.iter().enumerate() {
        cold.set_excess(v, d).unwrap();
    }
    cold.max_flow()
}

pub fn alive_nodes(flow: &FlowState) -> Vec<NodeId> {
    (0..flow.node_slots()).filter(|&v| flow.is_alive(v)).collect()
}
