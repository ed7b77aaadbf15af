//! Divide and conquer construction of a tree of ordered cuts.
//!
//! A call on `(s v1 .. vl, G)` computes a minimum cut `(S, T)` between `s`
//! and the first `k` sequence elements, then recurses on `G` with `T`
//! contracted into `s` and on the `T` side with `S` contracted into `v1`
//! (when `k = 1`) or into `s` (when `k > 1`). The split index adapts to how
//! balanced the previous cut was.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigUint;

use crate::error::{arg_err, Result};
use crate::graph::{Graph, NodeId, Weight};
use crate::maxflow::FlowState;
use crate::metrics::{RunMetrics, SizePair};
use crate::oc_tree::OcTree;

/// `max(1, min(ell / 2, kbar))`.
pub fn choose_k(ell: usize, kbar: usize) -> usize {
    (ell / 2).min(kbar).max(1)
}

/// Compares `k * 2^(a/d)` with `m / 2` exactly.
fn cmp_with_half(k: usize, a: i64, d: u64, m: u64) -> Ordering {
    // k 2^(a/d) vs m/2  <=>  (2k)^d 2^a vs m^d
    let d = d as u32;
    let mut lhs = BigUint::from(2 * k as u64).pow(d);
    let mut rhs = BigUint::from(m).pow(d);
    if a >= 0 {
        lhs <<= a as usize;
    } else {
        rhs <<= (-a) as usize;
    }
    lhs.cmp(&rhs)
}

/// `round(k * 2^(1 - 2 t / (v - 1)))` rounding halves down, clamped to
/// `[k / 2, 2k]`.
pub fn update_kbar(k: usize, t_size: usize, v_count: usize) -> usize {
    assert!(k >= 1 && t_size >= 1 && t_size < v_count, "update_kbar({k}, {t_size}, {v_count})");
    let d = (v_count - 1) as i64;
    let a = d - 2 * t_size as i64;
    let r = if a == -d {
        k / 2
    } else if a == 0 {
        k
    } else {
        // irrational result: never exactly on a half; refine with exact
        // arithmetic only when the float lands close to one
        let x = k as f64 * (a as f64 / d as f64).exp2();
        let mut r = (x - 0.5).ceil().max(0.0) as u64;
        let near = |h: f64| (x - h).abs() < 1e-6 * x.max(1.0);
        if near(r as f64 - 0.5) || near(r as f64 + 0.5) {
            while r > 0 && cmp_with_half(k, a, d as u64, 2 * r - 1) != Ordering::Greater {
                r -= 1;
            }
            while cmp_with_half(k, a, d as u64, 2 * r + 1) == Ordering::Greater {
                r += 1;
            }
        }
        r as usize
    };
    r.clamp(k / 2, 2 * k)
}

/// Result of a cut between one source and a set of sinks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiCut {
    pub source_side: Vec<NodeId>,
    pub sink_side: Vec<NodeId>,
    pub value: Weight,
    pub size: SizePair,
}

/// Minimum cut separating `source` from every node of `sinks`.
pub fn multi_sink_min_cut(g: &Graph, source: NodeId, sinks: &[NodeId]) -> Result<MultiCut> {
    let n = g.node_count();
    if source >= n || sinks.iter().any(|&t| t >= n) {
        return arg_err("terminal out of range");
    }
    if sinks.is_empty() {
        return arg_err("no sinks");
    }
    if sinks.contains(&source) {
        return arg_err("source listed among the sinks");
    }
    let mut flow = FlowState::new(g);
    let inf = flow.sentinel();
    flow.set_excess(source, inf)?;
    for &t in sinks {
        flow.set_excess(t, -inf)?;
    }
    let cut = flow.solve();
    let sides = flow.extract_min_cut_sides()?;
    Ok(MultiCut { source_side: sides.source_side, sink_side: sides.sink_side, value: cut.value, size: cut.size })
}

/// One maxflow step of a run, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OcStep {
    pub depth: usize,
    pub ell: usize,
    pub k: usize,
    pub kbar_in: usize,
    pub kbar_out: usize,
    pub s_size: usize,
    pub t_size: usize,
    pub value: Weight,
}

struct Call {
    /// Node labels are ids of the top-level graph.
    graph: Graph,
    /// Local node ids; the first is the source.
    seq: Vec<NodeId>,
    kbar: usize,
    depth: usize,
}

/// Builds a tree of ordered cuts for `seq` over the nodes of `g`.
/// Maxflow work is added to `metrics`.
pub fn ordered_cuts(g: &Graph, seq: &[NodeId], metrics: &mut RunMetrics) -> Result<OcTree> {
    ordered_cuts_traced(g, seq, metrics, None)
}

pub fn ordered_cuts_traced(
    g: &Graph,
    seq: &[NodeId],
    metrics: &mut RunMetrics,
    mut trace: Option<&mut Vec<OcStep>>,
) -> Result<OcTree> {
    let n = g.node_count();
    if seq.is_empty() {
        return arg_err("empty sequence");
    }
    let mut seen = vec![false; n];
    for &v in seq {
        if v >= n {
            return arg_err(format!("sequence node {v} not in graph"));
        }
        if seen[v] {
            return arg_err(format!("sequence node {v} repeated"));
        }
        seen[v] = true;
    }
    const UNSET: u32 = u32::MAX;
    // keyed by top-level id
    let mut owner = vec![UNSET; n];
    let mut parent = vec![UNSET; n];
    let mut cost = vec![0 as Weight; n];

    let ident: Vec<u32> = (0..n as u32).collect();
    let top = g.quotient(&ident, ident.clone());
    let mut stack = vec![Call { graph: top, seq: seq.to_vec(), kbar: 1, depth: 0 }];

    while let Some(call) = stack.pop() {
        let h = &call.graph;
        let s = call.seq[0];
        let ell = call.seq.len() - 1;
        if ell == 0 {
            let name = h.label(s);
            for x in 0..h.node_count() {
                owner[h.label(x) as usize] = name;
            }
            continue;
        }
        let k = choose_k(ell, call.kbar);
        let t0 = Instant::now();
        let cut = multi_sink_min_cut(h, s, &call.seq[1..=k])?;
        metrics.t_mf += t0.elapsed();
        metrics.maxflow_calls += 1;
        metrics.size_mf += cut.size;
        let (ss, ts) = (cut.source_side.len(), cut.sink_side.len());
        let kbar = update_kbar(k, ts, h.node_count());
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(OcStep {
                depth: call.depth,
                ell,
                k,
                kbar_in: call.kbar,
                kbar_out: kbar,
                s_size: ss,
                t_size: ts,
                value: cut.value,
            });
        }

        let mut in_s = vec![false; h.node_count()];
        for &x in &cut.source_side {
            in_s[x] = true;
        }
        let v1 = call.seq[1];

        // source child: T contracted into s
        let (s_graph, s_class) = contract_into(h, |x| in_s[x], s);
        let s_seq: Vec<NodeId> =
            call.seq.iter().filter(|&&x| in_s[x]).map(|&x| s_class[x] as usize).collect();

        // sink child: S contracted into v1 (k = 1) or into s (k > 1)
        let t_child = if k == 1 {
            let name_v = h.label(v1);
            parent[name_v as usize] = h.label(s);
            cost[name_v as usize] = cut.value;
            let (t_graph, t_class) = contract_into(h, |x| !in_s[x], v1);
            let t_seq = call.seq.iter().filter(|&&x| !in_s[x]).map(|&x| t_class[x] as usize).collect();
            Call { graph: t_graph, seq: t_seq, kbar, depth: call.depth + 1 }
        } else {
            let (t_graph, t_class) = contract_into(h, |x| !in_s[x] || x == s, s);
            let t_seq =
                call.seq.iter().filter(|&&x| !in_s[x] || x == s).map(|&x| t_class[x] as usize).collect();
            Call { graph: t_graph, seq: t_seq, kbar, depth: call.depth + 1 }
        };
        stack.push(t_child);
        stack.push(Call { graph: s_graph, seq: s_seq, kbar, depth: call.depth + 1 });
    }

    let index: Vec<u32> = {
        let mut idx = vec![UNSET; n];
        for (i, &v) in seq.iter().enumerate() {
            idx[v] = i as u32;
        }
        idx
    };
    let comp_of: Vec<u32> = owner.iter().map(|&o| index[o as usize]).collect();
    let par: Vec<u32> = seq.iter().map(|&v| if parent[v] == UNSET { UNSET } else { index[parent[v] as usize] }).collect();
    let cst: Vec<Weight> = seq.iter().map(|&v| cost[v]).collect();
    OcTree::from_parts(seq.to_vec(), comp_of, par, cst)
}

/// Keeps the nodes with `keep(x)` and merges all others into `rep`, which
/// must be kept. Returns the new graph (labels carried over) and the old to
/// new node map.
fn contract_into(h: &Graph, keep: impl Fn(NodeId) -> bool, rep: NodeId) -> (Graph, Vec<u32>) {
    debug_assert!(keep(rep));
    let n = h.node_count();
    let mut class = vec![u32::MAX; n];
    let mut labels = Vec::new();
    for x in 0..n {
        if keep(x) {
            class[x] = labels.len() as u32;
            labels.push(h.label(x));
        }
    }
    let r = class[rep];
    for c in class.iter_mut() {
        if *c == u32::MAX {
            *c = r;
        }
    }
    (h.quotient(&class, labels), class)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_k_cases() {
        assert_eq!(choose_k(1, 7), 1);
        assert_eq!(choose_k(10, 3), 3);
        assert_eq!(choose_k(10, 100), 5);
        assert_eq!(choose_k(10, 0), 1);
    }

    #[test]
    fn kbar_exact_cases() {
        for k in 1..40 {
            for v in 2..40 {
                assert_eq!(update_kbar(k, v - 1, v), k / 2);
            }
            assert_eq!(update_kbar(k, 5, 11), k);
        }
        assert_eq!(update_kbar(4, 1, 11), 7);
        assert_eq!(update_kbar(1, 1, 3), 1);
    }

    #[test]
    fn kbar_stays_in_range() {
        for k in 1..30 {
            for v in 2..60 {
                for t in 1..v {
                    let r = update_kbar(k, t, v);
                    assert!(r >= k / 2 && r <= 2 * k, "{k} {t} {v} -> {r}");
                }
            }
        }
    }

    #[test]
    fn base_and_single_edge() {
        let g = Graph::from_edges(2, [(0, 1, 7)]).unwrap();
        let mut m = RunMetrics::default();
        let t = ordered_cuts(&g, &[0], &mut m).unwrap();
        assert_eq!(t.component(0).unwrap(), vec![0, 1]);
        assert_eq!(m.maxflow_calls, 0);

        let t = ordered_cuts(&g, &[0, 1], &mut m).unwrap();
        assert_eq!(t.component(0).unwrap(), vec![0]);
        assert_eq!(t.component(1).unwrap(), vec![1]);
        assert_eq!(t.parent(1), Some(0));
        assert_eq!(t.cost(1), Some(7));
        assert_eq!(m.maxflow_calls, 1);
    }

    #[test]
    fn star_multi_sink() {
        let g = Graph::from_edges(6, (1..6).map(|i| (0, i, 1))).unwrap();
        let c = multi_sink_min_cut(&g, 0, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(c.value, 5);
        assert_eq!(c.source_side, vec![0]);
        assert!(multi_sink_min_cut(&g, 0, &[0]).is_err());
    }

    #[test]
    fn bad_sequences_rejected() {
        let g = Graph::from_edges(2, [(0, 1, 7)]).unwrap();
        let mut m = RunMetrics::default();
        assert!(ordered_cuts(&g, &[], &mut m).is_err());
        assert!(ordered_cuts(&g, &[2], &mut m).is_err());
        assert!(ordered_cuts(&g, &[0, 0], &mut m).is_err());
    }
}
