//! Gomory-Hu cut trees of undirected weighted graphs.
//!
//! Two families of algorithms are provided: the classical contraction
//! algorithm ([`gomory_hu`], [`gusfield`]) and the generalized algorithm
//! driven by ordered cuts ([`oc_gomory_hu`]). Both run on a warm-startable
//! minimum cut engine ([`FlowState`]).

pub mod dimacs;
pub mod error;
pub mod generators;
pub mod gh;
pub mod graph;
pub mod maxflow;
pub mod metrics;
pub mod oc;
pub mod oc_tree;
pub mod oracle;
pub mod ordered_cuts;
pub mod partition;

pub use error::{Error, Result};
pub use generators::{generate, Family, GenSpec, Generated};
pub use gh::{gomory_hu, gomory_hu_with, gusfield, CutTreeRun, GhOptions, PairHeuristic};
pub use graph::{Edge, Graph, NodeId, Weight};
pub use maxflow::{CutSides, FlowState, MinCut};
pub use metrics::{RunMetrics, SizePair};
pub use oc::{line4, oc_gomory_hu, Line4};
pub use oc_tree::{is_laminar, OcTree};
pub use ordered_cuts::{choose_k, multi_sink_min_cut, ordered_cuts, update_kbar, MultiCut};
pub use partition::{auxiliary_graph, AuxGraph, CutTree, PartitionTree, TreeEdge};

/// True when `CUTTREE_DEBUG_CHECKS=1` is set. Enables expensive invariant
/// checks inside the algorithms.
pub fn debug_checks_enabled() -> bool {
    use std::sync::OnceLock;
    static FLAG: OnceLock<bool> = OnceLock::new();
    *FLAG.get_or_init(|| std::env::var("CUTTREE_DEBUG_CHECKS").is_ok_and(|v| v == "1"))
}
