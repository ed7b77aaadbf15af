use std::ops::AddAssign;
use std::time::Duration;

/// Node and edge counts of a graph, or sums of them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizePair {
    pub nodes: u64,
    pub edges: u64,
}

impl SizePair {
    pub fn of(g: &crate::Graph) -> SizePair {
        SizePair { nodes: g.node_count() as u64, edges: g.edge_count() as u64 }
    }

    /// Componentwise ratio `self / base`.
    pub fn ratio(&self, base: &SizePair) -> (f64, f64) {
        (self.nodes as f64 / base.nodes.max(1) as f64, self.edges as f64 / base.edges.max(1) as f64)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &SizePair) -> bool {
        self.nodes <= other.nodes && self.edges <= other.edges
    }
}

impl AddAssign for SizePair {
    fn add_assign(&mut self, rhs: SizePair) {
        self.nodes += rhs.nodes;
        self.edges += rhs.edges;
    }
}

/// Work counters of one cut tree computation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub size_g: SizePair,
    pub size_h: SizePair,
    pub size_mf: SizePair,
    pub maxflow_calls: u64,
    pub ordered_cuts_calls: u64,
    pub tree_diameter: usize,
    pub t_total: Duration,
    pub t_mf: Duration,
}
