//! Deterministic synthetic instance families.
//!
//! A spec string names a family and its parameters, e.g.
//! `cycle:n=4196,w=1..1000,seed=7` or `random_gnm:n=1000,d=50,c=2,p=10`.
//!
//! | key    | meaning                                                  | default   |
//! |--------|----------------------------------------------------------|-----------|
//! | `n`    | node count (required)                                    |           |
//! | `w`    | edge weight range `lo..hi`, inclusive                    | `1..100`  |
//! | `seed` | RNG seed                                                 | `1`       |
//! | `k`    | chords per node (path_like, tree_like), neighbors per point (knn_points) | 0 / 0 / 2 |
//! | `d`    | chord span (path_like) or edge density in percent (random_gnm) | 3 / 50 |
//! | `m`    | edge count (random_gnm, overrides `d`)                   |           |
//! | `c`    | planted communities (random_gnm)                         | `1`       |
//! | `p`    | weight cap of chords and inter-community edges           | family    |

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{arg_err, Error, Result};
use crate::graph::{Graph, NodeId, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Cycle,
    /// Cycle plus chords `i - (i + 2)`.
    DoubleCycle,
    /// Hub joined to every node of a cycle.
    Wheel,
    /// Weighted path plus short random chords.
    PathLike,
    /// Random recursive tree plus random extra edges.
    TreeLike,
    /// Fixed edge count, uniform pairs, optional planted communities.
    RandomGnm,
    /// The `k n` closest pairs of uniform random points in the plane.
    KnnPoints,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Cycle,
        Family::DoubleCycle,
        Family::Wheel,
        Family::PathLike,
        Family::TreeLike,
        Family::RandomGnm,
        Family::KnnPoints,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::DoubleCycle => "double_cycle",
            Family::Wheel => "wheel",
            Family::PathLike => "path_like",
            Family::TreeLike => "tree_like",
            Family::RandomGnm => "random_gnm",
            Family::KnnPoints => "knn_points",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub w: (Weight, Weight),
    pub seed: u64,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub c: Option<usize>,
    pub p: Option<Weight>,
}

impl GenSpec {
    pub fn new(family: Family, n: usize) -> GenSpec {
        GenSpec { family, n, w: (1, 100), seed: 1, k: None, d: None, m: None, c: None, p: None }
    }

    pub fn weights(mut self, lo: Weight, hi: Weight) -> GenSpec {
        self.w = (lo, hi);
        self
    }

    pub fn seed(mut self, seed: u64) -> GenSpec {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.w;
        if lo == 0 || lo > hi {
            return arg_err(format!("weight range {lo}..{hi} must be positive and nonempty"));
        }
        if self.p == Some(0) {
            return arg_err("weight cap p must be positive");
        }
        let min_n = match self.family {
            Family::Cycle | Family::DoubleCycle => 3,
            Family::Wheel => 4,
            _ => 2,
        };
        if self.n < min_n {
            return arg_err(format!("{} needs n >= {min_n}, got {}", self.family.name(), self.n));
        }
        if self.n > u32::MAX as usize / 2 {
            return arg_err("n too large");
        }
        Ok(())
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:n={},w={}..{},seed={}", self.family.name(), self.n, self.w.0, self.w.1, self.seed)?;
        for (key, val) in [("k", self.k), ("d", self.d), ("m", self.m), ("c", self.c)] {
            if let Some(v) = val {
                write!(f, ",{key}={v}")?;
            }
        }
        if let Some(p) = self.p {
            write!(f, ",p={p}")?;
        }
        Ok(())
    }
}

impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenSpec> {
        let (fam, rest) = s.split_once(':').unwrap_or((s, ""));
        let family: Family = fam.trim().parse()?;
        let mut spec = GenSpec::new(family, 0);
        let mut have_n = false;
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, val) =
                item.split_once('=').ok_or_else(|| Error::Argument(format!("expected key=value, got {item:?}")))?;
            let num = |v: &str| -> Result<u64> {
                v.trim().parse().map_err(|_| Error::Argument(format!("bad number {v:?} for {key}")))
            };
            match key.trim() {
                "n" => {
                    spec.n = num(val)? as usize;
                    have_n = true;
                }
                "w" => {
                    spec.w = match val.split_once("..") {
                        Some((a, b)) => (num(a)?, num(b)?),
                        None => (num(val)?, num(val)?),
                    }
                }
                "seed" => spec.seed = num(val)?,
                "k" => spec.k = Some(num(val)? as usize),
                "d" => spec.d = Some(num(val)? as usize),
                "m" => spec.m = Some(num(val)? as usize),
                "c" => spec.c = Some(num(val)? as usize),
                "p" => spec.p = Some(num(val)?),
                other => return arg_err(format!("unknown parameter {other:?}")),
            }
        }
        if !have_n {
            return arg_err("missing n");
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// A generated instance.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// Edges emitted before parallel edges were merged and before
    /// connectivity repair.
    pub candidate_edges: usize,
    /// True when weight-1 edges were added to connect the output.
    pub augmented: bool,
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let (lo, hi) = spec.w;
    let w = |rng: &mut ChaCha8Rng| rng.gen_range(lo..=hi);
    let mut edges: Vec<(NodeId, NodeId, Weight)> = Vec::new();
    match spec.family {
        Family::Cycle => {
            edges.extend((0..n).map(|i| (i, (i + 1) % n, w(&mut rng))));
        }
        Family::DoubleCycle => {
            edges.extend((0..n).map(|i| (i, (i + 1) % n, w(&mut rng))));
            edges.extend((0..n).map(|i| (i, (i + 2) % n, w(&mut rng))));
        }
        Family::Wheel => {
            let rim = n - 1;
            for i in 0..rim {
                edges.push((1 + i, 1 + (i + 1) % rim, w(&mut rng)));
            }
            for i in 0..rim {
                edges.push((0, 1 + i, w(&mut rng)));
            }
        }
        Family::PathLike => {
            edges.extend((0..n - 1).map(|i| (i, i + 1, w(&mut rng))));
            let span = spec.d.unwrap_or(3).max(2);
            let cap = spec.p.unwrap_or(lo);
            for i in 0..n {
                for _ in 0..spec.k.unwrap_or(0) {
                    let j = i + rng.gen_range(2..=span);
                    if j < n {
                        edges.push((i, j, rng.gen_range(1..=cap)));
                    }
                }
            }
        }
        Family::TreeLike => {
            for v in 1..n {
                let u = rng.gen_range(0..v);
                edges.push((u, v, w(&mut rng)));
            }
            let cap = spec.p.unwrap_or(hi);
            for _ in 0..spec.k.unwrap_or(0) * n {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                if u != v {
                    edges.push((u, v, rng.gen_range(1..=cap)));
                }
            }
        }
        Family::RandomGnm => {
            let total = n * (n - 1) / 2;
            let m = match (spec.m, spec.d) {
                (Some(m), _) => m,
                (None, d) => {
                    let d = d.unwrap_or(50);
                    if d > 100 {
                        return arg_err(format!("density {d}% exceeds 100"));
                    }
                    (total * d + 50) / 100
                }
            };
            if m < n - 1 {
                return arg_err(format!("m = {m} < n - 1 = {} cannot be connected", n - 1));
            }
            if m > total {
                return arg_err(format!("m = {m} exceeds the {total} node pairs"));
            }
            let c = spec.c.unwrap_or(1);
            if c == 0 || c > n {
                return arg_err(format!("community count {c} not in 1..={n}"));
            }
            let cap = spec.p.unwrap_or(hi);
            // row offsets for decoding a pair index
            let start: Vec<usize> = (0..n).scan(0, |acc, u| {
                let s = *acc;
                *acc += n - 1 - u;
                Some(s)
            }).collect();
            let mut picked = sample(&mut rng, total, m).into_vec();
            picked.sort_unstable();
            for idx in picked {
                let u = start.partition_point(|&s| s <= idx) - 1;
                let v = u + 1 + (idx - start[u]);
                let wt = if u % c == v % c { w(&mut rng) } else { rng.gen_range(1..=cap) };
                edges.push((u, v, wt));
            }
        }
        Family::KnnPoints => {
            let k = spec.k.unwrap_or(2);
            let total = n * (n - 1) / 2;
            let want = k * n;
            if want < n - 1 {
                return arg_err(format!("k n = {want} < n - 1 cannot be connected"));
            }
            if want > total {
                return arg_err(format!("k n = {want} exceeds the {total} point pairs"));
            }
            let scale = hi as f64;
            let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>() * scale, rng.gen::<f64>() * scale)).collect();
            let pairs = closest_pairs(&pts, want);
            edges.extend(pairs.into_iter().map(|(d, u, v)| (u, v, (d.round() as Weight).max(lo))));
        }
    }
    let candidate_edges = edges.len();
    let augmented = connect_components(n, &mut edges);
    let graph = Graph::from_edges(n, edges)?;
    Ok(Generated { graph, candidate_edges, augmented })
}

/// The `count` closest point pairs `(u, v, distance)` with `u < v`, sorted
/// by distance, ties by pair.
pub fn closest_pairs(points: &[(f64, f64)], count: usize) -> Vec<(f64, NodeId, NodeId)> {
    let n = points.len();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            let (dx, dy) = (points[u].0 - points[v].0, points[u].1 - points[v].1);
            pairs.push((dx.hypot(dy), u, v));
        }
    }
    let by_dist =
        |a: &(f64, usize, usize), b: &(f64, usize, usize)| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2)));
    if count < pairs.len() {
        pairs.select_nth_unstable_by(count, by_dist);
        pairs.truncate(count);
    }
    pairs.sort_unstable_by(by_dist);
    pairs
}

/// Adds weight-1 edges linking consecutive components (by lowest member).
/// Returns whether anything was added.
fn connect_components(n: usize, edges: &mut Vec<(NodeId, NodeId, Weight)>) -> bool {
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for &(u, v, _) in edges.iter() {
        let (a, b) = (find(&mut root, u), find(&mut root, v));
        if a != b {
            root[a.max(b)] = a.min(b);
        }
    }
    let reps: Vec<usize> = (0..n).filter(|&v| find(&mut root, v) == v).collect();
    for pair in reps.windows(2) {
        edges.push((pair[0], pair[1], 1));
    }
    reps.len() > 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(s: &str) -> Generated {
        generate(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn cycle_five() {
        let g = gen("cycle:n=5,w=1..1").graph;
        assert_eq!((g.node_count(), g.edge_count()), (5, 5));
        assert!((0..5).all(|v| g.degree(v) == 2 && g.weighted_degree(v) == 2));
    }

    #[test]
    fn wheel_five() {
        let g = gen("wheel:n=5").graph;
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.degree(0), 4);
        assert!((1..5).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn double_cycle_degrees() {
        let g = gen("double_cycle:n=10,seed=3").graph;
        assert_eq!(g.edge_count(), 20);
        assert!((0..10).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn spec_round_trip() {
        let s: GenSpec = "random_gnm:n=30,w=2..9,seed=4,d=20,c=3,p=5".parse().unwrap();
        assert_eq!(s.to_string().parse::<GenSpec>().unwrap(), s);
        assert_eq!(s.to_string(), "random_gnm:n=30,w=2..9,seed=4,d=20,c=3,p=5");
    }

    #[test]
    fn bad_specs() {
        for s in [
            "cycle",
            "cycle:n=2",
            "wheel:n=3",
            "blob:n=5",
            "cycle:n=5,w=0..3",
            "cycle:n=5,w=5..3",
            "cycle:n=5,x=1",
            "random_gnm:n=10,m=8",
            "random_gnm:n=10,m=46",
            "knn_points:n=3,k=4",
        ] {
            let r = s.parse::<GenSpec>().and_then(|g| generate(&g));
            assert!(matches!(r, Err(Error::Argument(_))), "{s}");
        }
    }

    #[test]
    fn outputs_connected_and_deterministic() {
        for s in [
            "cycle:n=40,seed=2",
            "double_cycle:n=40",
            "wheel:n=40",
            "path_like:n=40,k=2",
            "tree_like:n=40,k=1",
            "random_gnm:n=40,d=5,c=4,p=3",
            "random_gnm:n=40,m=39",
            "knn_points:n=40,k=2",
        ] {
            let a = gen(s);
            let b = gen(s);
            assert!(a.graph.is_connected(), "{s}");
            assert_eq!(a.graph.edges(), b.graph.edges());
        }
    }

    #[test]
    fn gnm_exact_edge_count() {
        let g = gen("random_gnm:n=50,m=300,seed=8");
        assert_eq!(g.candidate_edges, 300);
        if !g.augmented {
            assert_eq!(g.graph.edge_count(), 300);
        }
    }
}
