//! Warm-startable minimum cut engine.
//!
//! A two-search-tree augmenting path solver (grow / augment / adopt) over a
//! forward-star residual network. There are no explicit source or sink
//! nodes: every node carries an *excess*, the difference between its source
//! and sink terminal capacities. A node with excess `+c` is joined to the
//! source with capacity `c`, a node with excess `-c` to the sink. Hard
//! terminals use an excess of magnitude [`FlowState::sentinel`].
//!
//! The state survives between solves. Excesses can be changed with
//! [`FlowState::set_terminal_excess`] and node sets merged with
//! [`FlowState::contract_nodes`]; both keep the current flow and search
//! trees, touching only the nodes involved and their incident arcs.
//!
//! Active nodes of the two trees live in separate FIFO queues. Growth always
//! expands from the smaller queue and the solve stops as soon as either queue
//! runs empty: at that point that tree is closed under residual reachability.

use std::collections::VecDeque;

use crate::error::{arg_err, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::metrics::SizePair;

const FREE: u32 = u32::MAX;
const TERMINAL: u32 = u32::MAX - 1;
const ORPHAN: u32 = u32::MAX - 2;
const INF_DIST: u32 = u32::MAX;

const SRC: usize = 0;
const SNK: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tree {
    Free,
    Source,
    Sink,
}

impl Tree {
    fn index(self) -> usize {
        match self {
            Tree::Source => SRC,
            Tree::Sink => SNK,
            Tree::Free => unreachable!("free nodes have no queue"),
        }
    }
}

/// Unordered node set with O(1) insert and remove.
#[derive(Debug, Clone, Default)]
struct NodeList {
    items: Vec<u32>,
    pos: Vec<u32>,
}

impl NodeList {
    fn new(n: usize) -> Self {
        NodeList { items: Vec::new(), pos: vec![u32::MAX; n] }
    }

    fn insert(&mut self, v: usize) {
        if self.pos[v] == u32::MAX {
            self.pos[v] = self.items.len() as u32;
            self.items.push(v as u32);
        }
    }

    fn remove(&mut self, v: usize) {
        let p = self.pos[v];
        if p != u32::MAX {
            let last = self.items.pop().unwrap();
            if last as usize != v {
                self.items[p as usize] = last;
                self.pos[last as usize] = p;
            }
            self.pos[v] = u32::MAX;
        }
    }
}

/// One augmentation: number of arcs on the path and the amount pushed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Augmentation {
    pub path_len: u32,
    pub bottleneck: i64,
}

/// Result of [`FlowState::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: u64,
    /// The side whose residual search finished first, listed explicitly.
    pub side: Vec<NodeId>,
    /// Whether `side` is the source side.
    pub side_is_source: bool,
    /// Alive nodes and edges of the network at solve time.
    pub size: SizePair,
}

/// Source and sink sides of the last solve, both materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSides {
    pub source_side: Vec<NodeId>,
    pub sink_side: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy)]
struct LastCut {
    side_is_source: bool,
    epoch: u32,
}

#[derive(Debug, Clone)]
pub struct FlowState {
    alive: Vec<bool>,
    first: Vec<u32>,
    deg: Vec<u32>,
    /// residual terminal capacity: source residual minus sink residual
    excess: Vec<i64>,
    /// excess of the instance as set by the caller
    demand: Vec<i64>,
    tree: Vec<Tree>,
    parent: Vec<u32>,
    stamp: Vec<u64>,
    dist: Vec<u32>,
    active: Vec<bool>,
    queues: [VecDeque<u32>; 2],
    counts: [usize; 2],
    orphans: VecDeque<u32>,
    plus: NodeList,
    minus: NodeList,

    head: Vec<u32>,
    rev: Vec<u32>,
    res: Vec<i64>,
    cap: Vec<i64>,
    garbage: usize,

    value: i64,
    time: u64,
    alive_nodes: usize,
    alive_edges: usize,
    sentinel: i64,
    solved: bool,

    marks: [Vec<u32>; 2],
    epoch: u32,
    last_cut: Option<LastCut>,

    scratch: Vec<u32>,
    scratch_epoch: u32,
    slot: Vec<u32>,

    trace: Option<Vec<Augmentation>>,
}

impl FlowState {
    /// Builds a fresh state with all excesses zero.
    pub fn new(g: &Graph) -> FlowState {
        let n = g.node_count();
        let arcs = 2 * g.edge_count();
        let mut first = vec![0u32; n];
        let mut deg = vec![0u32; n];
        let mut head = Vec::with_capacity(arcs);
        let mut cap = Vec::with_capacity(arcs);
        let mut rev = vec![0u32; arcs];
        let mut seen = vec![u32::MAX; g.edge_count()];
        for v in 0..n {
            first[v] = head.len() as u32;
            deg[v] = g.degree(v) as u32;
            for a in g.neighbors(v) {
                let idx = head.len() as u32;
                head.push(a.to);
                cap.push(g.weight(a.edge) as i64);
                let e = a.edge as usize;
                if seen[e] == u32::MAX {
                    seen[e] = idx;
                } else {
                    rev[idx as usize] = seen[e];
                    rev[seen[e] as usize] = idx;
                }
            }
        }
        let total: i64 = g.edges().iter().map(|e| e.w as i64).sum();
        FlowState {
            alive: vec![true; n],
            first,
            deg,
            excess: vec![0; n],
            demand: vec![0; n],
            tree: vec![Tree::Free; n],
            parent: vec![FREE; n],
            stamp: vec![0; n],
            dist: vec![0; n],
            active: vec![false; n],
            queues: [VecDeque::new(), VecDeque::new()],
            counts: [0, 0],
            orphans: VecDeque::new(),
            plus: NodeList::new(n),
            minus: NodeList::new(n),
            res: cap.clone(),
            head,
            rev,
            cap,
            garbage: 0,
            value: 0,
            time: 1,
            alive_nodes: n,
            alive_edges: g.edge_count(),
            sentinel: total + 1,
            solved: false,
            marks: [vec![0; n], vec![0; n]],
            epoch: 0,
            last_cut: None,
            scratch: vec![0; n],
            scratch_epoch: 0,
            slot: vec![0; n],
            trace: None,
        }
    }

    /// Number of node slots, alive or not. Node ids are stable across
    /// contractions.
    pub fn node_slots(&self) -> usize {
        self.alive.len()
    }

    pub fn is_alive(&self, v: NodeId) -> bool {
        self.alive[v]
    }

    pub fn size(&self) -> SizePair {
        SizePair { nodes: self.alive_nodes as u64, edges: self.alive_edges as u64 }
    }

    /// An excess at least this large in magnitude pins a node to its side.
    pub fn sentinel(&self) -> i64 {
        self.sentinel
    }

    /// Instance excess of `v`.
    pub fn excess(&self, v: NodeId) -> i64 {
        self.demand[v]
    }

    pub fn positive_excess_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.plus.items.iter().map(|&v| v as usize)
    }

    pub fn negative_excess_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.minus.items.iter().map(|&v| v as usize)
    }

    /// Neighbors of `v` with the original (undirected) capacity of the arc.
    pub fn arcs(&self, v: NodeId) -> impl Iterator<Item = (NodeId, u64)> + '_ {
        let r = self.range(v);
        r.map(move |a| (self.head[a] as usize, self.cap[a] as u64))
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.deg[v] as usize
    }

    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn take_trace(&mut self) -> Vec<Augmentation> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    fn range(&self, v: usize) -> std::ops::Range<usize> {
        let s = self.first[v] as usize;
        s..s + self.deg[v] as usize
    }

    fn check_alive(&self, v: NodeId) -> Result<()> {
        if v >= self.alive.len() {
            return arg_err(format!("node {v} out of range"));
        }
        if !self.alive[v] {
            return arg_err(format!("node {v} was contracted away"));
        }
        Ok(())
    }

    /// Adds `delta` to the excess of `node`. The current flow is kept.
    pub fn set_terminal_excess(&mut self, node: NodeId, delta: i64) -> Result<()> {
        self.check_alive(node)?;
        if delta == 0 {
            return Ok(());
        }
        self.solved = false;
        let old = self.demand[node];
        let new = old + delta;
        let mut rs = self.excess[node].max(0);
        let mut rt = (-self.excess[node]).max(0);
        rs += new.max(0) - old.max(0);
        if rs < 0 {
            // flow already leaving the source exceeds the new capacity: raise
            // both terminal capacities, which shifts every cut by a constant
            rt -= rs;
            self.value += rs;
            rs = 0;
        }
        rt += (-new).max(0) - (-old).max(0);
        if rt < 0 {
            rs -= rt;
            self.value += rt;
            rt = 0;
        }
        let direct = rs.min(rt);
        self.value += direct;
        self.demand[node] = new;
        self.set_residual_excess(node, rs - rt);
        self.refresh(node);
        Ok(())
    }

    /// Sets the excess of `node` to `value`.
    pub fn set_excess(&mut self, node: NodeId, value: i64) -> Result<()> {
        self.check_alive(node)?;
        let delta = value - self.demand[node];
        self.set_terminal_excess(node, delta)
    }

    fn set_residual_excess(&mut self, v: usize, x: i64) {
        self.excess[v] = x;
        if x > 0 {
            self.minus.remove(v);
            self.plus.insert(v);
        } else if x < 0 {
            self.plus.remove(v);
            self.minus.insert(v);
        } else {
            self.plus.remove(v);
            self.minus.remove(v);
        }
    }

    fn activate(&mut self, v: usize) {
        if !self.active[v] && self.tree[v] != Tree::Free {
            let t = self.tree[v].index();
            self.active[v] = true;
            self.queues[t].push_back(v as u32);
            self.counts[t] += 1;
        }
    }

    fn deactivate(&mut self, v: usize) {
        if self.active[v] {
            self.active[v] = false;
            self.counts[self.tree[v].index()] -= 1;
        }
    }

    fn pop_active(&mut self, t: usize) -> Option<usize> {
        while let Some(v) = self.queues[t].pop_front() {
            let v = v as usize;
            if self.active[v] && self.tree[v].index() == t {
                self.active[v] = false;
                self.counts[t] -= 1;
                return Some(v);
            }
        }
        None
    }

    fn touch_neighbors(&mut self, v: usize) {
        for a in self.range(v) {
            let q = self.head[a] as usize;
            self.activate(q);
        }
    }

    fn make_orphan(&mut self, v: usize) {
        self.parent[v] = ORPHAN;
        self.orphans.push_back(v as u32);
    }

    /// Orphans the tree children of `v`.
    fn orphan_children(&mut self, v: usize) {
        for a in self.range(v) {
            let q = self.head[a] as usize;
            if self.tree[q] != Tree::Free && self.parent[q] == self.rev[a] {
                self.make_orphan(q);
            }
        }
    }

    /// Brings the tree membership of `v` in line with the sign of its
    /// residual excess.
    fn refresh(&mut self, v: usize) {
        let want = match self.excess[v].signum() {
            1 => Tree::Source,
            -1 => Tree::Sink,
            _ => {
                if self.tree[v] != Tree::Free && self.parent[v] == TERMINAL {
                    self.make_orphan(v);
                }
                return;
            }
        };
        if self.tree[v] == want {
            self.parent[v] = TERMINAL;
            self.stamp[v] = self.time;
            self.dist[v] = 1;
            return;
        }
        if self.tree[v] != Tree::Free {
            self.orphan_children(v);
            self.deactivate(v);
        }
        self.tree[v] = want;
        self.parent[v] = TERMINAL;
        self.stamp[v] = self.time;
        self.dist[v] = 1;
        self.activate(v);
        self.touch_neighbors(v);
    }

    /// Merges `members` into `representative`, summing excesses and merging
    /// parallel arcs. Work is proportional to the members' degrees.
    pub fn contract_nodes(&mut self, members: &[NodeId], representative: NodeId) -> Result<()> {
        for &m in members {
            self.check_alive(m)?;
        }
        if !members.contains(&representative) {
            return arg_err("representative must belong to the contracted set");
        }
        self.scratch_epoch += 1;
        let ep = self.scratch_epoch;
        let mut set: Vec<usize> = Vec::with_capacity(members.len());
        for &m in members {
            if self.scratch[m] != ep {
                self.scratch[m] = ep;
                set.push(m);
            }
        }
        if set.len() == 1 {
            return Ok(());
        }
        self.solved = false;
        self.last_cut = None;

        // detach search trees around the set
        for &m in &set {
            self.deactivate(m);
            for a in self.range(m) {
                let q = self.head[a] as usize;
                if self.scratch[q] != ep && self.tree[q] != Tree::Free && self.parent[q] == self.rev[a]
                {
                    self.make_orphan(q);
                }
            }
            self.plus.remove(m);
            self.minus.remove(m);
        }

        // gather merged arcs of the new node
        struct NewArc {
            head: u32,
            res: i64,
            back: u32,
            back_res: i64,
            cap: i64,
        }
        let mut merged: Vec<NewArc> = Vec::new();
        self.scratch_epoch += 1;
        let ep2 = self.scratch_epoch;
        let mut old_arcs = 0;
        for &m in &set {
            let r = self.range(m);
            old_arcs += r.len();
            for a in r {
                let y = self.head[a] as usize;
                if self.scratch[y] == ep {
                    if a < self.rev[a] as usize {
                        self.alive_edges -= 1;
                    }
                    continue;
                }
                let back = self.rev[a];
                if self.scratch[y] == ep2 {
                    // this is a second arc between the new node and y: fold it
                    let k = self.slot[y] as usize;
                    merged[k].res += self.res[a];
                    merged[k].back_res += self.res[back as usize];
                    merged[k].cap += self.cap[a];
                    let moved = self.swap_remove_arc(y, back as usize);
                    if let Some((from, to)) = moved {
                        if merged[k].back as usize == from {
                            merged[k].back = to as u32;
                        }
                    }
                    self.alive_edges -= 1;
                } else {
                    // keep y's scratch mark distinct from the member mark
                    self.scratch[y] = ep2;
                    self.slot[y] = merged.len() as u32;
                    merged.push(NewArc {
                        head: y as u32,
                        res: self.res[a],
                        back,
                        back_res: self.res[back as usize],
                        cap: self.cap[a],
                    });
                }
            }
        }
        // the y marks reused scratch; members must still read as members
        // below, so they are never compared again after this point
        let start = self.head.len();
        for na in &merged {
            let idx = self.head.len() as u32;
            self.head.push(na.head);
            self.res.push(na.res);
            self.cap.push(na.cap);
            self.rev.push(na.back);
            let b = na.back as usize;
            self.head[b] = representative as u32;
            self.res[b] = na.back_res;
            self.cap[b] = na.cap;
            self.rev[b] = idx;
        }
        self.garbage += old_arcs;

        let mut rs = 0i64;
        let mut rt = 0i64;
        let mut dp = 0i64;
        let mut dm = 0i64;
        for &m in &set {
            rs += self.excess[m].max(0);
            rt += (-self.excess[m]).max(0);
            dp += self.demand[m].max(0);
            dm += (-self.demand[m]).max(0);
            if m != representative {
                self.alive[m] = false;
                self.deg[m] = 0;
                self.tree[m] = Tree::Free;
                self.parent[m] = FREE;
                self.excess[m] = 0;
                self.demand[m] = 0;
            }
        }
        let direct = rs.min(rt);
        self.value += direct - dp.min(dm);
        self.demand[representative] = dp - dm;
        self.alive_nodes -= set.len() - 1;

        let rep = representative;
        self.first[rep] = start as u32;
        self.deg[rep] = merged.len() as u32;
        self.tree[rep] = Tree::Free;
        self.parent[rep] = FREE;
        self.set_residual_excess(rep, rs - rt);
        self.refresh(rep);
        self.touch_neighbors(rep);

        if self.garbage > 1024 && self.garbage > self.head.len() / 2 {
            self.compact();
        }
        Ok(())
    }

    /// Removes arc `idx` from the range of `y` by moving y's last arc into
    /// its place. Returns the move performed, if any.
    fn swap_remove_arc(&mut self, y: usize, idx: usize) -> Option<(usize, usize)> {
        let last = (self.first[y] + self.deg[y] - 1) as usize;
        self.deg[y] -= 1;
        self.garbage += 1;
        if idx == last {
            return None;
        }
        self.head[idx] = self.head[last];
        self.res[idx] = self.res[last];
        self.cap[idx] = self.cap[last];
        let r = self.rev[last];
        self.rev[idx] = r;
        self.rev[r as usize] = idx as u32;
        if self.parent[y] == last as u32 {
            self.parent[y] = idx as u32;
        }
        Some((last, idx))
    }

    fn compact(&mut self) {
        let live: usize = (0..self.alive.len()).filter(|&v| self.alive[v]).map(|v| self.deg[v] as usize).sum();
        let mut remap = vec![u32::MAX; self.head.len()];
        let mut head = Vec::with_capacity(live);
        let mut res = Vec::with_capacity(live);
        let mut cap = Vec::with_capacity(live);
        let mut rev = Vec::with_capacity(live);
        for v in 0..self.alive.len() {
            if !self.alive[v] {
                continue;
            }
            let r = self.range(v);
            self.first[v] = head.len() as u32;
            for a in r {
                remap[a] = head.len() as u32;
                head.push(self.head[a]);
                res.push(self.res[a]);
                cap.push(self.cap[a]);
                rev.push(self.rev[a]);
            }
        }
        for r in rev.iter_mut() {
            *r = remap[*r as usize];
        }
        for v in 0..self.alive.len() {
            let p = self.parent[v];
            if self.alive[v] && p != FREE && p != TERMINAL && p != ORPHAN {
                self.parent[v] = remap[p as usize];
            }
        }
        self.head = head;
        self.res = res;
        self.cap = cap;
        self.rev = rev;
        self.garbage = 0;
    }

    /// Runs the flow computation to optimality without extracting the cut.
    /// Returns the min cut value.
    pub fn max_flow(&mut self) -> u64 {
        // mutations since the last solve may have orphaned stamped nodes
        self.time += 1;
        self.adopt();
        loop {
            if self.counts[SRC] == 0 || self.counts[SNK] == 0 {
                break;
            }
            let t = if self.counts[SRC] <= self.counts[SNK] { SRC } else { SNK };
            let Some(i) = self.pop_active(t) else {
                // counts say otherwise; cannot happen
                debug_assert!(false, "active count out of sync");
                break;
            };
            if let Some(mid) = self.grow(i, t) {
                // i keeps scanning after the augmentation
                self.active[i] = true;
                self.counts[t] += 1;
                self.queues[t].push_front(i as u32);
                self.time += 1;
                self.augment(mid);
                self.adopt();
            }
        }
        self.solved = true;
        self.last_cut = None;
        debug_assert!(self.value >= 0);
        self.value as u64
    }

    /// Scans the arcs of active node `i` in tree `t`. Returns a connecting
    /// arc (oriented source tree to sink tree) if one is found.
    fn grow(&mut self, i: usize, t: usize) -> Option<usize> {
        for a in self.range(i) {
            let j = self.head[a] as usize;
            let (cap_ok, own, other) = if t == SRC {
                (self.res[a] > 0, Tree::Source, Tree::Sink)
            } else {
                (self.res[self.rev[a] as usize] > 0, Tree::Sink, Tree::Source)
            };
            if !cap_ok {
                continue;
            }
            match self.tree[j] {
                Tree::Free => {
                    self.tree[j] = own;
                    self.parent[j] = self.rev[a];
                    self.stamp[j] = self.stamp[i];
                    self.dist[j] = self.dist[i].saturating_add(1);
                    self.activate(j);
                }
                x if x == other => {
                    return Some(if t == SRC { a } else { self.rev[a] as usize });
                }
                _ => {}
            }
        }
        None
    }

    fn augment(&mut self, mid: usize) {
        let mut delta = self.res[mid];
        let mut len = 1u32;
        // source half
        let mut v = self.head[self.rev[mid] as usize] as usize;
        loop {
            let p = self.parent[v];
            if p == TERMINAL {
                delta = delta.min(self.excess[v]);
                break;
            }
            delta = delta.min(self.res[self.rev[p as usize] as usize]);
            v = self.head[p as usize] as usize;
            len += 1;
        }
        // sink half
        v = self.head[mid] as usize;
        loop {
            let p = self.parent[v];
            if p == TERMINAL {
                delta = delta.min(-self.excess[v]);
                break;
            }
            delta = delta.min(self.res[p as usize]);
            v = self.head[p as usize] as usize;
            len += 1;
        }
        debug_assert!(delta > 0);

        self.res[mid] -= delta;
        self.res[self.rev[mid] as usize] += delta;
        v = self.head[self.rev[mid] as usize] as usize;
        loop {
            let p = self.parent[v];
            if p == TERMINAL {
                let x = self.excess[v] - delta;
                self.set_residual_excess(v, x);
                if x == 0 {
                    self.make_orphan(v);
                }
                break;
            }
            let p = p as usize;
            let down = self.rev[p] as usize;
            self.res[down] -= delta;
            self.res[p] += delta;
            let next = self.head[p] as usize;
            if self.res[down] == 0 {
                self.make_orphan(v);
            }
            v = next;
        }
        v = self.head[mid] as usize;
        loop {
            let p = self.parent[v];
            if p == TERMINAL {
                let x = self.excess[v] + delta;
                self.set_residual_excess(v, x);
                if x == 0 {
                    self.make_orphan(v);
                }
                break;
            }
            let p = p as usize;
            self.res[p] -= delta;
            self.res[self.rev[p] as usize] += delta;
            let next = self.head[p] as usize;
            if self.res[p] == 0 {
                self.make_orphan(v);
            }
            v = next;
        }
        self.value += delta;
        if let Some(tr) = self.trace.as_mut() {
            tr.push(Augmentation { path_len: len, bottleneck: delta });
        }
    }

    fn adopt(&mut self) {
        while let Some(p) = self.orphans.pop_front() {
            let p = p as usize;
            if !self.alive[p] || self.parent[p] != ORPHAN {
                continue;
            }
            self.process_orphan(p);
        }
    }

    /// Distance from `q` to a terminal root following parent arcs, or
    /// `INF_DIST` if the path hits an orphan. Caches distances with the
    /// current timestamp.
    fn origin_distance(&mut self, q: usize) -> u32 {
        let mut d: u32 = 0;
        let mut j = q;
        loop {
            if self.stamp[j] == self.time {
                d = d.saturating_add(self.dist[j]);
                break;
            }
            let pj = self.parent[j];
            d += 1;
            if pj == TERMINAL {
                self.stamp[j] = self.time;
                self.dist[j] = 1;
                break;
            }
            if pj == ORPHAN || pj == FREE {
                return INF_DIST;
            }
            j = self.head[pj as usize] as usize;
        }
        let mut j = q;
        let mut dd = d;
        while self.stamp[j] != self.time {
            self.stamp[j] = self.time;
            self.dist[j] = dd;
            dd -= 1;
            j = self.head[self.parent[j] as usize] as usize;
        }
        d
    }

    fn process_orphan(&mut self, p: usize) {
        let own = self.tree[p];
        let src = own == Tree::Source;
        let mut best = u32::MAX;
        let mut best_d = INF_DIST;
        for a in self.range(p) {
            let into_p = if src { self.res[self.rev[a] as usize] } else { self.res[a] };
            if into_p <= 0 {
                continue;
            }
            let q = self.head[a] as usize;
            if self.tree[q] != own || self.parent[q] == ORPHAN {
                continue;
            }
            let d = self.origin_distance(q);
            if d < best_d {
                best_d = d;
                best = a as u32;
            }
        }
        if best != u32::MAX {
            self.parent[p] = best;
            self.stamp[p] = self.time;
            self.dist[p] = best_d.saturating_add(1);
            return;
        }
        // no valid parent: p leaves the tree
        for a in self.range(p) {
            let q = self.head[a] as usize;
            if self.tree[q] != own {
                continue;
            }
            let into_p = if src { self.res[self.rev[a] as usize] } else { self.res[a] };
            if into_p > 0 {
                self.activate(q);
            }
            let pq = self.parent[q];
            if pq != TERMINAL && pq != ORPHAN && pq != FREE && self.head[pq as usize] as usize == p {
                self.make_orphan(q);
            }
        }
        self.deactivate(p);
        self.tree[p] = Tree::Free;
        self.parent[p] = FREE;
    }

    /// Solves to optimality and extracts the minimum cut.
    pub fn solve(&mut self) -> MinCut {
        let size = self.size();
        let value = self.max_flow();
        let (side, side_is_source) = self.search_sides();
        MinCut { value, side, side_is_source, size }
    }

    /// Runs the two residual searches from V⁺ and V⁻, always advancing the
    /// one with fewer visited nodes, and returns the side of the search that
    /// completes first.
    fn search_sides(&mut self) -> (Vec<NodeId>, bool) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            for m in self.marks.iter_mut() {
                m.iter_mut().for_each(|x| *x = 0);
            }
            self.epoch = 1;
        }
        let ep = self.epoch;
        let mut lists: [Vec<u32>; 2] = [self.plus.items.clone(), self.minus.items.clone()];
        for t in [SRC, SNK] {
            for &v in &lists[t] {
                self.marks[t][v as usize] = ep;
            }
        }
        let mut heads = [0usize; 2];
        let finished = loop {
            if heads[SNK] == lists[SNK].len() {
                break SNK;
            }
            if heads[SRC] == lists[SRC].len() {
                break SRC;
            }
            let t = if lists[SRC].len() <= lists[SNK].len() { SRC } else { SNK };
            let v = lists[t][heads[t]] as usize;
            heads[t] += 1;
            for a in self.range(v) {
                let r = if t == SRC { self.res[a] } else { self.res[self.rev[a] as usize] };
                if r > 0 {
                    let q = self.head[a] as usize;
                    if self.marks[t][q] != ep {
                        self.marks[t][q] = ep;
                        lists[t].push(q as u32);
                    }
                }
            }
        };
        let side_is_source = finished == SRC;
        self.last_cut = Some(LastCut { side_is_source, epoch: ep });
        let side = std::mem::take(&mut lists[finished]).into_iter().map(|v| v as usize).collect();
        (side, side_is_source)
    }

    /// Recomputes the cut sides of the last solve and materializes both.
    pub fn extract_min_cut_sides(&mut self) -> Result<CutSides> {
        if !self.solved {
            return Err(Error::State("no completed solve for the current instance".into()));
        }
        self.search_sides();
        let mut source_side = Vec::new();
        let mut sink_side = Vec::new();
        for v in 0..self.alive.len() {
            if self.alive[v] {
                if self.in_source_side(v) {
                    source_side.push(v);
                } else {
                    sink_side.push(v);
                }
            }
        }
        Ok(CutSides { source_side, sink_side })
    }

    /// Side membership from the last solve. Valid until the next mutation.
    pub fn in_source_side(&self, v: NodeId) -> bool {
        let cut = self.last_cut.expect("in_source_side called without a fresh cut");
        if cut.side_is_source {
            self.marks[SRC][v] == cut.epoch
        } else {
            self.marks[SNK][v] != cut.epoch
        }
    }

    /// The current contracted network as a standalone graph. Node `i` of the
    /// result is slot `slots[i]`; labels are slot ids.
    pub fn to_graph(&self) -> (Graph, Vec<NodeId>) {
        let mut index = vec![u32::MAX; self.alive.len()];
        let mut slots = Vec::with_capacity(self.alive_nodes);
        for v in 0..self.alive.len() {
            if self.alive[v] {
                index[v] = slots.len() as u32;
                slots.push(v);
            }
        }
        let mut edges = Vec::with_capacity(self.alive_edges);
        for &v in &slots {
            for a in self.range(v) {
                let q = self.head[a] as usize;
                if v < q {
                    edges.push((index[v] as usize, index[q] as usize, self.cap[a] as u64));
                }
            }
        }
        let labels = slots.iter().map(|&v| v as u32).collect();
        let g = Graph::with_labels(labels, edges).expect("indices in range");
        (g, slots)
    }

    #[cfg(test)]
    fn check_invariants(&self) {
        for v in 0..self.alive.len() {
            if !self.alive[v] {
                continue;
            }
            for a in self.range(v) {
                assert!(self.res[a] >= 0);
                let r = self.rev[a] as usize;
                assert_eq!(self.rev[r] as usize, a);
                assert_eq!(self.head[r] as usize, v);
                assert_eq!(self.res[a] + self.res[r], 2 * self.cap[a]);
            }
            assert_eq!(self.excess[v] > 0, self.plus.pos[v] != u32::MAX);
            assert_eq!(self.excess[v] < 0, self.minus.pos[v] != u32::MAX);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive min cut with node excesses: minimize cut weight plus
    /// positive excess on the sink side plus negative excess on the source
    /// side.
    fn brute(g: &Graph, ex: &[i64]) -> i64 {
        let n = g.node_count();
        let mut best = i64::MAX;
        for mask in 0u32..(1 << n) {
            let inside: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
            let mut c = g.cut_cost_mask(&inside) as i64;
            for v in 0..n {
                if inside[v] && ex[v] < 0 {
                    c -= ex[v];
                }
                if !inside[v] && ex[v] > 0 {
                    c += ex[v];
                }
            }
            best = best.min(c);
        }
        best
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize, wmax: u64) -> Graph {
        let edges: Vec<_> = (0..m)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(1..=wmax)))
            .collect();
        Graph::from_edges(n, edges).unwrap()
    }

    fn cold(g: &Graph, ex: &[i64]) -> (u64, FlowState) {
        let mut f = FlowState::new(g);
        for (v, &x) in ex.iter().enumerate() {
            f.set_excess(v, x).unwrap();
        }
        let cut = f.solve();
        (cut.value, f)
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, [(0, 1, 5)]).unwrap();
        let mut f = FlowState::new(&g);
        let inf = f.sentinel();
        f.set_excess(0, inf).unwrap();
        f.set_excess(1, -inf).unwrap();
        assert_eq!(f.solve().value, 5);
    }

    #[test]
    fn path_bottleneck() {
        let g = Graph::from_edges(3, [(0, 1, 3), (1, 2, 1)]).unwrap();
        let mut f = FlowState::new(&g);
        let inf = f.sentinel();
        f.set_excess(0, inf).unwrap();
        f.set_excess(2, -inf).unwrap();
        let cut = f.solve();
        assert_eq!(cut.value, 1);
        let sides = f.extract_min_cut_sides().unwrap();
        assert_eq!(sides.sink_side, vec![2]);
        assert_eq!(sides.source_side, vec![0, 1]);
    }

    #[test]
    fn zero_excess_puts_everything_on_source_side() {
        let g = Graph::from_edges(3, [(0, 1, 3), (1, 2, 1)]).unwrap();
        let mut f = FlowState::new(&g);
        let cut = f.solve();
        assert_eq!(cut.value, 0);
        assert!(!cut.side_is_source && cut.side.is_empty());
        let sides = f.extract_min_cut_sides().unwrap();
        assert_eq!(sides.source_side.len(), 3);
    }

    #[test]
    fn extraction_before_solve_is_a_state_error() {
        let g = Graph::from_edges(2, [(0, 1, 1)]).unwrap();
        let mut f = FlowState::new(&g);
        assert!(matches!(f.extract_min_cut_sides(), Err(Error::State(_))));
        f.solve();
        f.set_terminal_excess(0, 1).unwrap();
        assert!(matches!(f.extract_min_cut_sides(), Err(Error::State(_))));
    }

    #[test]
    fn star_leaf_side_is_enumerated() {
        let g = Graph::from_edges(8, (1..8).map(|i| (0, i, 10))).unwrap();
        let mut f = FlowState::new(&g);
        let inf = f.sentinel();
        f.set_excess(0, inf).unwrap();
        f.set_excess(5, -inf).unwrap();
        let cut = f.solve();
        assert_eq!(cut.value, 10);
        assert_eq!(cut.side, vec![5]);
        assert!(!cut.side_is_source);
    }

    #[test]
    fn dumbbell_sides_are_balanced() {
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((i, j, 5));
                edges.push((i + 4, j + 4, 5));
            }
        }
        edges.push((3, 4, 1));
        let g = Graph::from_edges(8, edges).unwrap();
        let mut f = FlowState::new(&g);
        let inf = f.sentinel();
        f.set_excess(0, inf).unwrap();
        f.set_excess(7, -inf).unwrap();
        let cut = f.solve();
        assert_eq!(cut.value, 1);
        assert_eq!(cut.side.len(), 4);
        let sides = f.extract_min_cut_sides().unwrap();
        assert_eq!(sides.source_side, vec![0, 1, 2, 3]);
        assert_eq!(sides.sink_side, vec![4, 5, 6, 7]);
    }

    #[test]
    fn solve_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let n = rng.gen_range(2..=12);
            let m = rng.gen_range(n..=3 * n);
            let g = random_graph(&mut rng, n, m, 10);
            let mut f = FlowState::new(&g);
            let inf = f.sentinel();
            let s = rng.gen_range(0..n);
            let mut t = rng.gen_range(0..n);
            while t == s {
                t = rng.gen_range(0..n);
            }
            f.set_excess(s, inf).unwrap();
            f.set_excess(t, -inf).unwrap();
            let mut ex = vec![0; n];
            ex[s] = inf;
            ex[t] = -inf;
            let cut = f.solve();
            assert_eq!(cut.value as i64, brute(&g, &ex));
            f.check_invariants();
            // duality: reported value equals the cost of the returned cut
            let sides = f.extract_min_cut_sides().unwrap();
            if !sides.sink_side.is_empty() && !sides.source_side.is_empty() {
                assert_eq!(g.cut_cost(&sides.sink_side).unwrap(), cut.value);
            }
            assert!(sides.source_side.contains(&s) && sides.sink_side.contains(&t));
        }
    }

    #[test]
    fn soft_excesses_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let n = rng.gen_range(2..=10);
            let g = random_graph(&mut rng, n, 2 * n, 8);
            let ex: Vec<i64> = (0..n).map(|_| rng.gen_range(-12..=12)).collect();
            let (v, _) = cold(&g, &ex);
            assert_eq!(v as i64, brute(&g, &ex));
        }
    }

    #[test]
    fn inverse_update_is_a_no_op() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(3..=10);
            let g = random_graph(&mut rng, n, 2 * n, 8);
            let ex: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
            let (v0, mut f) = cold(&g, &ex);
            let node = rng.gen_range(0..n);
            let d = rng.gen_range(-20..=20);
            f.set_terminal_excess(node, d).unwrap();
            f.set_terminal_excess(node, -d).unwrap();
            assert_eq!(f.solve().value, v0);
        }
    }

    #[test]
    fn slack_increase_on_source_side_keeps_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = rng.gen_range(3..=10);
            let g = random_graph(&mut rng, n, 2 * n, 8);
            let mut f = FlowState::new(&g);
            let inf = f.sentinel();
            f.set_excess(0, inf).unwrap();
            f.set_excess(n - 1, -inf).unwrap();
            let v0 = f.solve().value;
            let sides = f.extract_min_cut_sides().unwrap();
            // a source-side node gaining supply cannot raise the min cut
            // as long as the sink side is unchanged
            let &u = sides.source_side.last().unwrap();
            f.set_terminal_excess(u, 3).unwrap();
            assert_eq!(f.solve().value, v0);
        }
    }

    #[test]
    fn contract_singleton_is_noop() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut f = FlowState::new(&g);
        f.contract_nodes(&[1], 1).unwrap();
        assert_eq!(f.size(), SizePair { nodes: 3, edges: 2 });
    }

    #[test]
    fn contract_rejects_bad_arguments() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let mut f = FlowState::new(&g);
        assert!(f.contract_nodes(&[0, 1], 2).is_err());
        f.contract_nodes(&[0, 1], 0).unwrap();
        assert!(f.contract_nodes(&[1, 2], 2).is_err());
        assert!(f.set_terminal_excess(1, 1).is_err());
    }

    #[test]
    fn contract_triangle_warm_equals_cold() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        let mut f = FlowState::new(&g);
        let inf = f.sentinel();
        f.set_excess(0, inf).unwrap();
        f.set_excess(2, -inf).unwrap();
        assert_eq!(f.solve().value, 2);
        f.contract_nodes(&[1, 2], 2).unwrap();
        let warm = f.solve().value;
        let (h, _) = g.contract_set(&[1, 2], 2).unwrap();
        let mut c = FlowState::new(&h);
        c.set_excess(0, inf).unwrap();
        c.set_excess(1, -2 * inf).unwrap();
        assert_eq!(warm, c.solve().value);
        assert_eq!(warm, 2);
        assert_eq!(f.size(), SizePair { nodes: 2, edges: 1 });
    }

    fn cold_value(f: &FlowState) -> u64 {
        let (h, slots) = f.to_graph();
        let mut c = FlowState::new(&h);
        for (i, &s) in slots.iter().enumerate() {
            c.set_excess(i, f.excess(s)).unwrap();
        }
        c.solve().value
    }

    #[test]
    fn warm_scripts_match_cold_solves() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let n = rng.gen_range(2..=14);
            let g = random_graph(&mut rng, n, 2 * n, 9);
            let mut f = FlowState::new(&g);
            let inf = f.sentinel();
            for _ in 0..12 {
                let alive: Vec<usize> = (0..n).filter(|&v| f.is_alive(v)).collect();
                match rng.gen_range(0..4) {
                    0 | 1 => {
                        let v = alive[rng.gen_range(0..alive.len())];
                        let x = match rng.gen_range(0..4) {
                            0 => inf,
                            1 => -inf,
                            2 => 0,
                            _ => rng.gen_range(-15..=15),
                        };
                        f.set_excess(v, x).unwrap();
                    }
                    2 if alive.len() > 1 => {
                        let k = rng.gen_range(1..alive.len());
                        let mut set: Vec<usize> =
                            alive.iter().copied().filter(|_| rng.gen_bool(0.5)).take(k).collect();
                        if set.is_empty() {
                            set.push(alive[0]);
                        }
                        let rep = set[rng.gen_range(0..set.len())];
                        f.contract_nodes(&set, rep).unwrap();
                    }
                    _ => {
                        let cut = f.solve();
                        f.check_invariants();
                        assert_eq!(cut.value, cold_value(&f));
                    }
                }
            }
            let v = f.solve().value;
            assert_eq!(v, cold_value(&f));
        }
    }

    #[test]
    fn trace_records_augmentations() {
        let g = Graph::from_edges(3, [(0, 1, 3), (1, 2, 1), (0, 2, 2)]).unwrap();
        let mut f = FlowState::new(&g);
        f.enable_trace();
        f.set_excess(0, 10).unwrap();
        f.set_excess(2, -10).unwrap();
        let v = f.solve().value;
        let tr = f.take_trace();
        assert_eq!(tr.iter().map(|a| a.bottleneck).sum::<i64>(), v as i64);
        assert!(tr.iter().all(|a| a.path_len >= 1));
    }
}
