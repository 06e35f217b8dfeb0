//! Undirected weighted graphs on vertices `0..n`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    /// Builds an edge with endpoints stored in ascending order.
    pub fn new(a: usize, b: usize, w: f64) -> Self {
        Self {
            u: a.min(b),
            v: a.max(b),
            w,
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Edge list plus adjacency index. Adjacency entries are `(neighbor, edge index)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut g = Self::new(n);
        for e in edges {
            g.add_edge(e.u, e.v, e.w);
        }
        g
    }

    /// Adds `{a, b}` unless it is already present. Returns whether it was added.
    ///
    /// Panics on self-loops, out-of-range ids and non-positive weights.
    pub fn add_edge(&mut self, a: usize, b: usize, w: f64) -> bool {
        assert!(a != b, "self-loop at {a}");
        assert!(a < self.n && b < self.n, "edge ({a}, {b}) out of range");
        assert!(w > 0.0 && w.is_finite(), "bad weight {w} on ({a}, {b})");
        if self.has_edge(a, b) {
            return false;
        }
        let idx = self.edges.len();
        self.edges.push(Edge::new(a, b, w));
        self.adj[a].push((b, idx));
        self.adj[b].push((a, idx));
        true
    }

    /// Like [`add_edge`](Self::add_edge) for callers that already know the
    /// pair is new. Skips the duplicate scan.
    pub(crate) fn push_new_edge(&mut self, a: usize, b: usize, w: f64) {
        debug_assert!(a != b && w > 0.0);
        let idx = self.edges.len();
        self.edges.push(Edge::new(a, b, w));
        self.adj[a].push((b, idx));
        self.adj[b].push((a, idx));
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (x, y) = if self.adj[a].len() <= self.adj[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.adj[x].iter().any(|&(z, _)| z == y)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, x: usize) -> &[(usize, usize)] {
        &self.adj[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Edges sorted by `(u, v)`, handy for comparing graphs built in different orders.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        let mut es = self.edges.clone();
        es.sort_by_key(|a| (a.u, a.v));
        es
    }

    /// Single-source distances. Vertices farther than `cutoff` are left at infinity.
    pub fn dijkstra(&self, src: usize, cutoff: Option<f64>) -> Vec<f64> {
        self.dijkstra_impl(src, None, cutoff, None)
    }

    /// Single-source distances in the graph with edge `skip` removed.
    pub fn dijkstra_without(&self, src: usize, skip: usize, cutoff: Option<f64>) -> Vec<f64> {
        self.dijkstra_impl(src, Some(skip), cutoff, None)
    }

    fn dijkstra_impl(
        &self,
        src: usize,
        skip: Option<usize>,
        cutoff: Option<f64>,
        target: Option<usize>,
    ) -> Vec<f64> {
        let limit = cutoff.unwrap_or(f64::INFINITY);
        let mut dist = vec![f64::INFINITY; self.n];
        let mut done = vec![false; self.n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(State { d: 0.0, v: src });
        while let Some(State { d, v }) = heap.pop() {
            if done[v] {
                continue;
            }
            if d > limit {
                dist[v] = f64::INFINITY;
                break;
            }
            done[v] = true;
            if Some(v) == target {
                break;
            }
            for &(x, idx) in &self.adj[v] {
                if Some(idx) == skip || done[x] {
                    continue;
                }
                let nd = d + self.edges[idx].w;
                if nd < dist[x] && nd <= limit {
                    dist[x] = nd;
                    heap.push(State { d: nd, v: x });
                }
            }
        }
        for (x, d) in dist.iter_mut().enumerate() {
            if !done[x] {
                *d = f64::INFINITY;
            }
        }
        dist
    }

    /// Connected components of the graph with `removed` vertices deleted.
    /// Returns a label per vertex (`usize::MAX` for removed ones) and the
    /// component sizes indexed by label.
    pub fn components_without(&self, removed: &[bool]) -> (Vec<usize>, Vec<usize>) {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            if !removed[e.u] && !removed[e.v] {
                uf.union(e.u, e.v);
            }
        }
        let mut label = vec![usize::MAX; self.n];
        let mut root_label = vec![usize::MAX; self.n];
        let mut sizes = Vec::new();
        for x in 0..self.n {
            if removed[x] {
                continue;
            }
            let r = uf.find(x);
            if root_label[r] == usize::MAX {
                root_label[r] = sizes.len();
                sizes.push(0);
            }
            label[x] = root_label[r];
            sizes[root_label[r]] += 1;
        }
        (label, sizes)
    }

    /// Subgraph induced by `ids`, relabelled so that `ids[k]` becomes `k`.
    pub fn induced(&self, ids: &[usize]) -> WeightedGraph {
        let mut local = vec![usize::MAX; self.n];
        for (k, &x) in ids.iter().enumerate() {
            local[x] = k;
        }
        let mut g = WeightedGraph::new(ids.len());
        for e in &self.edges {
            let (a, b) = (local[e.u], local[e.v]);
            if a != usize::MAX && b != usize::MAX {
                g.add_edge(a, b, e.w);
            }
        }
        g
    }
}

/// Shortest-path distance from `u` to `v`, or infinity when it exceeds
/// `cutoff` or `v` is unreachable.
pub fn shortest_path_dist(g: &WeightedGraph, u: usize, v: usize, cutoff: Option<f64>) -> f64 {
    if u == v {
        return 0.0;
    }
    g.dijkstra_impl(u, None, cutoff, Some(v))[v]
}

#[derive(Clone, Copy, PartialEq)]
struct State {
    d: f64,
    v: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .d
            .total_cmp(&self.d)
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}
