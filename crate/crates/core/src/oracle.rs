//! Brute-force verifiers.
//!
//! Everything here recomputes from the raw graph and metric. Shortest paths,
//! components and spanning trees are reimplemented locally so that a bug in
//! the constructions cannot hide itself in the checks.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cgmz::OrientedSpanner;
use crate::graph::{Edge, WeightedGraph};
use crate::metric::{build_wspd, MetricInput, MetricKind, NetHierarchy};
use crate::separator::{PackingParams, SeparatorResult};

/// Relative slack for floating point comparisons against a bound.
pub const TOL: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub vertices: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub edges: Vec<[f64; 3]>,
}

impl Witness {
    fn with_edges(mut self, edges: &[Edge]) -> Self {
        self.edges = edges
            .iter()
            .map(|e| [e.u as f64, e.v as f64, e.w])
            .collect();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub passed: bool,
    pub measured: f64,
    pub bound: Option<f64>,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl CheckReport {
    fn new(name: &str, passed: bool, measured: f64, bound: Option<f64>) -> Self {
        Self {
            check_name: name.to_string(),
            passed,
            measured,
            bound,
            witness: None,
            note: None,
        }
    }

    fn witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

// ---------------------------------------------------------------------------
// local graph primitives

struct Adj {
    n: usize,
    /// `(neighbor, weight, edge index)`
    lists: Vec<Vec<(usize, f64, usize)>>,
}

impl Adj {
    fn new(g: &WeightedGraph) -> Self {
        let n = g.n();
        let mut lists = vec![Vec::new(); n];
        for (k, e) in g.edges().iter().enumerate() {
            lists[e.u].push((e.v, e.w, k));
            lists[e.v].push((e.u, e.w, k));
        }
        Self { n, lists }
    }

    fn sssp(&self, src: usize, skip: Option<usize>) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.n];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(Item(0.0, src));
        while let Some(Item(d, v)) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(x, w, k) in &self.lists[v] {
                if Some(k) == skip {
                    continue;
                }
                let nd = d + w;
                if nd < dist[x] {
                    dist[x] = nd;
                    heap.push(Item(nd, x));
                }
            }
        }
        dist
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Component sizes of `g` minus `removed`, by breadth-first search.
fn component_sizes(g: &WeightedGraph, removed: &[bool]) -> Vec<usize> {
    let adj = Adj::new(g);
    let mut seen = removed.to_vec();
    let mut sizes = Vec::new();
    for s in 0..adj.n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = vec![s];
        let mut k = 0;
        while k < queue.len() {
            let v = queue[k];
            k += 1;
            for &(x, _, _) in &adj.lists[v] {
                if !seen[x] {
                    seen[x] = true;
                    queue.push(x);
                }
            }
        }
        sizes.push(queue.len());
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Distances of the graph the spanner is compared against.
pub enum Host<'a> {
    /// Complete graph with metric weights.
    Metric(&'a MetricInput),
    Graph(&'a WeightedGraph),
}

/// Intersection graph of a unit ball input, built without the spanner code.
pub fn unit_ball_host(m: &MetricInput) -> Option<WeightedGraph> {
    let mu = m.mu()?;
    let mut g = WeightedGraph::new(m.len());
    for u in 0..m.len() {
        for v in u + 1..m.len() {
            let d = m.dist(u, v);
            if d <= 2.0 * mu {
                g.add_edge(u, v, d);
            }
        }
    }
    Some(g)
}

// ---------------------------------------------------------------------------
// stretch and greedy edges

#[derive(Clone, Copy, Debug)]
pub struct StretchOptions {
    /// All pairs are checked up to this many vertices.
    pub exact_limit: usize,
    /// Minimum number of sampled pairs above the limit.
    pub sampled_pairs: usize,
    pub seed: u64,
}

impl Default for StretchOptions {
    fn default() -> Self {
        Self {
            exact_limit: 500,
            sampled_pairs: 10_000,
            seed: 0,
        }
    }
}

pub fn verify_stretch(g: &WeightedGraph, host: Host<'_>, t: f64) -> CheckReport {
    verify_stretch_with(g, host, t, &StretchOptions::default())
}

/// Largest `δ_g(u, v) / δ_host(u, v)` over pairs connected in the host.
/// Passes when it is at most `t` up to [`TOL`].
pub fn verify_stretch_with(
    g: &WeightedGraph,
    host: Host<'_>,
    t: f64,
    opts: &StretchOptions,
) -> CheckReport {
    let n = g.n();
    let adj = Adj::new(g);
    let host_adj = match host {
        Host::Graph(h) => Some(Adj::new(h)),
        Host::Metric(_) => None,
    };
    let sources: Vec<usize> = if n <= opts.exact_limit {
        (0..n).collect()
    } else {
        let k = opts.sampled_pairs.div_ceil(n - 1).clamp(1, n);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut s = sample(&mut rng, n, k).into_vec();
        s.sort_unstable();
        s
    };
    let mut worst = 1.0f64;
    let mut witness = None;
    let mut pairs = 0usize;
    for &u in &sources {
        let dg = adj.sssp(u, None);
        let dh: Vec<f64> = match (&host, &host_adj) {
            (_, Some(h)) => h.sssp(u, None),
            (Host::Metric(m), None) => (0..n).map(|v| m.dist(u, v)).collect(),
            _ => unreachable!(),
        };
        for v in 0..n {
            if v == u || !dh[v].is_finite() {
                continue;
            }
            pairs += 1;
            let ratio = dg[v] / dh[v];
            if ratio > worst || (ratio.is_nan() && worst.is_finite()) {
                worst = if ratio.is_nan() { f64::INFINITY } else { ratio };
                witness = Some((u, v));
            }
        }
    }
    let passed = worst <= t * (1.0 + TOL);
    let mut rep = CheckReport::new("stretch", passed, worst, Some(t)).note(format!(
        "{} pairs from {} sources{}",
        pairs,
        sources.len(),
        if n <= opts.exact_limit { ", exact" } else { ", sampled" }
    ));
    if let Some((u, v)) = witness {
        rep = rep.witness(Witness {
            vertices: vec![u, v],
            ..Witness::default()
        });
    }
    rep
}

/// Smallest `δ_{g−e}(x, y) / w(e)` over edges `e = (x, y)`. Passes when it
/// exceeds `t` strictly for every edge.
pub fn verify_greedy_edge_property(g: &WeightedGraph, t: f64) -> CheckReport {
    let adj = Adj::new(g);
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for (k, e) in g.edges().iter().enumerate() {
        let d = adj.sssp(e.u, Some(k))[e.v];
        let ratio = d / e.w;
        if ratio < worst {
            worst = ratio;
            witness = Some(*e);
        }
    }
    let passed = worst > t;
    let mut rep = CheckReport::new("greedy_edge_property", passed, worst, Some(t));
    if let Some(e) = witness.filter(|_| !passed) {
        rep = rep.witness(Witness::default().with_edges(&[e]));
    }
    rep
}

/// Minimum spanning forest by Kruskal over the candidate pairs sorted by
/// `(w, u, v)`.
pub fn kruskal_forest(n: usize, candidates: &[Edge]) -> Vec<Edge> {
    let mut sorted = candidates.to_vec();
    sorted.sort_by(|a, b| a.w.total_cmp(&b.w).then((a.u, a.v).cmp(&(b.u, b.v))));
    let mut parent: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for e in sorted {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            out.push(e);
        }
    }
    out
}

/// Checks that `g` contains the minimum spanning forest of the complete
/// metric graph (or of the unit ball host).
pub fn verify_mst_containment(g: &WeightedGraph, m: &MetricInput) -> CheckReport {
    let n = m.len();
    let mut cands = Vec::new();
    let mu = m.mu();
    for u in 0..n {
        for v in u + 1..n {
            let d = m.dist(u, v);
            if mu.is_none_or(|mu| d <= 2.0 * mu) {
                cands.push(Edge::new(u, v, d));
            }
        }
    }
    let mst = kruskal_forest(n, &cands);
    let present: std::collections::HashSet<(usize, usize)> =
        g.edges().iter().map(|e| (e.u, e.v)).collect();
    let missing: Vec<Edge> = mst
        .iter()
        .filter(|e| !present.contains(&(e.u, e.v)))
        .copied()
        .collect();
    let weight: f64 = mst.iter().map(|e| e.w).sum();
    let mut rep = CheckReport::new("mst_containment", missing.is_empty(), weight, None)
        .note(format!("{} missing of {} tree edges", missing.len(), mst.len()));
    if !missing.is_empty() {
        rep = rep.witness(Witness::default().with_edges(&missing));
    }
    rep
}

// ---------------------------------------------------------------------------
// lankiness

#[derive(Clone, Copy, Debug)]
pub struct LankinessOptions {
    /// Every vertex is a center up to this many vertices.
    pub exact_limit: usize,
    /// Number of sampled centers above the limit.
    pub sampled_centers: usize,
    pub seed: u64,
}

impl Default for LankinessOptions {
    fn default() -> Self {
        Self {
            exact_limit: 500,
            sampled_centers: 256,
            seed: 0,
        }
    }
}

fn centers(n: usize, opts: &LankinessOptions) -> Vec<usize> {
    if n <= opts.exact_limit || opts.sampled_centers >= n {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut s = sample(&mut rng, n, opts.sampled_centers).into_vec();
    s.sort_unstable();
    s
}

/// Radii where some interval is active, as `[start, end)` or `[start, end]`.
#[derive(Default)]
struct Intervals {
    starts: Vec<f64>,
    open_ends: Vec<f64>,
    closed_ends: Vec<f64>,
}

impl Intervals {
    fn push(&mut self, start: f64, end: f64, closed: bool) {
        if closed {
            if end < start {
                return;
            }
            self.closed_ends.push(end);
        } else {
            if end <= start {
                return;
            }
            self.open_ends.push(end);
        }
        self.starts.push(start);
    }

    fn finish(&mut self) {
        self.starts.sort_unstable_by(f64::total_cmp);
        self.open_ends.sort_unstable_by(f64::total_cmp);
        self.closed_ends.sort_unstable_by(f64::total_cmp);
    }

    fn count(&self, r: f64) -> usize {
        self.starts.partition_point(|&s| s <= r)
            - self.open_ends.partition_point(|&e| e <= r)
            - self.closed_ends.partition_point(|&e| e < r)
    }
}

/// Breakpoints of the count at center `x`: every distance from `x`, every
/// edge weight, and the midpoint of each consecutive pair.
fn candidate_radii(from_x: &[f64], weights: &[f64]) -> Vec<f64> {
    let mut bps: Vec<f64> = from_x.iter().chain(weights).copied().collect();
    bps.sort_unstable_by(f64::total_cmp);
    bps.dedup();
    let mut out = Vec::with_capacity(2 * bps.len());
    for k in 0..bps.len() {
        out.push(bps[k]);
        if k + 1 < bps.len() {
            out.push(0.5 * (bps[k] + bps[k + 1]));
        }
    }
    out
}

/// Edge `{a, b}` with `δ(x, a) < δ(x, b)` is cut by `B(x, r)` for
/// `δ(x, a) ≤ r < δ(x, b)` and counts while `r ≤ w`.
fn edge_interval(da: f64, db: f64, w: f64) -> (f64, f64, bool) {
    if w >= db {
        (da, db, false)
    } else {
        (da, w, true)
    }
}

fn sorted_weights(g: &WeightedGraph) -> Vec<f64> {
    let mut ws: Vec<f64> = g.edges().iter().map(|e| e.w).collect();
    ws.sort_unstable_by(f64::total_cmp);
    ws.dedup();
    ws
}

fn lanky_witness(g: &WeightedGraph, m: &MetricInput, x: usize, r: f64) -> Witness {
    let cut: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|e| (m.dist(x, e.u) <= r) != (m.dist(x, e.v) <= r) && e.w >= r)
        .copied()
        .collect();
    Witness {
        center: Some(x),
        radius: Some(r),
        ..Witness::default()
    }
    .with_edges(&cut)
}

pub fn measure_lankiness(g: &WeightedGraph, m: &MetricInput) -> CheckReport {
    measure_lankiness_with(g, m, &LankinessOptions::default())
}

/// Largest number of edges of length at least `r` cut by a ball `B(x, r)`
/// centered at a vertex, over the candidate radii.
pub fn measure_lankiness_with(
    g: &WeightedGraph,
    m: &MetricInput,
    opts: &LankinessOptions,
) -> CheckReport {
    let n = m.len();
    let weights = sorted_weights(g);
    let cs = centers(n, opts);
    let mut best = (0usize, 0usize, 0.0f64);
    for &x in &cs {
        let dx: Vec<f64> = (0..n).map(|y| m.dist(x, y)).collect();
        let mut iv = Intervals::default();
        for e in g.edges() {
            let (da, db) = (dx[e.u], dx[e.v]);
            let (lo, hi) = if da <= db { (da, db) } else { (db, da) };
            let (s, t, closed) = edge_interval(lo, hi, e.w);
            iv.push(s, t, closed);
        }
        iv.finish();
        for r in candidate_radii(&dx, &weights) {
            let c = iv.count(r);
            if c > best.0 {
                best = (c, x, r);
            }
        }
    }
    let exact = cs.len() == n;
    let mut rep = CheckReport::new("lankiness", true, best.0 as f64, None).note(format!(
        "{} centers{}",
        cs.len(),
        if exact { ", exact" } else { ", sampled" }
    ));
    if best.0 > 0 {
        rep = rep.witness(lanky_witness(g, m, best.1, best.2));
    }
    rep
}

/// Same quantity as [`measure_lankiness`] with every vertex as a center,
/// evaluated by scanning all edges at every breakpoint plus ten evenly
/// spaced radii inside each gap between consecutive breakpoints.
pub fn measure_lankiness_dense(g: &WeightedGraph, m: &MetricInput) -> CheckReport {
    let n = m.len();
    let weights = sorted_weights(g);
    let mut best = (0usize, 0usize, 0.0f64);
    for x in 0..n {
        let dx: Vec<f64> = (0..n).map(|y| m.dist(x, y)).collect();
        let mut bps: Vec<f64> = dx.iter().chain(&weights).copied().collect();
        bps.sort_unstable_by(f64::total_cmp);
        bps.dedup();
        let mut radii = Vec::with_capacity(11 * bps.len());
        for k in 0..bps.len() {
            radii.push(bps[k]);
            if k + 1 < bps.len() {
                for j in 1..=10 {
                    radii.push(bps[k] + (bps[k + 1] - bps[k]) * j as f64 / 11.0);
                }
            }
        }
        for r in radii {
            let c = g
                .edges()
                .iter()
                .filter(|e| e.w >= r && ((dx[e.u] <= r) != (dx[e.v] <= r)))
                .count();
            if c > best.0 {
                best = (c, x, r);
            }
        }
    }
    let mut rep = CheckReport::new("lankiness_dense", true, best.0 as f64, None);
    if best.0 > 0 {
        rep = rep.witness(lanky_witness(g, m, best.1, best.2));
    }
    rep
}

pub fn measure_weak_lankiness(g: &WeightedGraph, m: &MetricInput) -> CheckReport {
    measure_weak_lankiness_with(g, m, &LankinessOptions::default())
}

/// Largest number of vertices inside `B(x, r)` incident to a cut edge of
/// length at least `r`.
///
/// For a fixed center all intervals of an inside vertex `a` start at
/// `δ(x, a)`, so `a` is counted on one interval reaching the furthest end.
pub fn measure_weak_lankiness_with(
    g: &WeightedGraph,
    m: &MetricInput,
    opts: &LankinessOptions,
) -> CheckReport {
    let n = m.len();
    let weights = sorted_weights(g);
    let cs = centers(n, opts);
    let mut best = (0usize, 0usize, 0.0f64);
    for &x in &cs {
        let dx: Vec<f64> = (0..n).map(|y| m.dist(x, y)).collect();
        // furthest end per vertex, and whether that end is included
        let mut reach: Vec<Option<(f64, bool)>> = vec![None; n];
        for e in g.edges() {
            let (a, b) = if dx[e.u] <= dx[e.v] { (e.u, e.v) } else { (e.v, e.u) };
            if dx[a] == dx[b] {
                continue;
            }
            let (s, t, closed) = edge_interval(dx[a], dx[b], e.w);
            if (closed && t < s) || (!closed && t <= s) {
                continue;
            }
            reach[a] = Some(match reach[a] {
                None => (t, closed),
                Some((t0, c0)) => match t.total_cmp(&t0) {
                    Ordering::Greater => (t, closed),
                    Ordering::Equal => (t0, c0 || closed),
                    Ordering::Less => (t0, c0),
                },
            });
        }
        let mut iv = Intervals::default();
        for (a, r) in reach.iter().enumerate() {
            if let Some((t, closed)) = *r {
                iv.push(dx[a], t, closed);
            }
        }
        iv.finish();
        for r in candidate_radii(&dx, &weights) {
            let c = iv.count(r);
            if c > best.0 {
                best = (c, x, r);
            }
        }
    }
    let (c, x, r) = best;
    let mut rep = CheckReport::new("weak_lankiness", true, c as f64, None).note(format!(
        "{} centers{}",
        cs.len(),
        if cs.len() == n { ", exact" } else { ", sampled" }
    ));
    if c > 0 {
        let verts: Vec<usize> = (0..n)
            .filter(|&a| {
                m.dist(x, a) <= r
                    && g.neighbors(a)
                        .iter()
                        .any(|&(b, k)| m.dist(x, b) > r && g.edges()[k].w >= r)
            })
            .collect();
        rep = rep.witness(Witness {
            center: Some(x),
            radius: Some(r),
            vertices: verts,
            ..Witness::default()
        });
    }
    rep
}

// ---------------------------------------------------------------------------
// separated pairs and thinness

fn crossing_edges(g: &WeightedGraph, a: &[usize], b: &[usize], mark: &mut [u8]) -> Vec<Edge> {
    for &x in a {
        mark[x] = 1;
    }
    for &y in b {
        mark[y] = 2;
    }
    let (small, want) = if a.len() <= b.len() { (a, 2) } else { (b, 1) };
    let mut out = Vec::new();
    for &x in small {
        for &(y, k) in g.neighbors(x) {
            if mark[y] == want {
                out.push(g.edges()[k]);
            }
        }
    }
    for &x in a.iter().chain(b) {
        mark[x] = 0;
    }
    out
}

/// Number of `g` edges with one endpoint in `a` and the other in `b`.
pub fn count_crossing_edges(g: &WeightedGraph, a: &[usize], b: &[usize]) -> usize {
    let mut mark = vec![0u8; g.n()];
    crossing_edges(g, a, b, &mut mark).len()
}

/// Largest number of edges crossing one pair of an `s`-WSPD. Passes when it
/// is at most `max_allowed` (if given).
pub fn max_edges_per_wspd_pair(
    g: &WeightedGraph,
    m: &MetricInput,
    tree: &NetHierarchy,
    s: f64,
    max_allowed: Option<usize>,
) -> CheckReport {
    let pairs = build_wspd(m, tree, s);
    let mut mark = vec![0u8; g.n()];
    let mut worst: (usize, Vec<Edge>) = (0, Vec::new());
    for p in &pairs {
        let cross = crossing_edges(g, &p.a, &p.b, &mut mark);
        if cross.len() > worst.0 {
            worst = (cross.len(), cross);
        }
    }
    let passed = max_allowed.is_none_or(|k| worst.0 <= k);
    let mut rep = CheckReport::new(
        "edges_per_separated_pair",
        passed,
        worst.0 as f64,
        max_allowed.map(|k| k as f64),
    )
    .note(format!("{} pairs at s = {s}", pairs.len()));
    if worst.0 > 0 {
        rep = rep.witness(Witness::default().with_edges(&worst.1));
    }
    rep
}

#[derive(Clone, Copy, Debug)]
pub struct ThinnessOptions {
    pub ball_pairs: usize,
    pub seed: u64,
}

impl Default for ThinnessOptions {
    fn default() -> Self {
        Self {
            ball_pairs: 10_000,
            seed: 0,
        }
    }
}

pub fn measure_thinness(g: &WeightedGraph, m: &MetricInput, tree: &NetHierarchy) -> CheckReport {
    measure_thinness_with(g, m, tree, &ThinnessOptions::default())
}

/// Largest number of edges crossing a 1-separated pair, over every pair of a
/// 1-WSPD and a batch of random ball pairs. For vertices `p, q` at distance
/// `D` and a radius `ρ ≤ D / 4`, the balls `B(p, ρ)` and `B(q, ρ)` are
/// 1-separated.
pub fn measure_thinness_with(
    g: &WeightedGraph,
    m: &MetricInput,
    tree: &NetHierarchy,
    opts: &ThinnessOptions,
) -> CheckReport {
    let mut rep = max_edges_per_wspd_pair(g, m, tree, 1.0, None);
    let n = m.len();
    let mut worst = rep.measured as usize;
    if n >= 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut mark = vec![0u8; n];
        for _ in 0..opts.ball_pairs {
            let p = rng.gen_range(0..n);
            let mut q = rng.gen_range(0..n - 1);
            if q >= p {
                q += 1;
            }
            let rho = m.dist(p, q) / 4.0 * rng.gen_range(0.25..=1.0);
            let a: Vec<usize> = (0..n).filter(|&x| m.dist(p, x) <= rho).collect();
            let b: Vec<usize> = (0..n).filter(|&x| m.dist(q, x) <= rho).collect();
            let cross = crossing_edges(g, &a, &b, &mut mark);
            if cross.len() > worst {
                worst = cross.len();
                rep.witness = Some(Witness {
                    center: Some(p),
                    radius: Some(rho),
                    vertices: vec![p, q],
                    ..Witness::default()
                }
                .with_edges(&cross));
            }
        }
    }
    rep.check_name = "thinness".into();
    rep.measured = worst as f64;
    rep.note = Some(format!(
        "{}, plus {} ball pairs",
        rep.note.unwrap_or_default(),
        opts.ball_pairs
    ));
    rep
}

// ---------------------------------------------------------------------------
// separators

/// Re-derives the ball, the separation, the balance and the radius law of a
/// separator from scratch.
pub fn verify_separator(
    res: &SeparatorResult,
    g: &WeightedGraph,
    m: &MetricInput,
    params: &PackingParams,
) -> CheckReport {
    let n = m.len();
    let mut problems: Vec<String> = Vec::new();
    let mut bad_edges = Vec::new();
    let mut in_s = vec![false; n];
    for &x in &res.s {
        if x >= n {
            problems.push(format!("separator vertex {x} out of range"));
        } else {
            in_s[x] = true;
        }
    }
    let c = res.center;
    let (r, rs) = (res.base_radius, res.final_radius);
    if c >= n {
        problems.push(format!("center {c} out of range"));
        return CheckReport::new("separator", false, f64::NAN, None).note(problems.join("; "));
    }
    if !(r > 0.0 && r <= rs && rs <= 2.0 * r) {
        problems.push(format!("radius law violated: r = {r}, r* = {rs}"));
    }
    let inside: Vec<bool> = (0..n).map(|x| m.dist(c, x) <= rs).collect();
    for e in g.edges() {
        if !in_s[e.u] && !in_s[e.v] && inside[e.u] != inside[e.v] {
            bad_edges.push(*e);
        }
    }
    if !bad_edges.is_empty() {
        problems.push(format!("{} edges join inside and outside", bad_edges.len()));
    }
    let inside_count = inside.iter().filter(|&&b| b).count();
    let min_inside = (n as f64 / (2.0 * params.lambda)).ceil() as usize;
    if inside_count < min_inside {
        problems.push(format!("ball holds {inside_count} < {min_inside} vertices"));
    }
    if 2 * inside_count > n {
        problems.push(format!("ball holds {inside_count} > n/2 vertices"));
    }
    let sizes = component_sizes(g, &in_s);
    let largest = sizes.first().copied().unwrap_or(0);
    let allowed = n - min_inside;
    if largest > allowed {
        problems.push(format!("largest component {largest} > {allowed}"));
    }
    let mut reported = res.components.clone();
    reported.sort_unstable_by(|a, b| b.cmp(a));
    if reported != sizes {
        problems.push("reported component sizes differ from recomputed ones".into());
    }
    let passed = problems.is_empty();
    let mut rep = CheckReport::new("separator", passed, largest as f64, Some(allowed as f64))
        .note(if passed {
            format!("|S| = {}", res.s.len())
        } else {
            problems.join("; ")
        });
    if !passed {
        rep = rep.witness(
            Witness {
                center: Some(c),
                radius: Some(rs),
                ..Witness::default()
            }
            .with_edges(&bad_edges),
        );
    }
    rep
}

// ---------------------------------------------------------------------------
// cone property

/// Ancestor of every vertex at every level of the net tree.
fn ancestors(tree: &NetHierarchy, n: usize) -> Vec<Vec<usize>> {
    let mut anc = vec![(0..n).collect::<Vec<usize>>()];
    for i in 0..tree.top() {
        let parent: HashMap<usize, usize> = tree.levels[i]
            .iter()
            .copied()
            .zip(tree.parents[i].iter().copied())
            .collect();
        let next = anc[i].iter().map(|a| parent[a]).collect();
        anc.push(next);
    }
    anc
}

/// Samples `trials` pairs `(X, Y)` with `diam(X) ≤ eps · R / 12` and
/// `δ(X, Y) ≥ R` and checks that, around every apex `x ∈ X`, each of the
/// `⌈2π / (eps/8)⌉` equal angular sectors holds the `Y` endpoint of at most one
/// `X`–`Y` edge.
///
/// `X` is a net-tree cluster and `R = 12 · max(diam X, r_i) / eps` for its
/// level `i`. Most trials are anchored at a random edge `(a, b)`: the
/// cluster of `a` is taken at the highest level where `b` still lies in `Y`.
pub fn verify_cone_property(
    g: &WeightedGraph,
    m: &MetricInput,
    tree: &NetHierarchy,
    eps: f64,
    trials: usize,
    seed: u64,
) -> CheckReport {
    let n = m.len();
    let coords = match m.kind() {
        MetricKind::Euclidean { dim: 2, coords } | MetricKind::UnitBall { dim: 2, coords, .. } => {
            coords
        }
        _ => {
            return CheckReport::new("cone_property", false, f64::NAN, Some(1.0))
                .note("needs two-dimensional points")
        }
    };
    let sectors = (2.0 * std::f64::consts::PI / (eps / 8.0)).ceil() as usize;
    let width = 2.0 * std::f64::consts::PI / sectors as f64;
    let anc = ancestors(tree, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0usize;
    let mut witness = None;
    let mut with_edges = 0usize;
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < trials && attempts < 50 * trials.max(1) && n >= 2 {
        attempts += 1;
        let anchored = g.num_edges() > 0 && !attempts.is_multiple_of(4);
        let (level, rep, target) = if anchored {
            let e = g.edges()[rng.gen_range(0..g.num_edges())];
            let (a, b) = if rng.gen::<bool>() { (e.u, e.v) } else { (e.v, e.u) };
            let mut pick = None;
            for i in (0..anc.len()).rev() {
                let x: Vec<usize> = (0..n).filter(|&y| anc[i][y] == anc[i][a]).collect();
                let rr = 12.0 * crate::metric::diameter(m, &x).max(tree.radius(i)) / eps;
                if x.iter().all(|&y| m.dist(y, b) >= rr) {
                    pick = Some((i, anc[i][a]));
                    break;
                }
            }
            match pick {
                Some((i, c)) => (i, c, Some(b)),
                None => continue,
            }
        } else {
            let i = rng.gen_range(0..anc.len());
            let c = tree.levels[i][rng.gen_range(0..tree.levels[i].len())];
            (i, c, None)
        };
        let x: Vec<usize> = (0..n).filter(|&y| anc[level][y] == rep).collect();
        let diam = crate::metric::diameter(m, &x);
        let rr = 12.0 * diam.max(tree.radius(level)) / eps;
        let in_x: Vec<bool> = {
            let mut v = vec![false; n];
            for &y in &x {
                v[y] = true;
            }
            v
        };
        let in_y: Vec<bool> = (0..n)
            .map(|y| !in_x[y] && x.iter().all(|&z| m.dist(z, y) >= rr))
            .collect();
        debug_assert!(target.is_none_or(|b| in_y[b]));
        let xy: Vec<Edge> = g
            .edges()
            .iter()
            .filter(|e| (in_x[e.u] && in_y[e.v]) || (in_x[e.v] && in_y[e.u]))
            .copied()
            .collect();
        done += 1;
        if xy.is_empty() {
            continue;
        }
        with_edges += 1;
        for &apex in &x {
            let mut counts: HashMap<usize, Vec<Edge>> = HashMap::new();
            for e in &xy {
                let yv = if in_y[e.u] { e.u } else { e.v };
                let dx = coords[2 * yv] - coords[2 * apex];
                let dy = coords[2 * yv + 1] - coords[2 * apex + 1];
                let mut ang = dy.atan2(dx);
                if ang < 0.0 {
                    ang += 2.0 * std::f64::consts::PI;
                }
                let k = ((ang / width) as usize).min(sectors - 1);
                counts.entry(k).or_default().push(*e);
            }
            for (_, es) in counts {
                if es.len() > worst {
                    worst = es.len();
                    witness = Some(
                        Witness {
                            center: Some(apex),
                            radius: Some(rr),
                            vertices: x.clone(),
                            ..Witness::default()
                        }
                        .with_edges(&es),
                    );
                }
            }
        }
    }
    let passed = worst <= 1 && done == trials;
    let mut rep = CheckReport::new("cone_property", passed, worst as f64, Some(1.0)).note(format!(
        "{done} configurations, {with_edges} with X-Y edges, {sectors} sectors"
    ));
    if worst > 1 {
        rep.witness = witness;
    }
    rep
}

// ---------------------------------------------------------------------------
// bounded-degree spanner checks

/// Checks every rerouted edge `(v → w) ↦ (v → u)`:
/// `δ(u, w) ≤ eps · δ(v, w)` and `δ(v, w) ≥ δ(v, u) / (1 + eps)`, and that
/// `(u, w)` and `(v, w)` are edges of `g1` oriented into `w`. The measured
/// value is the largest `δ(u, w) / (eps · δ(v, w))`.
pub fn verify_reroute_claims(m: &MetricInput, os: &OrientedSpanner, eps: f64) -> CheckReport {
    let into: std::collections::HashSet<(usize, usize)> = os.orientation.iter().copied().collect();
    let mut worst = 0.0f64;
    let mut bad = None;
    for r in &os.reroute_log {
        let (uw, vw, vu) = (m.dist(r.u, r.w), m.dist(r.v, r.w), m.dist(r.v, r.u));
        let ratio = uw / (eps * vw);
        worst = worst.max(ratio);
        let ok = uw <= eps * vw * (1.0 + TOL)
            && vw * (1.0 + TOL) >= vu / (1.0 + eps)
            && into.contains(&(r.u, r.w))
            && into.contains(&(r.v, r.w));
        if !ok && bad.is_none() {
            bad = Some(r);
        }
    }
    let mut rep = CheckReport::new("reroute_claims", bad.is_none(), worst, Some(1.0))
        .note(format!("{} rerouted edges", os.reroute_log.len()));
    if let Some(r) = bad {
        rep = rep.witness(Witness {
            vertices: vec![r.v, r.w, r.u],
            ..Witness::default()
        });
    }
    rep
}

/// For every vertex center `p` and radius `r`, at most one vertex of
/// `B(p, r)` may be incident to an edge of `g1` of length at least `4γr`.
/// Vertex `y` qualifies exactly for `r ∈ [δ(p, y), L(y) / 4γ]`, `L(y)` being
/// its longest incident edge, so all radii are covered by an interval sweep.
pub fn verify_long_edge_endpoints(g1: &WeightedGraph, m: &MetricInput, gamma: f64) -> CheckReport {
    let n = m.len();
    let longest: Vec<f64> = (0..n)
        .map(|y| {
            g1.neighbors(y)
                .iter()
                .map(|&(_, k)| g1.edges()[k].w)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let mut worst = (0usize, 0usize, 0.0f64);
    for p in 0..n {
        let mut iv = Intervals::default();
        let mut starts = Vec::new();
        for y in 0..n {
            let s = m.dist(p, y);
            let t = longest[y] / (4.0 * gamma);
            if t >= s {
                iv.push(s, t, true);
                starts.push(s);
            }
        }
        iv.finish();
        for s in starts {
            let c = iv.count(s);
            if c > worst.0 {
                worst = (c, p, s);
            }
        }
    }
    let mut rep = CheckReport::new("long_edge_endpoints", worst.0 <= 1, worst.0 as f64, Some(1.0));
    if worst.0 > 1 {
        let (_, p, r) = worst;
        let verts = (0..n)
            .filter(|&y| m.dist(p, y) <= r && longest[y] >= 4.0 * gamma * r)
            .collect();
        rep = rep.witness(Witness {
            center: Some(p),
            radius: Some(r),
            vertices: verts,
            ..Witness::default()
        });
    }
    rep
}

// ---------------------------------------------------------------------------
// counts

/// `|E| / n`, compared against `bound` when one is given.
pub fn count_edges(g: &WeightedGraph, bound: Option<f64>) -> CheckReport {
    let ratio = if g.n() == 0 {
        0.0
    } else {
        g.num_edges() as f64 / g.n() as f64
    };
    let passed = bound.is_none_or(|b| ratio <= b);
    CheckReport::new("edges_per_vertex", passed, ratio, bound)
        .note(format!("{} edges on {} vertices", g.num_edges(), g.n()))
}

pub fn max_degree(g: &WeightedGraph, bound: Option<f64>) -> CheckReport {
    let mut deg = vec![0usize; g.n()];
    for e in g.edges() {
        deg[e.u] += 1;
        deg[e.v] += 1;
    }
    let (arg, best) = deg
        .iter()
        .enumerate()
        .max_by_key(|&(i, &d)| (d, std::cmp::Reverse(i)))
        .map(|(i, &d)| (i, d))
        .unwrap_or((0, 0));
    let passed = bound.is_none_or(|b| best as f64 <= b);
    CheckReport::new("max_degree", passed, best as f64, bound).witness(Witness {
        vertices: vec![arg],
        ..Witness::default()
    })
}

/// Largest r-separated subset found inside sampled balls `B(p, R)`, relative to
/// `eta · (R/r)^d`. Violations are reported in the note and never fail the check.
pub fn packing_report(m: &MetricInput, params: &PackingParams, samples: usize, seed: u64) -> CheckReport {
    let n = m.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut violations = 0usize;
    for _ in 0..samples {
        if n < 2 {
            break;
        }
        let p = rng.gen_range(0..n);
        let q = rng.gen_range(0..n);
        let big = m.dist(p, q).max(1.0);
        let small = big / 2f64.powi(rng.gen_range(1..5));
        let members: Vec<usize> = (0..n).filter(|&x| m.dist(p, x) <= big).collect();
        let mut net: Vec<usize> = Vec::new();
        for x in members {
            if net.iter().all(|&y| m.dist(x, y) > small) {
                net.push(x);
            }
        }
        let allowed = params.eta * (big / small).powf(params.d);
        let ratio = net.len() as f64 / allowed;
        worst = worst.max(ratio);
        if ratio > 1.0 {
            violations += 1;
        }
    }
    CheckReport::new("packing", true, worst, Some(1.0))
        .note(format!("{violations} of {samples} samples above eta (R/r)^d"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{build_net_tree, load_and_normalize};

    fn pts2(p: &[[f64; 2]]) -> MetricInput {
        load_and_normalize(MetricInput::euclidean(p).unwrap()).unwrap()
    }

    fn star() -> (WeightedGraph, MetricInput) {
        let m = pts2(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]);
        let g = WeightedGraph::from_edges(4, (1..4).map(|x| Edge::new(0, x, 1.0)));
        (g, m)
    }

    #[test]
    fn star_lankiness() {
        let (g, m) = star();
        let rep = measure_lankiness(&g, &m);
        assert_eq!(rep.measured, 3.0);
        assert_eq!(rep.witness.unwrap().center, Some(0));
        assert_eq!(measure_weak_lankiness(&g, &m).measured, 1.0);
        assert_eq!(measure_lankiness_dense(&g, &m).measured, 3.0);
    }

    #[test]
    fn single_edge_lankiness() {
        let m = pts2(&[[0.0, 0.0], [1.0, 0.0]]);
        let g = WeightedGraph::from_edges(2, [Edge::new(0, 1, 1.0)]);
        assert_eq!(measure_lankiness(&g, &m).measured, 1.0);
        assert_eq!(measure_thinness(&g, &m, &build_net_tree(&m)).measured, 1.0);
    }

    #[test]
    fn stretch_of_square_mst() {
        let m = pts2(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        let full = WeightedGraph::from_edges(
            4,
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
                .map(|(a, b)| Edge::new(a, b, m.dist(a, b))),
        );
        let rep = verify_stretch(&full, Host::Metric(&m), 1.0);
        assert!(rep.passed);
        assert_eq!(rep.measured, 1.0);
        let mst = WeightedGraph::from_edges(4, [Edge::new(0, 1, 1.0), Edge::new(0, 2, 1.0), Edge::new(1, 3, 1.0)]);
        let rep = verify_stretch(&mst, Host::Metric(&m), 1.1);
        assert!(!rep.passed);
        assert!(rep.measured >= 2.0 / 2f64.sqrt() - 1e-12);
        let disc = WeightedGraph::from_edges(4, [Edge::new(0, 1, 1.0)]);
        let rep = verify_stretch(&disc, Host::Metric(&m), 2.0);
        assert!(!rep.passed);
        assert_eq!(rep.measured, f64::INFINITY);
    }

    #[test]
    fn greedy_edge_property_catches_redundancy() {
        let path = WeightedGraph::from_edges(3, [Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)]);
        assert!(verify_greedy_edge_property(&path, 1.5).passed);
        let mut bad = path.clone();
        bad.add_edge(0, 2, 1.9);
        let rep = verify_greedy_edge_property(&bad, 1.5);
        assert!(!rep.passed);
        assert_eq!(rep.witness.unwrap().edges, vec![[0.0, 2.0, 1.9]]);
    }

    #[test]
    fn kruskal_on_a_square() {
        let es = [(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0), (0, 3, 1.5), (1, 2, 1.5)]
            .map(|(a, b, w)| Edge::new(a, b, w));
        let t = kruskal_forest(4, &es);
        assert_eq!(t.len(), 3);
        assert_eq!(t.iter().map(|e| e.w).sum::<f64>(), 3.0);
        assert_eq!(t[2], Edge::new(1, 3, 1.0));
    }

    #[test]
    fn fabricated_cone_violation() {
        let m = pts2(&[[0.0, 0.0], [100.0, 0.0], [100.0, 1.0]]);
        let g = WeightedGraph::from_edges(3, [Edge::new(0, 1, m.dist(0, 1)), Edge::new(0, 2, m.dist(0, 2))]);
        let tree = build_net_tree(&m);
        let rep = verify_cone_property(&g, &m, &tree, 0.5, 20, 1);
        assert!(!rep.passed);
        assert_eq!(rep.measured, 2.0);
        let one = WeightedGraph::from_edges(3, [Edge::new(0, 1, m.dist(0, 1))]);
        assert!(verify_cone_property(&one, &m, &tree, 0.5, 20, 1).passed);
    }

    #[test]
    fn separator_checks() {
        let m = pts2(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]);
        let g = WeightedGraph::from_edges(4, (1..4).map(|x| Edge::new(x - 1, x, 1.0)));
        let params = PackingParams::euclidean(1.0);
        let good = SeparatorResult {
            s: vec![1, 2],
            center: 0,
            base_radius: 1.0,
            final_radius: 1.5,
            sigma: 0.5,
            cut_edges: vec![Edge::new(1, 2, 1.0)],
            short_cut_edges: vec![Edge::new(1, 2, 1.0)],
            inside_count: 2,
            components: vec![1, 1],
        };
        assert!(verify_separator(&good, &g, &m, &params).passed);
        let mut bad = good.clone();
        bad.s = vec![];
        bad.components = vec![4];
        let rep = verify_separator(&bad, &g, &m, &params);
        assert!(!rep.passed);
        let mut bad_radius = good.clone();
        bad_radius.final_radius = 2.5;
        assert!(!verify_separator(&bad_radius, &g, &m, &params).passed);
        // Already disconnected: an empty separator is fine when the parts are small.
        let split = WeightedGraph::from_edges(4, [Edge::new(0, 1, 1.0), Edge::new(2, 3, 1.0)]);
        let empty = SeparatorResult {
            s: vec![],
            components: vec![2, 2],
            cut_edges: vec![],
            short_cut_edges: vec![],
            ..good
        };
        assert!(verify_separator(&empty, &split, &m, &params).passed);
    }

    #[test]
    fn edge_counts() {
        let tree = WeightedGraph::from_edges(4, (1..4).map(|x| Edge::new(0, x, 1.0)));
        assert_eq!(count_edges(&tree, Some(1.0)).measured, 0.75);
        let mut k5 = WeightedGraph::new(5);
        for a in 0..5 {
            for b in a + 1..5 {
                k5.add_edge(a, b, 1.0);
            }
        }
        let rep = count_edges(&k5, Some(1.5));
        assert_eq!(rep.measured, 2.0);
        assert!(!rep.passed);
        assert_eq!(max_degree(&k5, None).measured, 4.0);
    }
}
