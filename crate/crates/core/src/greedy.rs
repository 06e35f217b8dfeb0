//! Path-greedy spanners.

use crate::error::{Error, Result};
use crate::graph::{shortest_path_dist, UnionFind, WeightedGraph};
use crate::metric::MetricInput;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Equal weights are scanned in lexicographic `(u, v)` order.
    #[default]
    ByIndexPair,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreedyConfig {
    pub eps: f64,
    pub tie_break: TieBreak,
}

impl GreedyConfig {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            tie_break: TieBreak::ByIndexPair,
        }
    }

    /// Target stretch `1 + eps`.
    pub fn t(&self) -> f64 {
        1.0 + self.eps
    }

    pub fn validate(&self) -> Result<()> {
        check_eps(self.eps)
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1/2], got {eps}"
        )))
    }
}

#[derive(Clone, Debug)]
pub struct GreedyOutput {
    pub graph: WeightedGraph,
    /// False when the unit ball host graph has several components. The
    /// spanner then spans each component separately.
    pub host_connected: bool,
    /// Number of shortest-path searches run during the scan.
    pub searches: usize,
}

#[derive(Clone, Copy)]
struct Candidate {
    w: f64,
    u: u32,
    v: u32,
}

/// Candidate pairs in scan order: all pairs, or only intersecting balls for a
/// unit ball graph.
fn candidates(m: &MetricInput) -> Vec<Candidate> {
    let n = m.len();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if m.host_adjacent(u, v) {
                out.push(Candidate {
                    w: m.dist(u, v),
                    u: u as u32,
                    v: v as u32,
                });
            }
        }
    }
    out.sort_unstable_by(|a, b| {
        a.w.total_cmp(&b.w)
            .then(a.u.cmp(&b.u))
            .then(a.v.cmp(&b.v))
    });
    out
}

/// The graph whose distances the spanner approximates: the complete graph for
/// Euclidean and matrix inputs, the intersection graph for unit ball inputs.
pub fn host_graph(m: &MetricInput) -> WeightedGraph {
    let mut g = WeightedGraph::new(m.len());
    for c in candidates(m) {
        g.add_edge(c.u as usize, c.v as usize, c.w);
    }
    g
}

pub fn greedy_spanner(m: &MetricInput, cfg: &GreedyConfig) -> Result<WeightedGraph> {
    Ok(greedy_spanner_detailed(m, cfg)?.graph)
}

/// Path-greedy spanner. An edge is added iff the current spanner distance
/// between its endpoints exceeds `(1 + eps) · w`.
///
/// Spanner distances are cached in an `n × n` table of upper bounds that is
/// refreshed one row at a time: a pair whose cached bound is already at most
/// `t · w` is skipped without a search, otherwise a full search from `u`
/// refreshes row `u` and decides the pair exactly. Because the spanner only
/// grows, cached values never underestimate, so the decisions match the plain
/// greedy scan.
pub fn greedy_spanner_detailed(m: &MetricInput, cfg: &GreedyConfig) -> Result<GreedyOutput> {
    cfg.validate()?;
    let n = m.len();
    let t = cfg.t();
    let cands = candidates(m);
    let mut g = WeightedGraph::new(n);
    let mut bound = vec![f64::INFINITY; n * n];
    for x in 0..n {
        bound[x * n + x] = 0.0;
    }
    let mut host = UnionFind::new(n);
    let mut host_parts = n;
    let mut searches = 0;
    for c in &cands {
        let (u, v) = (c.u as usize, c.v as usize);
        if host.union(u, v) {
            host_parts -= 1;
        }
        let limit = t * c.w;
        if bound[u * n + v] <= limit {
            continue;
        }
        searches += 1;
        let dist = g.dijkstra(u, None);
        for (x, &d) in dist.iter().enumerate() {
            if d < bound[u * n + x] {
                bound[u * n + x] = d;
                bound[x * n + u] = d;
            }
        }
        if dist[v] > limit {
            g.add_edge(u, v, c.w);
            bound[u * n + v] = c.w;
            bound[v * n + u] = c.w;
        }
    }
    Ok(GreedyOutput {
        graph: g,
        host_connected: host_parts <= 1,
        searches,
    })
}

/// Literal greedy scan with one bounded search per candidate. Quadratic
/// searches, meant as a reference for small inputs.
pub fn greedy_spanner_reference(m: &MetricInput, cfg: &GreedyConfig) -> Result<WeightedGraph> {
    cfg.validate()?;
    let t = cfg.t();
    let mut g = WeightedGraph::new(m.len());
    for c in candidates(m) {
        let (u, v) = (c.u as usize, c.v as usize);
        if shortest_path_dist(&g, u, v, Some(t * c.w)) > t * c.w {
            g.add_edge(u, v, c.w);
        }
    }
    Ok(g)
}
