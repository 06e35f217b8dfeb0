//! Bounded-degree spanner for doubling metrics built on the net tree.
//!
//! Step 1 joins every pair of level-`i` net points within `γ · r_i`, keeping
//! each pair at the first level where it qualifies, and orients every edge
//! from the endpoint with the lower top level. Step 2 caps in-degrees: a
//! vertex keeps its in-edges from its first `ℓ` in-neighbor levels and
//! redirects the in-edges of every later level to one of its in-neighbors
//! `ℓ` levels further down.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::greedy::check_eps;
use crate::metric::{build_net_tree, MetricInput, NetHierarchy};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgmzConfig {
    eps: f64,
    gamma: f64,
    ell: usize,
}

impl CgmzConfig {
    pub fn new(eps: f64) -> Result<Self> {
        check_eps(eps)?;
        Ok(Self {
            eps,
            gamma: 4.0 + 32.0 / eps,
            ell: (1.0 / eps).ceil() as usize + 1,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Cross-edge reach factor `4 + 32/eps`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of in-neighbor levels kept verbatim, `⌈1/eps⌉ + 1`.
    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Stretch guaranteed for the output, `1 + 4 eps`.
    pub fn stretch(&self) -> f64 {
        1.0 + 4.0 * self.eps
    }
}

/// One redirected edge: `(v → w)` at `level` was replaced by `(v → u)`,
/// where `u` is an in-neighbor of `w` at `target_level`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reroute {
    pub v: usize,
    pub w: usize,
    pub u: usize,
    pub level: usize,
    pub target_level: usize,
}

#[derive(Clone, Debug)]
pub struct OrientedSpanner {
    pub g1: WeightedGraph,
    /// `(from, to)` per edge of `g1`, aligned with `g1.edges()`.
    pub orientation: Vec<(usize, usize)>,
    /// Level of each `g1` edge, aligned with `g1.edges()`.
    pub cross_level: Vec<usize>,
    /// `in_neighbors[w][i]`: tails of the level-`i` edges oriented into `w`, ascending.
    pub in_neighbors: Vec<BTreeMap<usize, Vec<usize>>>,
    pub g2: WeightedGraph,
    /// Orientation of each `g2` edge, aligned with `g2.edges()`.
    pub g2_orientation: Vec<(usize, usize)>,
    pub reroute_log: Vec<Reroute>,
}

impl OrientedSpanner {
    pub fn in_neighbors(&self, w: usize, level: usize) -> &[usize] {
        self.in_neighbors[w]
            .get(&level)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Largest `|N_i^in(w)|` over all vertices and levels.
    pub fn max_in_level_size(&self) -> usize {
        self.in_neighbors
            .iter()
            .flat_map(|m| m.values().map(Vec::len))
            .max()
            .unwrap_or(0)
    }

    /// Largest out-degree of the oriented `g1`.
    pub fn max_out_degree_g1(&self) -> usize {
        let mut out = vec![0usize; self.g1.n()];
        for &(a, _) in &self.orientation {
            out[a] += 1;
        }
        out.into_iter().max().unwrap_or(0)
    }
}

/// Smallest level `i` with `d ≤ γ · r_i`.
fn first_level(tree: &NetHierarchy, gamma: f64, d: f64) -> usize {
    let mut i = 0;
    while d > gamma * tree.radius(i) {
        i += 1;
    }
    i
}

/// Cross edges and their orientation. A pair `{u, v}` belongs to `E_i` for the
/// first level `i` with `δ(u, v) ≤ γ r_i`, provided both endpoints are still in
/// `N_i`; otherwise it is never a cross edge since nets only shrink.
pub fn cgmz_step1(m: &MetricInput, tree: &NetHierarchy, cfg: &CgmzConfig) -> OrientedSpanner {
    let n = m.len();
    let mut g1 = WeightedGraph::new(n);
    let mut orientation = Vec::new();
    let mut cross_level = Vec::new();
    let mut in_neighbors: Vec<BTreeMap<usize, Vec<usize>>> = vec![BTreeMap::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            let d = m.dist(u, v);
            let level = first_level(tree, cfg.gamma, d);
            if level > tree.istar[u].min(tree.istar[v]) {
                continue;
            }
            let (from, to) = if tree.istar[u] < tree.istar[v] {
                (u, v)
            } else if tree.istar[u] > tree.istar[v] {
                (v, u)
            } else {
                (u, v)
            };
            g1.push_new_edge(u, v, d);
            orientation.push((from, to));
            cross_level.push(level);
            in_neighbors[to].entry(level).or_default().push(from);
        }
    }
    for map in &mut in_neighbors {
        for list in map.values_mut() {
            list.sort_unstable();
        }
    }
    OrientedSpanner {
        g1,
        orientation,
        cross_level,
        in_neighbors,
        g2: WeightedGraph::new(n),
        g2_orientation: Vec::new(),
        reroute_log: Vec::new(),
    }
}

/// In-degree reduction. For each `w` with in-neighbor levels `i_1 < … < i_m`,
/// the in-edges of rank `j ≤ ℓ` are copied; for `j > ℓ` each `(v → w)` at
/// level `i_j` becomes `(v → u)` with `u` the smallest-id in-neighbor of `w`
/// at level `i_{j−ℓ}`. Parallel edges are merged.
pub fn cgmz_step2(m: &MetricInput, mut os: OrientedSpanner, cfg: &CgmzConfig) -> OrientedSpanner {
    let n = m.len();
    let mut g2 = WeightedGraph::new(n);
    let mut g2_orientation = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut log = Vec::new();
    let mut add = |from: usize, to: usize, g2: &mut WeightedGraph| {
        let key = (from.min(to), from.max(to));
        if seen.insert(key) {
            g2.push_new_edge(from, to, m.dist(from, to));
            g2_orientation.push((from, to));
        }
    };
    for w in 0..n {
        let levels: Vec<usize> = os.in_neighbors[w].keys().copied().collect();
        for (rank, &level) in levels.iter().enumerate() {
            let tails = &os.in_neighbors[w][&level];
            if rank < cfg.ell {
                for &v in tails {
                    add(v, w, &mut g2);
                }
            } else {
                let target_level = levels[rank - cfg.ell];
                let u = os.in_neighbors[w][&target_level][0];
                for &v in tails {
                    add(v, u, &mut g2);
                    log.push(Reroute {
                        v,
                        w,
                        u,
                        level,
                        target_level,
                    });
                }
            }
        }
    }
    os.g2 = g2;
    os.g2_orientation = g2_orientation;
    os.reroute_log = log;
    os
}

/// Both steps on a fresh net tree.
pub fn cgmz_build(m: &MetricInput, cfg: &CgmzConfig) -> (NetHierarchy, OrientedSpanner) {
    let tree = build_net_tree(m);
    let os = cgmz_step1(m, &tree, cfg);
    let os = cgmz_step2(m, os, cfg);
    (tree, os)
}

/// The final undirected spanner `g2`.
pub fn cgmz_spanner(m: &MetricInput, cfg: &CgmzConfig) -> WeightedGraph {
    cgmz_build(m, cfg).1.g2
}
