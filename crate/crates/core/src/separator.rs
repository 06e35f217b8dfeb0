//! Balanced separators from a randomly sized ball.
//!
//! A center `v` and base radius `r` are chosen so that `B(v, r)` holds at
//! least `n / 2λ` vertices while `B(v, 2r)` holds at most half of them. The
//! ball `B(v, r*)` with `r* = (1 + σ) r`, `σ` uniform in `[0, 1)`, then splits
//! the vertices, and removing endpoints of the edges it cuts disconnects the
//! inside from the outside.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::metric::MetricInput;
use crate::stats::mix64;

/// Packing parameters of the underlying metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingParams {
    /// Packing dimension.
    pub d: f64,
    /// Packing constant.
    pub eta: f64,
    /// Doubling constant used for the balance threshold.
    pub lambda: f64,
}

impl PackingParams {
    /// Defaults for `d`-dimensional Euclidean space: `eta = 3^d`, `lambda = 4 · 2^d`.
    pub fn euclidean(d: f64) -> Self {
        Self {
            d,
            eta: 3f64.powf(d),
            lambda: 4.0 * 2f64.powf(d),
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d >= 1.0) {
            return Err(Error::InvalidParameter(format!("d must be at least 1, got {}", self.d)));
        }
        if !(self.eta >= 1.0) {
            return Err(Error::InvalidParameter(format!("eta must be at least 1, got {}", self.eta)));
        }
        if !(self.lambda >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be at least 2, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Lower bound `⌈n / 2λ⌉` on the number of vertices inside the ball.
    pub fn min_inside(&self, n: usize) -> usize {
        (n as f64 / (2.0 * self.lambda)).ceil() as usize
    }

    /// Largest allowed component after removing a separator, `n − ⌈n / 2λ⌉`.
    pub fn max_component(&self, n: usize) -> usize {
        n - self.min_inside(n)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Both endpoints of every cut edge.
    #[default]
    Lanky,
    /// Only the endpoints inside the ball.
    #[serde(rename = "thin")]
    WeaklyLankyThin,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparatorConfig {
    pub params: PackingParams,
    pub variant: Variant,
    pub resample_budget: usize,
    pub rng_seed: u64,
}

impl SeparatorConfig {
    pub fn new(params: PackingParams, variant: Variant, rng_seed: u64) -> Self {
        Self {
            params,
            variant,
            resample_budget: 16,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.resample_budget == 0 {
            return Err(Error::InvalidParameter("resample_budget must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparatorResult {
    /// Separator vertices, ascending.
    pub s: Vec<usize>,
    pub center: usize,
    pub base_radius: f64,
    pub final_radius: f64,
    pub sigma: f64,
    /// Every edge with exactly one endpoint in `B(center, final_radius)`.
    pub cut_edges: Vec<Edge>,
    /// Cut edges of length at most `final_radius`.
    pub short_cut_edges: Vec<Edge>,
    pub inside_count: usize,
    /// Component sizes of `G − S`, descending.
    pub components: Vec<usize>,
}

impl SeparatorResult {
    pub fn largest_component(&self) -> usize {
        self.components.first().copied().unwrap_or(0)
    }
}

/// Exhaustive center search. For every vertex `v` and every distance `r`
/// from `v`, the pair qualifies when `|B(v, 2r)| ≤ n / 2`; among those the
/// largest `|B(v, r)|` wins, ties going to the smaller `v`, then the smaller
/// `r`. Fails with the best near miss when `|B(v, r)| < n / 2λ`.
pub fn find_center(m: &MetricInput, params: &PackingParams) -> Result<(usize, f64)> {
    params.validate()?;
    let n = m.len();
    if n < 2 {
        return Err(Error::TooFewVertices { needed: 2, found: n });
    }
    let half = n as f64 / 2.0;
    // (inside, v, r, outer)
    let mut best: Option<(usize, usize, f64, usize)> = None;
    let mut ds = Vec::with_capacity(n);
    for v in 0..n {
        ds.clear();
        ds.extend((0..n).map(|x| m.dist(v, x)));
        ds.sort_unstable_by(f64::total_cmp);
        let mut k = 0;
        while k < n {
            let r = ds[k];
            let mut inside = k + 1;
            while inside < n && ds[inside] <= r {
                inside += 1;
            }
            let outer = ds.partition_point(|&d| d <= 2.0 * r);
            if outer as f64 > half {
                break;
            }
            if best.is_none_or(|b| inside > b.0) {
                best = Some((inside, v, r, outer));
            }
            k = inside;
        }
    }
    let (inside, v, r, outer) = best.expect("a zero radius always qualifies for n ≥ 2");
    if inside < params.min_inside(n) {
        return Err(Error::CenterInfeasible {
            lambda: params.lambda,
            vertex: v,
            radius: r,
            inside,
            outer,
            n,
        });
    }
    if r > 0.0 {
        return Ok((v, r));
    }
    let nearest = (0..n)
        .filter(|&x| x != v)
        .map(|x| m.dist(v, x))
        .fold(f64::INFINITY, f64::min);
    Ok((v, nearest / 4.0))
}

fn cut_by_ball(g: &WeightedGraph, inside: &[bool]) -> Vec<Edge> {
    g.edges()
        .iter()
        .filter(|e| inside[e.u] != inside[e.v])
        .copied()
        .collect()
}

/// Cuts `g` with a ball of random radius around the center from
/// [`find_center`]. Up to `resample_budget` radii are drawn and the one with
/// the fewest short cut edges is kept (the first on ties).
pub fn extract_separator(
    g: &WeightedGraph,
    m: &MetricInput,
    cfg: &SeparatorConfig,
) -> Result<SeparatorResult> {
    cfg.validate()?;
    let n = m.len();
    if g.n() != n {
        return Err(Error::InvalidParameter(format!(
            "graph has {} vertices but the metric has {n}",
            g.n()
        )));
    }
    let (center, r) = find_center(m, &cfg.params)?;
    let dist: Vec<f64> = (0..n).map(|x| m.dist(center, x)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut chosen: Option<(f64, f64, Vec<bool>, Vec<Edge>, usize)> = None;
    for _ in 0..cfg.resample_budget {
        let sigma: f64 = rng.gen();
        let r_star = (1.0 + sigma) * r;
        let inside: Vec<bool> = dist.iter().map(|&d| d <= r_star).collect();
        let cut = cut_by_ball(g, &inside);
        let short = cut.iter().filter(|e| e.w <= r_star).count();
        if chosen.as_ref().is_none_or(|c| short < c.4) {
            chosen = Some((sigma, r_star, inside, cut, short));
        }
    }
    let (sigma, r_star, inside, cut, _) = chosen.expect("budget is at least one");
    let mut in_s = vec![false; n];
    for e in &cut {
        for x in [e.u, e.v] {
            if cfg.variant == Variant::Lanky || inside[x] {
                in_s[x] = true;
            }
        }
    }
    let s: Vec<usize> = (0..n).filter(|&x| in_s[x]).collect();
    let (_, mut components) = g.components_without(&in_s);
    components.sort_unstable_by(|a, b| b.cmp(a));
    let short_cut_edges = cut.iter().filter(|e| e.w <= r_star).copied().collect();
    Ok(SeparatorResult {
        s,
        center,
        base_radius: r,
        final_radius: r_star,
        sigma,
        cut_edges: cut,
        short_cut_edges,
        inside_count: inside.iter().filter(|&&b| b).count(),
        components,
    })
}

/// Node of a recursive decomposition. Vertex ids are those of the input graph.
#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition {
    Leaf {
        vertices: Vec<usize>,
    },
    Split {
        vertices: Vec<usize>,
        separator: SeparatorResult,
        children: Vec<Decomposition>,
    },
}

impl Decomposition {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Decomposition::Leaf { vertices } | Decomposition::Split { vertices, .. } => vertices,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Decomposition::Leaf { .. } => 0,
            Decomposition::Split { children, .. } => {
                1 + children.iter().map(Decomposition::depth).max().unwrap_or(0)
            }
        }
    }

    /// Largest total separator size along a root-to-leaf path.
    pub fn max_path_separator(&self) -> usize {
        match self {
            Decomposition::Leaf { .. } => 0,
            Decomposition::Split {
                separator,
                children,
                ..
            } => {
                separator.s.len()
                    + children
                        .iter()
                        .map(Decomposition::max_path_separator)
                        .max()
                        .unwrap_or(0)
            }
        }
    }

    /// Every internal node, preorder.
    pub fn splits(&self) -> Vec<(&[usize], &SeparatorResult)> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if let Decomposition::Split {
                vertices,
                separator,
                children,
            } = node
            {
                out.push((vertices.as_slice(), separator));
                stack.extend(children.iter().rev());
            }
        }
        out
    }
}

/// Seed for the `index`-th child of a node seeded with `seed`.
pub fn child_seed(seed: u64, index: usize) -> u64 {
    mix64(seed ^ mix64(index as u64 + 1))
}

/// Separates recursively: every component of `G − S` with more than
/// `leaf_size` vertices is split again on its induced subgraph.
pub fn recursive_decompose(
    g: &WeightedGraph,
    m: &MetricInput,
    cfg: &SeparatorConfig,
    leaf_size: usize,
) -> Result<Decomposition> {
    if leaf_size < 2 {
        return Err(Error::InvalidParameter("leaf_size must be at least 2".into()));
    }
    cfg.validate()?;
    let ids: Vec<usize> = (0..m.len()).collect();
    decompose_node(g, m, cfg, leaf_size, ids)
}

fn decompose_node(
    g: &WeightedGraph,
    m: &MetricInput,
    cfg: &SeparatorConfig,
    leaf_size: usize,
    ids: Vec<usize>,
) -> Result<Decomposition> {
    if ids.len() <= leaf_size {
        return Ok(Decomposition::Leaf { vertices: ids });
    }
    let local = extract_separator(g, m, cfg)?;
    let mut removed = vec![false; ids.len()];
    for &x in &local.s {
        removed[x] = true;
    }
    let (label, sizes) = g.components_without(&removed);
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for (x, &l) in label.iter().enumerate() {
        if l != usize::MAX {
            groups[l].push(x);
        }
    }
    let mut children = Vec::with_capacity(groups.len());
    for (k, group) in groups.into_iter().enumerate() {
        let sub_g = g.induced(&group);
        let sub_m = m.subset(&group);
        let sub_cfg = SeparatorConfig {
            rng_seed: child_seed(cfg.rng_seed, k),
            ..*cfg
        };
        let child = decompose_node(&sub_g, &sub_m, &sub_cfg, leaf_size, group)?;
        children.push(relabel(child, &ids));
    }
    Ok(Decomposition::Split {
        vertices: ids.clone(),
        separator: relabel_result(local, &ids),
        children,
    })
}

fn relabel(node: Decomposition, ids: &[usize]) -> Decomposition {
    match node {
        Decomposition::Leaf { vertices } => Decomposition::Leaf {
            vertices: vertices.into_iter().map(|x| ids[x]).collect(),
        },
        Decomposition::Split {
            vertices,
            separator,
            children,
        } => Decomposition::Split {
            vertices: vertices.into_iter().map(|x| ids[x]).collect(),
            separator: relabel_result(separator, ids),
            children: children.into_iter().map(|c| relabel(c, ids)).collect(),
        },
    }
}

fn relabel_result(mut res: SeparatorResult, ids: &[usize]) -> SeparatorResult {
    let map_edge = |e: &Edge| Edge::new(ids[e.u], ids[e.v], e.w);
    res.s = res.s.iter().map(|&x| ids[x]).collect();
    res.s.sort_unstable();
    res.center = ids[res.center];
    res.cut_edges = res.cut_edges.iter().map(map_edge).collect();
    res.short_cut_edges = res.short_cut_edges.iter().map(map_edge).collect();
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::load_and_normalize;

    fn line(n: usize) -> MetricInput {
        let pts: Vec<[f64; 1]> = (0..n).map(|x| [x as f64]).collect();
        load_and_normalize(MetricInput::euclidean(&pts).unwrap()).unwrap()
    }

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::from_edges(n, (1..n).map(|x| Edge::new(x - 1, x, 1.0)))
    }

    #[test]
    fn two_points_center() {
        let p = PackingParams::euclidean(1.0).with_lambda(2.0);
        let (v, r) = find_center(&line(2), &p).unwrap();
        assert_eq!(v, 0);
        // Zero radius is widened to a quarter of the nearest distance.
        assert_eq!(r, 0.25);
    }

    #[test]
    fn four_points_center() {
        // Every positive radius doubles into more than two points.
        let p = PackingParams::euclidean(1.0).with_lambda(4.0);
        let (v, r) = find_center(&line(4), &p).unwrap();
        assert_eq!((v, r), (0, 0.25));
    }

    #[test]
    fn lambda_too_small_is_reported() {
        let p = PackingParams::euclidean(1.0).with_lambda(2.0);
        let star = MetricInput::from_matrix(&[
            [0.0, 1.0, 1.0, 1.0, 1.0, 1.0],
            [1.0, 0.0, 2.0, 2.0, 2.0, 2.0],
            [1.0, 2.0, 0.0, 2.0, 2.0, 2.0],
            [1.0, 2.0, 2.0, 0.0, 2.0, 2.0],
            [1.0, 2.0, 2.0, 2.0, 0.0, 2.0],
            [1.0, 2.0, 2.0, 2.0, 2.0, 0.0],
        ])
        .unwrap();
        let star = load_and_normalize(star).unwrap();
        // Only singletons satisfy the outer bound and 1 < 6/4.
        assert!(matches!(
            find_center(&star, &p),
            Err(Error::CenterInfeasible { inside: 1, .. })
        ));
    }

    #[test]
    fn path_of_three() {
        let m = line(3);
        let g = path(3);
        for seed in 0..8 {
            let cfg = SeparatorConfig::new(PackingParams::euclidean(1.0), Variant::Lanky, seed);
            let res = extract_separator(&g, &m, &cfg).unwrap();
            assert!(res.s.len() <= 4);
            assert!(res.base_radius <= res.final_radius && res.final_radius <= 2.0 * res.base_radius);
            assert!(res.largest_component() <= cfg.params.max_component(3));
        }
    }

    #[test]
    fn edgeless_graph() {
        let m = line(5);
        let cfg = SeparatorConfig::new(PackingParams::euclidean(1.0), Variant::Lanky, 3);
        let res = extract_separator(&WeightedGraph::new(5), &m, &cfg).unwrap();
        assert!(res.s.is_empty());
        assert_eq!(res.components, vec![1; 5]);
    }

    #[test]
    fn thin_is_subset_of_lanky() {
        let m = line(30);
        let g = path(30);
        for seed in 0..5 {
            let p = PackingParams::euclidean(1.0);
            let a = extract_separator(&g, &m, &SeparatorConfig::new(p, Variant::Lanky, seed)).unwrap();
            let b = extract_separator(&g, &m, &SeparatorConfig::new(p, Variant::WeaklyLankyThin, seed))
                .unwrap();
            assert_eq!(a.final_radius, b.final_radius);
            assert!(b.s.iter().all(|x| a.s.contains(x)));
        }
    }

    #[test]
    fn decomposition_of_a_path() {
        let m = line(8);
        let g = path(8);
        let cfg = SeparatorConfig::new(PackingParams::euclidean(1.0), Variant::Lanky, 11);
        let tree = recursive_decompose(&g, &m, &cfg, 2).unwrap();
        assert!(tree.depth() <= 4);
        let mut seen: Vec<usize> = Vec::new();
        fn collect(node: &Decomposition, out: &mut Vec<usize>) {
            match node {
                Decomposition::Leaf { vertices } => out.extend(vertices),
                Decomposition::Split {
                    separator,
                    children,
                    ..
                } => {
                    out.extend(&separator.s);
                    for c in children {
                        collect(c, out);
                    }
                }
            }
        }
        collect(&tree, &mut seen);
        seen.sort_unstable();
        assert_eq!(seen, (0..8).collect::<Vec<_>>());
        assert!(matches!(
            recursive_decompose(&g, &m, &cfg, 8).unwrap(),
            Decomposition::Leaf { .. }
        ));
    }
}
