//! Small hand-checkable instances with values worked out independently.

use lanky::cgmz::{cgmz_build, cgmz_spanner, CgmzConfig};
use lanky::generate::{cantor_dust, grid, uniform, Generator};
use lanky::graph::shortest_path_dist;
use lanky::greedy::{greedy_spanner, GreedyConfig};
use lanky::metric::{
    ball, build_net, build_net_tree, build_wspd, estimate_fractal_dimension, is_separated_pair,
    load_and_normalize, MetricInput,
};
use lanky::oracle::{self, kruskal_forest, Host};
use lanky::separator::{
    extract_separator, find_center, recursive_decompose, PackingParams, SeparatorConfig, Variant,
};
use lanky::{Edge, WeightedGraph};

fn line(xs: &[f64]) -> MetricInput {
    let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
    load_and_normalize(MetricInput::euclidean(&pts).unwrap()).unwrap()
}

fn norm(points: &[Vec<f64>]) -> MetricInput {
    load_and_normalize(MetricInput::euclidean(points).unwrap()).unwrap()
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

#[test]
fn normalization_rescales_to_unit_minimum() {
    let m = line(&[0.0, 2.0, 6.0]);
    assert_eq!(m.point(1), Some(&[1.0][..]));
    assert_eq!(m.point(2), Some(&[3.0][..]));
    assert_eq!(m.spread(), 3.0);

    let single = line(&[5.0]);
    assert_eq!(single.spread(), 1.0);

    let g = norm(&grid(3, 2));
    assert!((g.spread() - 8f64.sqrt()).abs() < 1e-12);
    assert_eq!(g.point(4), Some(&[1.0, 1.0][..]));
}

#[test]
fn duplicate_points_are_rejected() {
    let raw = MetricInput::euclidean(&[vec![0.0], vec![1.0], vec![1.0]]).unwrap();
    assert!(load_and_normalize(raw).is_err());
}

#[test]
fn balls_are_closed() {
    let m = line(&[0.0, 1.0, 2.0, 3.0]);
    assert_eq!(ball(&m, 1, 1.0), vec![0, 1, 2]);
    assert_eq!(ball(&m, 2, 0.0), vec![2]);
    let g = norm(&grid(3, 2));
    assert_eq!(ball(&g, 4, 1.2), vec![1, 3, 4, 5, 7]);
}

#[test]
fn greedy_nets_on_a_line() {
    let m = line(&[0.0, 1.0, 2.0, 3.0]);
    assert_eq!(build_net(&m, &[0, 1, 2, 3], 1.0), vec![0, 2]);
    assert_eq!(build_net(&m, &[3, 2, 1, 0], 0.5), vec![0, 1, 2, 3]);
    assert_eq!(build_net(&m, &[2], 10.0), vec![2]);
}

#[test]
fn net_tree_levels() {
    let m = line(&[0.0, 1.0, 2.0, 3.0]);
    let t = build_net_tree(&m);
    assert_eq!(t.r0, 0.25);
    assert_eq!(t.radius(2), 1.0);
    assert_eq!(t.top(), 4);
    assert_eq!(t.levels[0], vec![0, 1, 2, 3]);
    assert_eq!(t.levels[1], vec![0, 1, 2, 3]);
    assert_eq!(t.levels[2], vec![0, 2]);
    assert_eq!(t.levels[t.top()].len(), 1);
    t.validate(&m).unwrap();

    let one = line(&[0.0]);
    let t = build_net_tree(&one);
    assert_eq!(t.num_levels(), 3);
    assert!(t.levels.iter().all(|l| l == &vec![0]));
}

#[test]
fn separated_pairs_by_hand() {
    let m = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
    assert!(is_separated_pair(&m, &[0], &[5], 100.0));
    assert!(is_separated_pair(&m, &[0, 1], &[3, 4], 2.0));
    assert!(!is_separated_pair(&m, &[0, 1], &[3, 4], 3.0));
}

#[test]
fn wspd_covers_a_line_once() {
    let m = line(&[0.0, 1.0, 2.0, 3.0]);
    let t = build_net_tree(&m);
    let pairs = build_wspd(&m, &t, 1.0);
    let mut seen = [0; 16];
    for p in &pairs {
        assert!(is_separated_pair(&m, &p.a, &p.b, 1.0));
        for &a in &p.a {
            for &b in &p.b {
                seen[a.min(b) * 4 + a.max(b)] += 1;
            }
        }
    }
    for (u, v) in all_pairs(4) {
        assert_eq!(seen[u * 4 + v], 1, "pair ({u},{v})");
    }
}

#[test]
fn wspd_pair_count_is_linear_on_uniform_points() {
    let m = norm(&uniform(256, 2, 16.0, 1));
    let t = build_net_tree(&m);
    let pairs = build_wspd(&m, &t, 2.0);
    let c = pairs.len() as f64 / 256.0;
    println!("s = 2 WSPD on 256 uniform points: {} pairs, c = {c:.2}", pairs.len());
    assert!(pairs.len() < 256 * 255 / 2);
}

#[test]
fn greedy_small_cases() {
    let m = line(&[0.0, 1.0, 2.0]);
    let g = greedy_spanner(&m, &GreedyConfig::new(0.5)).unwrap();
    assert_eq!(g.sorted_edges().iter().map(|e| (e.u, e.v)).collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);

    let sq = norm(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]);
    assert_eq!(greedy_spanner(&sq, &GreedyConfig::new(0.05)).unwrap().num_edges(), 6);

    let g3 = norm(&grid(3, 2));
    let h = greedy_spanner(&g3, &GreedyConfig::new(0.5)).unwrap();
    let mst = kruskal_forest(9, h.edges());
    let w: f64 = mst.iter().map(|e| e.w).sum();
    assert_eq!(w, 8.0);
}

#[test]
fn shortest_path_cutoff() {
    let g = WeightedGraph::from_edges(4, [Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)]);
    assert_eq!(shortest_path_dist(&g, 0, 2, None), 2.0);
    assert_eq!(shortest_path_dist(&g, 0, 3, None), f64::INFINITY);
    assert_eq!(shortest_path_dist(&g, 0, 2, Some(1.5)), f64::INFINITY);
}

#[test]
fn cgmz_small_cases() {
    let cfg = CgmzConfig::new(0.5).unwrap();
    assert_eq!(cfg.gamma(), 68.0);
    assert_eq!(cfg.ell(), 3);

    let two = line(&[0.0, 1.0]);
    let g = cgmz_spanner(&two, &cfg);
    assert_eq!(g.num_edges(), 1);
    assert_eq!(g.max_degree(), 1);

    let four = line(&[0.0, 1.0, 2.0, 3.0]);
    let (_, os) = cgmz_build(&four, &cfg);
    assert_eq!(os.g1.num_edges(), 6);
    assert!(os.cross_level.iter().all(|&l| l == 0));
    assert_eq!(os.g1.sorted_edges(), os.g2.sorted_edges());
    assert!(os.reroute_log.is_empty());
}

#[test]
fn cgmz_uniform_stretch_within_three() {
    let m = norm(&uniform(256, 2, 16.0, 1));
    let cfg = CgmzConfig::new(0.5).unwrap();
    let (_, os) = cgmz_build(&m, &cfg);
    let rep = oracle::verify_stretch(&os.g2, Host::Metric(&m), cfg.stretch());
    assert!(rep.passed, "{rep:?}");
    assert!(oracle::verify_reroute_claims(&m, &os, 0.5).passed);
}

#[test]
fn center_search() {
    let two = line(&[0.0, 1.0]);
    let p = PackingParams::euclidean(1.0).with_lambda(2.0);
    assert_eq!(find_center(&two, &p).unwrap().0, 0);

    // Enumerate every (v, r) by hand and keep the feasible maximum.
    let four = line(&[0.0, 1.0, 2.0, 3.0]);
    let p = PackingParams::euclidean(1.0).with_lambda(4.0);
    let (v, r) = find_center(&four, &p).unwrap();
    assert!(!ball(&four, v, r).is_empty());
    assert!(ball(&four, v, 2.0 * r).len() <= 2);
    let mut best = 0;
    for c in 0..4 {
        for rr in [0.0, 1.0, 2.0, 3.0] {
            if ball(&four, c, 2.0 * rr).len() <= 2 {
                best = best.max(ball(&four, c, rr).len());
            }
        }
    }
    assert_eq!(ball(&four, v, r).len(), best);

    let g = norm(&grid(32, 2));
    let p = PackingParams::euclidean(2.0).with_lambda(16.0);
    let (v, r) = find_center(&g, &p).unwrap();
    let inside = ball(&g, v, r).len();
    assert!(inside >= 1024 / 32 && ball(&g, v, 2.0 * r).len() <= 512);
}

#[test]
fn grid_separator_is_small_and_valid_for_two_seeds() {
    let m = norm(&grid(32, 2));
    let g = greedy_spanner(&m, &GreedyConfig::new(0.5)).unwrap();
    for seed in [7, 8] {
        let cfg = SeparatorConfig::new(PackingParams::euclidean(2.0), Variant::Lanky, seed);
        let res = extract_separator(&g, &m, &cfg).unwrap();
        assert!(res.s.len() <= 320, "|S| = {}", res.s.len());
        assert!(res.largest_component() <= cfg.params.max_component(1024));
        assert!(oracle::verify_separator(&res, &g, &m, &cfg.params).passed);
    }
}

#[test]
fn path_decomposition() {
    let m = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
    let g = greedy_spanner(&m, &GreedyConfig::new(0.5)).unwrap();
    let cfg = SeparatorConfig::new(PackingParams::euclidean(1.0), Variant::Lanky, 3);
    let tree = recursive_decompose(&g, &m, &cfg, 2).unwrap();
    assert!(tree.depth() <= 6);
    let single = recursive_decompose(&g, &m, &cfg, 8).unwrap();
    assert_eq!(single.depth(), 0);
}

#[test]
fn star_lankiness() {
    let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
    let m = norm(&pts);
    let g = WeightedGraph::from_edges(
        4,
        [Edge::new(0, 1, 1.0), Edge::new(0, 2, 1.0), Edge::new(0, 3, 1.0)],
    );
    assert!(oracle::measure_lankiness(&g, &m).measured >= 3.0);
    assert_eq!(oracle::measure_weak_lankiness(&g, &m).measured, 1.0);
}

#[test]
fn greedy_is_one_thin_at_wide_separation() {
    let m = norm(&uniform(200, 2, 14.0, 5));
    let g = greedy_spanner(&m, &GreedyConfig::new(0.5)).unwrap();
    let t = build_net_tree(&m);
    let rep = oracle::max_edges_per_wspd_pair(&g, &m, &t, 8.0, Some(1));
    assert!(rep.passed, "{rep:?}");
}

#[test]
fn fractal_estimates() {
    let radii: Vec<(f64, f64)> = (1..5).map(|k| (1.0, 2f64.powi(k))).collect();
    let g = norm(&grid(32, 2));
    let d = estimate_fractal_dimension(&g, &radii).unwrap();
    assert!((d - 2.0).abs() <= 0.3, "grid {d}");

    let l = norm(&grid(256, 1));
    let d = estimate_fractal_dimension(&l, &radii).unwrap();
    assert!((d - 1.0).abs() <= 0.3, "line {d}");

    // Middle thirds on both axes: 4 copies at scale 1/3 each step.
    let c = norm(&cantor_dust(5, 2));
    let radii: Vec<(f64, f64)> = (1..4).map(|k| (1.0, 3f64.powi(k))).collect();
    let d = estimate_fractal_dimension(&c, &radii).unwrap();
    let expected = 4f64.ln() / 3f64.ln();
    assert!((d - expected).abs() <= 0.3, "cantor {d}");

    let gen = Generator::CantorDust { depth: 5, d: 2 };
    assert_eq!(gen.points().unwrap().unwrap().len(), 1024);
}
