use super::{MetricInput, NetHierarchy};

/// One pair of a well-separated pair decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct WspdPair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Separation guaranteed by construction: `δ(a, b) ≥ s · max(diam a, diam b)`.
    /// Infinite when both sides are single points.
    pub s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Node {
    level: usize,
    rep: usize,
}

enum Task {
    Within(Node),
    Pair(Node, Node),
}

struct Clusters<'a> {
    tree: &'a NetHierarchy,
    children: Vec<Vec<Vec<usize>>>,
    members: Vec<Vec<Vec<usize>>>,
    radius: Vec<Vec<f64>>,
}

impl<'a> Clusters<'a> {
    fn new(m: &MetricInput, tree: &'a NetHierarchy) -> Self {
        let levels = &tree.levels;
        let mut children: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); levels[0].len()]];
        for i in 1..levels.len() {
            let mut row = vec![Vec::new(); levels[i].len()];
            for (&c, &p) in levels[i - 1].iter().zip(&tree.parents[i - 1]) {
                let k = levels[i].binary_search(&p).expect("parent lives one level up");
                row[k].push(c);
            }
            children.push(row);
        }
        let mut members: Vec<Vec<Vec<usize>>> = vec![levels[0].iter().map(|&v| vec![v]).collect()];
        let mut radius: Vec<Vec<f64>> = vec![vec![0.0; levels[0].len()]];
        for i in 1..levels.len() {
            let mut mrow = Vec::with_capacity(levels[i].len());
            let mut rrow = Vec::with_capacity(levels[i].len());
            for (k, &p) in levels[i].iter().enumerate() {
                let mut all = Vec::new();
                for &c in &children[i][k] {
                    let ck = levels[i - 1].binary_search(&c).unwrap();
                    all.extend_from_slice(&members[i - 1][ck]);
                }
                all.sort_unstable();
                let r = all.iter().map(|&x| m.dist(p, x)).fold(0.0, f64::max);
                mrow.push(all);
                rrow.push(r);
            }
            members.push(mrow);
            radius.push(rrow);
        }
        Self {
            tree,
            children,
            members,
            radius,
        }
    }

    fn pos(&self, node: Node) -> usize {
        self.tree.levels[node.level]
            .binary_search(&node.rep)
            .expect("node is part of its level")
    }

    /// Skips chains where a node's only child is itself.
    fn descend(&self, mut node: Node) -> Node {
        while node.level > 0 && self.children[node.level][self.pos(node)].len() == 1 {
            node.level -= 1;
        }
        node
    }

    fn kids(&self, node: Node) -> Vec<Node> {
        self.children[node.level][self.pos(node)]
            .iter()
            .map(|&c| {
                self.descend(Node {
                    level: node.level - 1,
                    rep: c,
                })
            })
            .collect()
    }

    fn radius(&self, node: Node) -> f64 {
        self.radius[node.level][self.pos(node)]
    }

    fn members(&self, node: Node) -> &[usize] {
        &self.members[node.level][self.pos(node)]
    }
}

/// `s`-well-separated pair decomposition from the net tree.
///
/// Clusters are subtrees of the net tree. Starting from the root, a pair of
/// clusters is emitted once `d(p, q) − r_p − r_q ≥ 2s · max(r_p, r_q)` for
/// representative distance `d(p, q)` and exact cluster radii `r`, otherwise
/// the cluster with the larger radius is split into its children. Every
/// unordered vertex pair ends up in exactly one emitted pair.
pub fn build_wspd(m: &MetricInput, tree: &NetHierarchy, s: f64) -> Vec<WspdPair> {
    assert!(s > 0.0, "separation must be positive");
    let clusters = Clusters::new(m, tree);
    let root = clusters.descend(Node {
        level: tree.top(),
        rep: tree.levels[tree.top()][0],
    });
    let mut out = Vec::new();
    let mut stack = vec![Task::Within(root)];
    while let Some(task) = stack.pop() {
        match task {
            Task::Within(node) => {
                if node.level == 0 {
                    continue;
                }
                let kids = clusters.kids(node);
                for (k, &a) in kids.iter().enumerate() {
                    stack.push(Task::Within(a));
                    for &b in &kids[k + 1..] {
                        stack.push(Task::Pair(a, b));
                    }
                }
            }
            Task::Pair(a, b) => {
                let (ra, rb) = (clusters.radius(a), clusters.radius(b));
                let rmax = ra.max(rb);
                let gap = m.dist(a.rep, b.rep) - ra - rb;
                if gap >= 2.0 * s * rmax {
                    let achieved = if rmax == 0.0 {
                        f64::INFINITY
                    } else {
                        gap / (2.0 * rmax)
                    };
                    out.push(WspdPair {
                        a: clusters.members(a).to_vec(),
                        b: clusters.members(b).to_vec(),
                        s: achieved,
                    });
                    continue;
                }
                let split_a = ra > rb || (ra == rb && a.level >= b.level);
                let (big, other) = if split_a { (a, b) } else { (b, a) };
                for c in clusters.kids(big) {
                    if split_a {
                        stack.push(Task::Pair(c, other));
                    } else {
                        stack.push(Task::Pair(other, c));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{build_net_tree, is_separated_pair, load_and_normalize};
    use std::collections::HashMap;

    fn coverage(n: usize, pairs: &[WspdPair]) -> HashMap<(usize, usize), usize> {
        let mut seen = HashMap::new();
        for p in pairs {
            for &x in &p.a {
                for &y in &p.b {
                    *seen.entry((x.min(y), x.max(y))).or_insert(0) += 1;
                }
            }
        }
        assert!(seen.keys().all(|&(x, y)| x < y && y < n));
        seen
    }

    #[test]
    fn two_points_one_pair() {
        let m = load_and_normalize(MetricInput::euclidean(&[[0.0], [3.0]]).unwrap()).unwrap();
        let t = build_net_tree(&m);
        let pairs = build_wspd(&m, &t, 5.0);
        assert_eq!(pairs.len(), 1);
        let mut sides = [pairs[0].a.clone(), pairs[0].b.clone()];
        sides.sort();
        assert_eq!(sides, [vec![0], vec![1]]);
    }

    #[test]
    fn line_of_four_is_covered_once() {
        let m = load_and_normalize(
            MetricInput::euclidean(&[[0.0], [1.0], [2.0], [3.0]]).unwrap(),
        )
        .unwrap();
        let t = build_net_tree(&m);
        let pairs = build_wspd(&m, &t, 1.0);
        let seen = coverage(4, &pairs);
        assert_eq!(seen.len(), 6);
        assert!(seen.values().all(|&c| c == 1));
        for p in &pairs {
            assert!(is_separated_pair(&m, &p.a, &p.b, 1.0));
        }
    }
}
