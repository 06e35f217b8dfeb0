use super::MetricInput;

/// Greedy `r`-net of `points`: scans the ids in ascending order and keeps a
/// point when it is at distance strictly greater than `r` from every point
/// kept so far. The result is `r`-separated (strictly) and covers every
/// input point within `r`.
pub fn build_net(m: &MetricInput, points: &[usize], r: f64) -> Vec<usize> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut net: Vec<usize> = Vec::new();
    for p in sorted {
        if net.iter().all(|&q| m.dist(p, q) > r) {
            net.push(p);
        }
    }
    net
}

/// Hierarchy of nested nets `N_0 ⊇ N_1 ⊇ … ⊇ N_top` with `N_0` the whole
/// vertex set and `N_i` an `r_i`-net of `N_{i-1}`, `r_i = 2^i · r0`.
///
/// `top = ⌈log₂ Δ⌉ + 2`, so the top level holds a single point. Every vertex
/// of `N_i` below the top points to its closest vertex of `N_{i+1}` (smallest
/// id on ties); `istar[v]` is the highest level containing `v`.
#[derive(Clone, Debug)]
pub struct NetHierarchy {
    pub r0: f64,
    /// `levels[i]` is `N_i`, ascending.
    pub levels: Vec<Vec<usize>>,
    /// `parents[i][k]` is the parent of `levels[i][k]`; empty at the top level.
    pub parents: Vec<Vec<usize>>,
    pub istar: Vec<usize>,
}

impl NetHierarchy {
    pub fn radius(&self, level: usize) -> f64 {
        self.r0 * 2f64.powi(level as i32)
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn contains(&self, level: usize, v: usize) -> bool {
        self.istar[v] >= level
    }

    /// Parent of `v` at `level`, or `None` at the top level or if `v ∉ N_level`.
    pub fn parent(&self, v: usize, level: usize) -> Option<usize> {
        let k = self.levels.get(level)?.binary_search(&v).ok()?;
        self.parents[level].get(k).copied()
    }

    /// Children of `p` at `level ≥ 1`: the vertices of `N_{level-1}` whose
    /// parent is `p`.
    pub fn children(&self, p: usize, level: usize) -> Vec<usize> {
        if level == 0 || level > self.top() {
            return Vec::new();
        }
        self.levels[level - 1]
            .iter()
            .zip(&self.parents[level - 1])
            .filter(|(_, &par)| par == p)
            .map(|(&c, _)| c)
            .collect()
    }

    /// Checks nesting, strict separation, covering and parent proximity.
    /// Returns a description of the first violation.
    pub fn validate(&self, m: &MetricInput) -> Result<(), String> {
        if self.levels.is_empty() || self.levels[0].len() != m.len() {
            return Err("level 0 must hold every vertex".into());
        }
        if self.levels[self.top()].len() != 1 {
            return Err(format!(
                "top level {} holds {} points",
                self.top(),
                self.levels[self.top()].len()
            ));
        }
        for (i, net) in self.levels.iter().enumerate() {
            let r = self.radius(i);
            if i > 0 {
                let prev = &self.levels[i - 1];
                if let Some(v) = net.iter().find(|v| prev.binary_search(v).is_err()) {
                    return Err(format!("vertex {v} in N_{i} but not in N_{}", i - 1));
                }
                for &p in prev {
                    if net.iter().all(|&q| m.dist(p, q) > r) {
                        return Err(format!("vertex {p} of N_{} is not covered by N_{i}", i - 1));
                    }
                }
            }
            for (k, &a) in net.iter().enumerate() {
                for &b in &net[k + 1..] {
                    if m.dist(a, b) <= r {
                        return Err(format!("N_{i} holds {a} and {b} within {r}"));
                    }
                }
            }
            if i < self.top() {
                for (&v, &p) in net.iter().zip(&self.parents[i]) {
                    if !self.contains(i + 1, p) {
                        return Err(format!("parent {p} of {v} at level {i} is not in N_{}", i + 1));
                    }
                    if m.dist(v, p) > self.radius(i + 1) {
                        return Err(format!("parent {p} of {v} at level {i} is too far"));
                    }
                }
            }
        }
        for (v, &s) in self.istar.iter().enumerate() {
            if self.levels[s].binary_search(&v).is_err()
                || (s < self.top() && self.levels[s + 1].binary_search(&v).is_ok())
            {
                return Err(format!("istar of {v} is wrong"));
            }
        }
        Ok(())
    }
}

/// Number of halvings needed: the smallest `k ≥ 0` with `2^k ≥ spread`.
pub(crate) fn ceil_log2(spread: f64) -> usize {
    let mut k = 0usize;
    while 2f64.powi(k as i32) < spread {
        k += 1;
    }
    k
}

/// Builds the net tree of a normalized metric with `r0 = 1/4`.
pub fn build_net_tree(m: &MetricInput) -> NetHierarchy {
    let r0 = 0.25;
    let top = ceil_log2(m.spread()) + 2;
    let mut levels: Vec<Vec<usize>> = vec![(0..m.len()).collect()];
    for i in 1..=top {
        let r = r0 * 2f64.powi(i as i32);
        let next = build_net(m, &levels[i - 1], r);
        levels.push(next);
    }
    let mut parents = Vec::with_capacity(top + 1);
    for i in 0..top {
        let upper = &levels[i + 1];
        let row = levels[i]
            .iter()
            .map(|&v| {
                if upper.binary_search(&v).is_ok() {
                    return v;
                }
                let mut best = upper[0];
                let mut best_d = m.dist(v, best);
                for &q in &upper[1..] {
                    let d = m.dist(v, q);
                    if d < best_d {
                        best = q;
                        best_d = d;
                    }
                }
                best
            })
            .collect();
        parents.push(row);
    }
    parents.push(Vec::new());
    let mut istar = vec![0usize; m.len()];
    for (i, net) in levels.iter().enumerate() {
        for &v in net {
            istar[v] = i;
        }
    }
    NetHierarchy {
        r0,
        levels,
        parents,
        istar,
    }
}
