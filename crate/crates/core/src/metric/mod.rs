//! Metric spaces over a finite vertex set `0..n`.
//!
//! A [`MetricInput`] is one of three kinds: Euclidean coordinates, an explicit
//! symmetric distance matrix, or Euclidean centres of a unit ball graph with
//! ball radius `mu`. Every construction in this crate expects a metric that
//! went through [`load_and_normalize`], which rejects duplicates and broken
//! matrices and rescales so that the closest pair is at distance 1.

mod net;
mod wspd;

pub use net::{build_net, build_net_tree, NetHierarchy};
pub use wspd::{build_wspd, WspdPair};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::stats::ls_slope;

/// Relative tolerance for floating point comparisons on metric data.
pub const REL_TOL: f64 = 1e-9;

/// Matrices up to this size get an exhaustive triangle-inequality check.
pub const TRIANGLE_EXHAUSTIVE_LIMIT: usize = 2000;

/// Number of random triples checked on larger matrices.
pub const TRIANGLE_SAMPLES: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum MetricKind {
    /// Row-major coordinates, `dim` values per point.
    Euclidean { dim: usize, coords: Vec<f64> },
    /// Row-major `n × n` distances.
    Matrix { dist: Vec<f64> },
    /// Ball centres; two vertices are adjacent in the host graph when their
    /// radius-`mu` balls intersect.
    UnitBall { dim: usize, coords: Vec<f64>, mu: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricInput {
    kind: MetricKind,
    n: usize,
    scale: f64,
    spread: Option<f64>,
}

impl MetricInput {
    pub fn euclidean<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let (dim, coords) = flatten(points)?;
        let n = points.len();
        Ok(Self {
            kind: MetricKind::Euclidean { dim, coords },
            n,
            scale: 1.0,
            spread: None,
        })
    }

    pub fn unit_ball<P: AsRef<[f64]>>(points: &[P], mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ball radius mu must be positive, got {mu}"
            )));
        }
        let (dim, coords) = flatten(points)?;
        let n = points.len();
        Ok(Self {
            kind: MetricKind::UnitBall { dim, coords, mu },
            n,
            scale: 1.0,
            spread: None,
        })
    }

    /// Builds a matrix metric from rows. Only the shape and the finiteness of
    /// entries are checked here; metric axioms are checked on normalization.
    pub fn from_matrix<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidDistance { i, j, value: d });
                }
            }
            dist.extend_from_slice(row);
        }
        Ok(Self {
            kind: MetricKind::Matrix { dist },
            n,
            scale: 1.0,
            spread: None,
        })
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Ambient dimension for coordinate-based kinds.
    pub fn dim(&self) -> Option<usize> {
        match &self.kind {
            MetricKind::Euclidean { dim, .. } | MetricKind::UnitBall { dim, .. } => Some(*dim),
            MetricKind::Matrix { .. } => None,
        }
    }

    /// Ball radius of a unit ball graph, in normalized units.
    pub fn mu(&self) -> Option<f64> {
        match &self.kind {
            MetricKind::UnitBall { mu, .. } => Some(*mu),
            _ => None,
        }
    }

    /// Factor applied by normalization (1 for raw inputs).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Coordinates of vertex `i` for coordinate-based kinds.
    pub fn point(&self, i: usize) -> Option<&[f64]> {
        match &self.kind {
            MetricKind::Euclidean { dim, coords } | MetricKind::UnitBall { dim, coords, .. } => {
                Some(&coords[i * dim..(i + 1) * dim])
            }
            MetricKind::Matrix { .. } => None,
        }
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        match &self.kind {
            MetricKind::Matrix { dist } => dist[i * self.n + j],
            MetricKind::Euclidean { dim, coords } | MetricKind::UnitBall { dim, coords, .. } => {
                let a = &coords[i * dim..(i + 1) * dim];
                let b = &coords[j * dim..(j + 1) * dim];
                a.iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt()
            }
        }
    }

    /// Maximum pairwise distance divided by the minimum one. For a normalized
    /// metric this is the maximum pairwise distance; a single point has spread 1.
    pub fn spread(&self) -> f64 {
        if let Some(s) = self.spread {
            return s;
        }
        let (min, max) = self.extreme_distances();
        if self.n < 2 || min <= 0.0 {
            1.0
        } else {
            max / min
        }
    }

    /// Whether `u` and `v` are adjacent in the host graph: always true for
    /// complete metrics, ball intersection for unit ball graphs.
    pub fn host_adjacent(&self, u: usize, v: usize) -> bool {
        match &self.kind {
            MetricKind::UnitBall { mu, .. } => self.dist(u, v) <= 2.0 * mu,
            _ => u != v,
        }
    }

    /// Restriction to `ids`, relabelled `0..ids.len()` in the given order.
    /// Distances are untouched; no renormalization happens.
    pub fn subset(&self, ids: &[usize]) -> MetricInput {
        let kind = match &self.kind {
            MetricKind::Euclidean { dim, coords } => MetricKind::Euclidean {
                dim: *dim,
                coords: gather(coords, *dim, ids),
            },
            MetricKind::UnitBall { dim, coords, mu } => MetricKind::UnitBall {
                dim: *dim,
                coords: gather(coords, *dim, ids),
                mu: *mu,
            },
            MetricKind::Matrix { .. } => {
                let mut dist = Vec::with_capacity(ids.len() * ids.len());
                for &i in ids {
                    for &j in ids {
                        dist.push(self.dist(i, j));
                    }
                }
                MetricKind::Matrix { dist }
            }
        };
        MetricInput {
            kind,
            n: ids.len(),
            scale: self.scale,
            spread: None,
        }
    }

    /// Converts any kind into an explicit distance matrix.
    pub fn to_matrix(&self) -> MetricInput {
        let ids: Vec<usize> = (0..self.n).collect();
        let mut dist = Vec::with_capacity(self.n * self.n);
        for &i in &ids {
            for &j in &ids {
                dist.push(self.dist(i, j));
            }
        }
        MetricInput {
            kind: MetricKind::Matrix { dist },
            n: self.n,
            scale: self.scale,
            spread: self.spread,
        }
    }

    /// `(min positive, max)` over all pairs; `(0, 0)` below two points.
    fn extreme_distances(&self) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = self.dist(i, j);
                if d > 0.0 && d < min {
                    min = d;
                }
                max = max.max(d);
            }
        }
        if min.is_infinite() {
            (0.0, max)
        } else {
            (min, max)
        }
    }

    fn rescale(&mut self, factor: f64) {
        match &mut self.kind {
            MetricKind::Euclidean { coords, .. } => coords.iter_mut().for_each(|c| *c *= factor),
            MetricKind::UnitBall { coords, mu, .. } => {
                coords.iter_mut().for_each(|c| *c *= factor);
                *mu *= factor;
            }
            MetricKind::Matrix { dist } => dist.iter_mut().for_each(|d| *d *= factor),
        }
        self.scale *= factor;
    }

    fn validate_matrix(&self) -> Result<()> {
        let MetricKind::Matrix { dist } = &self.kind else {
            return Ok(());
        };
        let n = self.n;
        let d = |i: usize, j: usize| dist[i * n + j];
        for i in 0..n {
            if d(i, i) != 0.0 {
                return Err(Error::InvalidDistance {
                    i,
                    j: i,
                    value: d(i, i),
                });
            }
            for j in i + 1..n {
                let (a, b) = (d(i, j), d(j, i));
                if (a - b).abs() > REL_TOL * a.max(b) {
                    return Err(Error::Asymmetric {
                        i,
                        j,
                        forward: a,
                        backward: b,
                    });
                }
            }
        }
        let check = |i: usize, j: usize, k: usize| -> Result<()> {
            let (ij, jk, ik) = (d(i, j), d(j, k), d(i, k));
            if ik > (ij + jk) * (1.0 + REL_TOL) {
                Err(Error::TriangleViolation { i, j, k, ij, jk, ik })
            } else {
                Ok(())
            }
        };
        if n <= TRIANGLE_EXHAUSTIVE_LIMIT {
            for i in 0..n {
                for k in i + 1..n {
                    for j in 0..n {
                        if j != i && j != k {
                            check(i, j, k)?;
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7472_6961_6e67_6c65);
            for _ in 0..TRIANGLE_SAMPLES {
                let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                check(i, j, k)?;
            }
        }
        Ok(())
    }
}

fn flatten<P: AsRef<[f64]>>(points: &[P]) -> Result<(usize, Vec<f64>)> {
    let first = points.first().ok_or(Error::Empty)?;
    let dim = first.as_ref().len();
    if dim == 0 {
        return Err(Error::InvalidParameter("points need at least one coordinate".into()));
    }
    let mut coords = Vec::with_capacity(points.len() * dim);
    for (index, p) in points.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                index,
                expected: dim,
                found: p.len(),
            });
        }
        if let Some(&bad) = p.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidDistance {
                i: index,
                j: index,
                value: bad,
            });
        }
        coords.extend_from_slice(p);
    }
    Ok((dim, coords))
}

fn gather(coords: &[f64], dim: usize, ids: &[usize]) -> Vec<f64> {
    ids.iter()
        .flat_map(|&i| coords[i * dim..(i + 1) * dim].iter().copied())
        .collect()
}

/// Validates `raw` and rescales it so the minimum positive pairwise distance
/// is 1, recording the spread.
///
/// Distinct vertices at distance zero are rejected with the offending pair;
/// matrices are also checked for symmetry and the triangle inequality (all
/// triples up to [`TRIANGLE_EXHAUSTIVE_LIMIT`] points, sampled above).
/// A metric whose minimum distance is already 1 within [`REL_TOL`] is left
/// untouched, which makes the operation idempotent.
pub fn load_and_normalize(mut raw: MetricInput) -> Result<MetricInput> {
    if raw.n == 0 {
        return Err(Error::Empty);
    }
    raw.validate_matrix()?;
    for i in 0..raw.n {
        for j in i + 1..raw.n {
            if raw.dist(i, j) == 0.0 {
                return Err(Error::DuplicatePoints(i, j));
            }
        }
    }
    if raw.n == 1 {
        raw.spread = Some(1.0);
        return Ok(raw);
    }
    let (min, _) = raw.extreme_distances();
    if (min - 1.0).abs() > REL_TOL {
        raw.rescale(1.0 / min);
    }
    let (_, max) = raw.extreme_distances();
    raw.spread = Some(max);
    Ok(raw)
}

/// Closed ball: every vertex within distance `r` of `center`, ascending.
pub fn ball(m: &MetricInput, center: usize, r: f64) -> Vec<usize> {
    (0..m.len()).filter(|&v| m.dist(center, v) <= r).collect()
}

/// Largest pairwise distance inside `set`.
pub fn diameter(m: &MetricInput, set: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for (k, &a) in set.iter().enumerate() {
        for &b in &set[k + 1..] {
            best = best.max(m.dist(a, b));
        }
    }
    best
}

/// Smallest distance between a point of `a` and a point of `b`.
pub fn set_distance(m: &MetricInput, a: &[usize], b: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for &x in a {
        for &y in b {
            best = best.min(m.dist(x, y));
        }
    }
    best
}

/// Whether `(a, b)` is a `c`-separated pair: `δ(a, b) ≥ c · max(diam a, diam b)`.
pub fn is_separated_pair(m: &MetricInput, a: &[usize], b: &[usize], c: f64) -> bool {
    let r = diameter(m, a).max(diameter(m, b));
    set_distance(m, a, b) >= c * r
}

/// Regression estimate of the fractal dimension of a Euclidean point set.
///
/// For every `(r, R)` pair an `r`-net of all points is built and the largest
/// number of net points inside a radius-`R` ball centred at a net point is
/// recorded. The returned value is the least-squares slope of `ln count`
/// against `ln(R / r)`. It is a diagnostic, not a certified bound.
pub fn estimate_fractal_dimension(m: &MetricInput, radii: &[(f64, f64)]) -> Result<f64> {
    if !matches!(m.kind(), MetricKind::Euclidean { .. }) {
        return Err(Error::InvalidParameter(
            "fractal dimension is only estimated for Euclidean point sets".into(),
        ));
    }
    if radii.len() < 2 {
        return Err(Error::InvalidParameter("need at least two radius pairs".into()));
    }
    let all: Vec<usize> = (0..m.len()).collect();
    let mut xs = Vec::with_capacity(radii.len());
    let mut ys = Vec::with_capacity(radii.len());
    for &(r, big_r) in radii {
        if !(r > 0.0 && big_r >= 2.0 * r) {
            return Err(Error::InvalidParameter(format!(
                "radius pair ({r}, {big_r}) must satisfy r > 0 and R >= 2r"
            )));
        }
        let net = build_net(m, &all, r);
        let count = net
            .iter()
            .map(|&p| net.iter().filter(|&&q| m.dist(p, q) <= big_r).count())
            .max()
            .unwrap_or(0);
        xs.push((big_r / r).ln());
        ys.push((count as f64).ln());
    }
    if ys.iter().all(|&y| y == 0.0) {
        return Err(Error::FractalUndefined("every ball holds a single net point"));
    }
    ls_slope(&xs, &ys).ok_or(Error::FractalUndefined("all radius ratios are equal"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> MetricInput {
        let pts: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        MetricInput::euclidean(&pts).unwrap()
    }

    fn grid(k: usize) -> MetricInput {
        let pts: Vec<Vec<f64>> = (0..k)
            .flat_map(|i| (0..k).map(move |j| vec![i as f64, j as f64]))
            .collect();
        MetricInput::euclidean(&pts).unwrap()
    }

    #[test]
    fn normalizes_a_line() {
        let m = load_and_normalize(line(&[0.0, 2.0, 6.0])).unwrap();
        assert_eq!(m.point(1).unwrap(), &[1.0]);
        assert_eq!(m.point(2).unwrap(), &[3.0]);
        assert_eq!(m.spread(), 3.0);
        assert_eq!(m.scale(), 0.5);
    }

    #[test]
    fn single_point_has_unit_spread() {
        let m = load_and_normalize(line(&[4.0])).unwrap();
        assert_eq!(m.point(0).unwrap(), &[4.0]);
        assert_eq!(m.spread(), 1.0);
    }

    #[test]
    fn grid_is_already_normalized() {
        let raw = grid(3);
        let m = load_and_normalize(raw.clone()).unwrap();
        assert_eq!(m.kind(), raw.kind());
        assert!((m.spread() - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_duplicates() {
        let err = load_and_normalize(line(&[0.0, 1.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::DuplicatePoints(1, 2)));
    }

    #[test]
    fn rejects_broken_matrices() {
        let asym = MetricInput::from_matrix(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(matches!(load_and_normalize(asym), Err(Error::Asymmetric { .. })));

        let tri = MetricInput::from_matrix(&[
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap();
        match load_and_normalize(tri) {
            Err(Error::TriangleViolation { i, j, k, .. }) => assert_eq!((i, j, k), (0, 1, 2)),
            other => panic!("expected a triangle violation, got {other:?}"),
        }

        assert!(MetricInput::from_matrix(&[vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
        assert!(MetricInput::from_matrix(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn unit_ball_radius_is_rescaled() {
        let m = MetricInput::unit_ball(&[[0.0, 0.0], [0.5, 0.0]], 0.5).unwrap();
        let m = load_and_normalize(m).unwrap();
        assert_eq!(m.mu(), Some(1.0));
        assert!(m.host_adjacent(0, 1));
    }

    #[test]
    fn balls() {
        let m = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(ball(&m, 1, 1.0), vec![0, 1, 2]);
        assert_eq!(ball(&m, 2, 0.0), vec![2]);
        let g = grid(3);
        // centre (1, 1) has id 4
        assert_eq!(ball(&g, 4, 1.2), vec![1, 3, 4, 5, 7]);
    }

    #[test]
    fn separated_pairs() {
        let m = line(&[0.0, 1.0, 3.0, 4.0, 5.0]);
        assert!(is_separated_pair(&m, &[0], &[4], 100.0));
        assert!(is_separated_pair(&m, &[0, 1], &[2, 3], 2.0));
        assert!(!is_separated_pair(&m, &[0, 1], &[2, 3], 3.0));
    }

    #[test]
    fn subset_keeps_distances() {
        let m = grid(3).to_matrix();
        let s = m.subset(&[8, 0]);
        assert!((s.dist(0, 1) - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fractal_needs_variation() {
        let m = line(&[0.0, 10.0, 20.0]);
        assert!(matches!(
            estimate_fractal_dimension(&m, &[(1.0, 2.0), (1.0, 4.0)]),
            Err(Error::FractalUndefined(_))
        ));
        assert!(estimate_fractal_dimension(&m, &[(1.0, 2.0)]).is_err());
    }
}
