//! Instance families.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{load_and_normalize, MetricInput};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Generator {
    /// All integer points of `[0, k)^d`. Vertex ids are row-major with the
    /// first coordinate varying fastest.
    Grid { k: usize, d: usize },
    /// `n` points uniform in the unit cube.
    Uniform { n: usize, d: usize, seed: u64 },
    /// Points whose every coordinate has `depth` ternary digits, each 0 or 2
    /// (middle thirds removed on each axis), scaled to integers. `2^(depth·d)` points.
    CantorDust { depth: usize, d: usize },
    /// Points `0, 1, 1 + b, 1 + b + b², …` on a line.
    ExpSpreadLine { n: usize, base: f64 },
    /// `n` centres uniform in a cube of side `n^(1/d)` (unit density) with
    /// ball radius `mu`.
    UbgUniform { n: usize, d: usize, mu: f64, seed: u64 },
    /// Distance matrix read from a CSV file.
    MatrixFile { path: PathBuf },
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidParameter(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

impl Generator {
    pub fn validate(&self) -> Result<()> {
        match self {
            Generator::Grid { k, d } => {
                positive("k", *k)?;
                positive("d", *d)
            }
            Generator::Uniform { n, d, .. } => {
                positive("n", *n)?;
                positive("d", *d)
            }
            Generator::CantorDust { depth, d } => {
                positive("d", *d)?;
                if depth * d > 24 {
                    return Err(Error::InvalidParameter(format!(
                        "cantor dust with depth {depth} in dimension {d} is too large"
                    )));
                }
                Ok(())
            }
            Generator::ExpSpreadLine { n, base } => {
                positive("n", *n)?;
                if !(*base > 2.0 && base.is_finite()) {
                    return Err(Error::InvalidParameter(format!("base must exceed 2, got {base}")));
                }
                Ok(())
            }
            Generator::UbgUniform { n, d, mu, .. } => {
                positive("n", *n)?;
                positive("d", *d)?;
                if !(*mu > 0.0 && mu.is_finite()) {
                    return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
                }
                Ok(())
            }
            Generator::MatrixFile { .. } => Ok(()),
        }
    }

    /// Coordinates of a point-based family; `None` for matrix files.
    pub fn points(&self) -> Result<Option<Vec<Vec<f64>>>> {
        self.validate()?;
        Ok(Some(match self {
            Generator::Grid { k, d } => grid(*k, *d),
            Generator::Uniform { n, d, seed } => uniform(*n, *d, 1.0, *seed),
            Generator::CantorDust { depth, d } => cantor_dust(*depth, *d),
            Generator::ExpSpreadLine { n, base } => exp_spread_line(*n, *base),
            Generator::UbgUniform { n, d, seed, .. } => {
                uniform(*n, *d, (*n as f64).powf(1.0 / *d as f64), *seed)
            }
            Generator::MatrixFile { .. } => return Ok(None),
        }))
    }

    /// Raw (unnormalized) metric.
    pub fn raw_metric(&self) -> Result<MetricInput> {
        match self {
            Generator::MatrixFile { path } => {
                let rows = crate::io::read_matrix_csv(path)?;
                MetricInput::from_matrix(&rows)
            }
            Generator::UbgUniform { mu, .. } => {
                MetricInput::unit_ball(&self.points()?.expect("point family"), *mu)
            }
            _ => MetricInput::euclidean(&self.points()?.expect("point family")),
        }
    }

    pub fn metric(&self) -> Result<MetricInput> {
        load_and_normalize(self.raw_metric()?)
    }

    /// Ambient dimension, when there is one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Generator::Grid { d, .. }
            | Generator::Uniform { d, .. }
            | Generator::CantorDust { d, .. }
            | Generator::UbgUniform { d, .. } => Some(*d),
            Generator::ExpSpreadLine { .. } => Some(1),
            Generator::MatrixFile { .. } => None,
        }
    }

    /// The same family resized to (about) `n` vertices. Grids and Cantor dust
    /// need `n` to be an exact power of the right kind.
    pub fn with_size(&self, n: usize) -> Result<Generator> {
        let bad = || Error::InvalidParameter(format!("cannot resize {self:?} to {n} vertices"));
        Ok(match self {
            Generator::Grid { d, .. } => {
                let k = (n as f64).powf(1.0 / *d as f64).round() as usize;
                if k.pow(*d as u32) != n {
                    return Err(bad());
                }
                Generator::Grid { k, d: *d }
            }
            Generator::Uniform { d, seed, .. } => Generator::Uniform { n, d: *d, seed: *seed },
            Generator::CantorDust { d, .. } => {
                let bits = n.trailing_zeros() as usize;
                if !n.is_power_of_two() || !bits.is_multiple_of(*d) {
                    return Err(bad());
                }
                Generator::CantorDust { depth: bits / d, d: *d }
            }
            Generator::ExpSpreadLine { base, .. } => Generator::ExpSpreadLine { n, base: *base },
            Generator::UbgUniform { d, mu, seed, .. } => Generator::UbgUniform {
                n,
                d: *d,
                mu: *mu,
                seed: *seed,
            },
            Generator::MatrixFile { .. } => return Err(bad()),
        })
    }
}

pub fn grid(k: usize, d: usize) -> Vec<Vec<f64>> {
    let n = k.pow(d as u32);
    (0..n)
        .map(|mut id| {
            (0..d)
                .map(|_| {
                    let c = id % k;
                    id /= k;
                    c as f64
                })
                .collect()
        })
        .collect()
}

pub fn uniform(n: usize, d: usize, side: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..d).map(|_| side * rng.gen::<f64>()).collect())
        .collect()
}

pub fn cantor_dust(depth: usize, d: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..1usize << depth)
        .map(|bits| {
            (0..depth)
                .map(|k| if bits >> k & 1 == 1 { 2.0 * 3f64.powi(k as i32) } else { 0.0 })
                .sum()
        })
        .collect();
    let per_axis = axis.len();
    let n = per_axis.pow(d as u32);
    (0..n)
        .map(|mut id| {
            (0..d)
                .map(|_| {
                    let c = axis[id % per_axis];
                    id /= per_axis;
                    c
                })
                .collect()
        })
        .collect()
}

pub fn exp_spread_line(n: usize, base: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(n);
    let mut x = 0.0;
    let mut step = 1.0;
    for _ in 0..n {
        out.push(vec![x]);
        x += step;
        step *= base;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let g = grid(3, 2);
        assert_eq!(g.len(), 9);
        assert_eq!(g[5], vec![2.0, 1.0]);
    }

    #[test]
    fn cantor_axis() {
        let c = cantor_dust(2, 1);
        let xs: Vec<f64> = c.iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 2.0, 6.0, 8.0]);
        assert_eq!(cantor_dust(3, 2).len(), 64);
    }

    #[test]
    fn exp_line_positions() {
        let p = exp_spread_line(4, 3.0);
        assert_eq!(p, vec![vec![0.0], vec![1.0], vec![4.0], vec![13.0]]);
        assert!(Generator::ExpSpreadLine { n: 4, base: 2.0 }.validate().is_err());
    }

    #[test]
    fn uniform_is_seeded() {
        assert_eq!(uniform(5, 2, 1.0, 9), uniform(5, 2, 1.0, 9));
        assert_ne!(uniform(5, 2, 1.0, 9), uniform(5, 2, 1.0, 10));
    }

    #[test]
    fn resizing() {
        let g = Generator::Grid { k: 4, d: 2 };
        assert_eq!(g.with_size(1024).unwrap(), Generator::Grid { k: 32, d: 2 });
        assert!(g.with_size(1000).is_err());
        let c = Generator::CantorDust { depth: 1, d: 2 };
        assert_eq!(c.with_size(1024).unwrap(), Generator::CantorDust { depth: 5, d: 2 });
    }

    #[test]
    fn unit_ball_family() {
        let m = Generator::UbgUniform { n: 50, d: 2, mu: 1.0, seed: 3 }.metric().unwrap();
        assert!(m.mu().is_some());
        assert_eq!(m.len(), 50);
    }
}
