use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a metric needs at least one point")]
    Empty,

    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("distance matrix row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid distance {value} between {i} and {j}")]
    InvalidDistance { i: usize, j: usize, value: f64 },

    #[error("points {0} and {1} are at distance zero")]
    DuplicatePoints(usize, usize),

    #[error("distance matrix is asymmetric at ({i}, {j}): {forward} vs {backward}")]
    Asymmetric {
        i: usize,
        j: usize,
        forward: f64,
        backward: f64,
    },

    #[error("triangle inequality fails for ({i}, {j}, {k}): d(i,k) = {ik} > d(i,j) + d(j,k) = {ij} + {jk}")]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        ij: f64,
        jk: f64,
        ik: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least {needed} vertices, got {found}")]
    TooFewVertices { needed: usize, found: usize },

    #[error(
        "no center satisfies the ball conditions for lambda = {lambda}; best near miss is \
         vertex {vertex} at radius {radius} with {inside} inside and {outer} within twice the radius (n = {n})"
    )]
    CenterInfeasible {
        lambda: f64,
        vertex: usize,
        radius: f64,
        inside: usize,
        outer: usize,
        n: usize,
    },

    #[error("fractal dimension estimate is undefined: {0}")]
    FractalUndefined(&'static str),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
