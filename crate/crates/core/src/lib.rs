//! Greedy and bounded-degree (1+ε)-spanners over Euclidean point sets, unit
//! ball graphs and distance-matrix metrics, together with the randomized
//! ball-cut separator for lanky graphs and a set of brute-force verifiers.
//!
//! The crate is organised bottom-up:
//!
//! * [`metric`] holds the metric abstraction, nets, the net tree and the
//!   well-separated pair decomposition built on top of it.
//! * [`graph`] is the weighted undirected graph shared by every construction.
//! * [`greedy`] and [`cgmz`] build spanners.
//! * [`separator`] extracts balanced separators by cutting with a random ball.
//! * [`oracle`] re-checks every property from raw inputs.
//! * [`generate`], [`io`] and [`experiment`] provide instance families, file
//!   formats and the end-to-end pipelines used by the command-line tool.

pub mod cgmz;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod metric;
pub mod oracle;
pub mod separator;
mod stats;

pub use error::{Error, Result};
pub use graph::{Edge, WeightedGraph};
pub use metric::{MetricInput, MetricKind};
