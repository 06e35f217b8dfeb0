//! File formats.
//!
//! * Points: CSV with one point per row, or JSON `{"dim": d, "points": [[…]], "mu": μ}`
//!   where `mu` is optional and marks a unit ball input.
//! * Distance matrices: CSV with `n` rows of `n` values.
//! * Graphs: JSON `{"n": n, "edges": [[u, v, w], …]}` or CSV `u,v,w`, weights
//!   written with 17 significant digits.
//! * Separators, decompositions, reroute logs and check reports: JSON.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cgmz::Reroute;
use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::metric::{MetricInput, MetricKind};
use crate::oracle::CheckReport;
use crate::separator::{Decomposition, SeparatorResult};

/// Formats a weight so that it parses back to the same `f64`.
pub fn fmt_weight(w: f64) -> String {
    format!("{w:.16e}")
}

fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if k == 0 && rows.is_empty() => continue,
            Err(e) => return Err(Error::Parse(format!("row {}: {e}", k + 1))),
        }
    }
    Ok(rows)
}

/// Points from CSV. A non-numeric first row is treated as a header.
pub fn read_points_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    parse_rows(&fs::read_to_string(path)?)
}

pub fn read_matrix_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    parse_rows(&fs::read_to_string(path)?)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PointsFile {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

pub fn read_points_json(path: &Path) -> Result<PointsFile> {
    let f: PointsFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    if let Some((i, p)) = f.points.iter().enumerate().find(|(_, p)| p.len() != f.dim) {
        return Err(Error::DimensionMismatch {
            index: i,
            expected: f.dim,
            found: p.len(),
        });
    }
    Ok(f)
}

/// Loads a raw metric. JSON files are point sets; CSV files are point sets
/// unless `matrix` is set. A `mu` given here overrides one found in the file
/// and turns the input into a unit ball graph.
pub fn load_metric(path: &Path, matrix: bool, mu: Option<f64>) -> Result<MetricInput> {
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if matrix {
        return MetricInput::from_matrix(&read_matrix_csv(path)?);
    }
    let (points, file_mu) = if is_json {
        let f = read_points_json(path)?;
        (f.points, f.mu)
    } else {
        (read_points_csv(path)?, None)
    };
    match mu.or(file_mu) {
        Some(mu) => MetricInput::unit_ball(&points, mu),
        None => MetricInput::euclidean(&points),
    }
}

pub fn points_to_csv(points: &[Vec<f64>]) -> String {
    let mut s = String::new();
    for p in points {
        let row: Vec<String> = p.iter().map(|x| fmt_weight(*x)).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn points_to_json(points: &[Vec<f64>], mu: Option<f64>) -> String {
    let f = PointsFile {
        dim: points.first().map_or(0, Vec::len),
        points: points.to_vec(),
        mu,
    };
    serde_json::to_string(&f).expect("points serialize")
}

pub fn matrix_to_csv(m: &MetricInput) -> String {
    let n = m.len();
    let mut s = String::new();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| fmt_weight(m.dist(i, j))).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Coordinates of a point-based metric, one vector per vertex.
pub fn metric_points(m: &MetricInput) -> Option<Vec<Vec<f64>>> {
    match m.kind() {
        MetricKind::Euclidean { dim, coords } | MetricKind::UnitBall { dim, coords, .. } => {
            Some(coords.chunks(*dim.max(&1)).map(<[f64]>::to_vec).collect())
        }
        MetricKind::Matrix { .. } => None,
    }
}

pub fn graph_to_json(g: &WeightedGraph) -> String {
    let mut s = format!("{{\"n\":{},\"edges\":[", g.n());
    for (k, e) in g.edges().iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        write!(s, "[{},{},{}]", e.u, e.v, fmt_weight(e.w)).unwrap();
    }
    s.push_str("]}");
    s
}

pub fn graph_to_csv(g: &WeightedGraph) -> String {
    let mut s = String::from("u,v,w\n");
    for e in g.edges() {
        writeln!(s, "{},{},{}", e.u, e.v, fmt_weight(e.w)).unwrap();
    }
    s
}

#[derive(Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

fn build_graph(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<WeightedGraph> {
    let mut g = WeightedGraph::new(n);
    for (u, v, w) in edges {
        if u >= n || v >= n || u == v || !(w > 0.0 && w.is_finite()) {
            return Err(Error::Parse(format!("bad edge ({u}, {v}, {w}) for n = {n}")));
        }
        g.add_edge(u, v, w);
    }
    Ok(g)
}

pub fn graph_from_json(text: &str) -> Result<WeightedGraph> {
    let f: GraphFile = serde_json::from_str(text)?;
    build_graph(f.n, f.edges)
}

/// Edge-list CSV. The vertex count is not stored, so it must be supplied.
pub fn graph_from_csv(text: &str, n: usize) -> Result<WeightedGraph> {
    let rows = parse_rows(text)?;
    let mut edges = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != 3 {
            return Err(Error::Parse(format!("edge rows need 3 fields, got {}", row.len())));
        }
        edges.push((row[0] as usize, row[1] as usize, row[2]));
    }
    build_graph(n, edges)
}

/// Reads a graph file, choosing the format from the extension.
pub fn read_graph(path: &Path, n: usize) -> Result<WeightedGraph> {
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        graph_from_csv(&text, n)
    } else {
        graph_from_json(&text)
    }
}

fn edges_value(edges: &[Edge]) -> Value {
    Value::Array(edges.iter().map(|e| json!([e.u, e.v, e.w])).collect())
}

pub fn separator_to_json(res: &SeparatorResult) -> Value {
    json!({
        "center": res.center,
        "r": res.base_radius,
        "r_star": res.final_radius,
        "sigma": res.sigma,
        "separator": res.s,
        "components": res.components,
        "inside_count": res.inside_count,
        "cut_edges": edges_value(&res.cut_edges),
        "short_cut_edges": edges_value(&res.short_cut_edges),
    })
}

pub fn separator_from_json(v: &Value) -> Result<SeparatorResult> {
    let bad = |k: &str| Error::Parse(format!("separator field `{k}` missing or malformed"));
    let num = |k: &str| v.get(k).and_then(Value::as_f64).ok_or_else(|| bad(k));
    let ids = |k: &str| -> Result<Vec<usize>> {
        v.get(k)
            .and_then(Value::as_array)
            .ok_or_else(|| bad(k))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad(k)))
            .collect()
    };
    let edges = |k: &str| -> Result<Vec<Edge>> {
        let Some(arr) = v.get(k).and_then(Value::as_array) else {
            return Ok(Vec::new());
        };
        arr.iter()
            .map(|e| {
                let t: (usize, usize, f64) = serde_json::from_value(e.clone()).map_err(|_| bad(k))?;
                Ok(Edge::new(t.0, t.1, t.2))
            })
            .collect()
    };
    Ok(SeparatorResult {
        s: ids("separator")?,
        center: num("center")? as usize,
        base_radius: num("r")?,
        final_radius: num("r_star")?,
        sigma: v.get("sigma").and_then(Value::as_f64).unwrap_or(f64::NAN),
        cut_edges: edges("cut_edges")?,
        short_cut_edges: edges("short_cut_edges")?,
        inside_count: v.get("inside_count").and_then(Value::as_u64).unwrap_or(0) as usize,
        components: ids("components")?,
    })
}

pub fn decomposition_to_json(node: &Decomposition) -> Value {
    match node {
        Decomposition::Leaf { vertices } => json!({ "leaf": vertices }),
        Decomposition::Split {
            vertices,
            separator,
            children,
        } => json!({
            "vertices": vertices,
            "separator": separator_to_json(separator),
            "children": children.iter().map(decomposition_to_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn reroute_log_to_json(log: &[Reroute]) -> Value {
    serde_json::to_value(log).expect("reroutes serialize")
}

/// One JSON object per line.
pub fn reports_to_jsonl(reports: &[CheckReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&serde_json::to_string(r).expect("reports serialize"));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_round_trip() {
        for w in [1.0, 2f64.sqrt(), 1.0 / 3.0, 12345.678901234567, 1e-300, 7e300] {
            assert_eq!(fmt_weight(w).parse::<f64>().unwrap(), w);
        }
    }

    #[test]
    fn graph_json_round_trip() {
        let g = WeightedGraph::from_edges(3, [Edge::new(0, 1, 2f64.sqrt()), Edge::new(1, 2, 0.1)]);
        let text = graph_to_json(&g);
        assert!(serde_json::from_str::<Value>(&text).is_ok());
        assert_eq!(graph_from_json(&text).unwrap(), g);
        assert_eq!(graph_from_csv(&graph_to_csv(&g), 3).unwrap(), g);
    }

    #[test]
    fn csv_header_is_skipped() {
        let rows = parse_rows("x,y\n0,1\n2,3\n").unwrap();
        assert_eq!(rows, vec![vec![0.0, 1.0], vec![2.0, 3.0]]);
        assert!(parse_rows("0,1\nx,y\n").is_err());
    }

    #[test]
    fn bad_graph_is_rejected() {
        assert!(graph_from_json(r#"{"n":2,"edges":[[0,0,1.0]]}"#).is_err());
        assert!(graph_from_json(r#"{"n":2,"edges":[[0,5,1.0]]}"#).is_err());
    }
}
