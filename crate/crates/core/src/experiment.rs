//! End-to-end pipelines: generate, build a spanner, verify it, separate it.

use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cgmz::{cgmz_build, CgmzConfig};
use crate::error::{Error, Result};
use crate::generate::Generator;
use crate::graph::WeightedGraph;
use crate::greedy::{check_eps, greedy_spanner_detailed, GreedyConfig};
use crate::io;
use crate::metric::{build_net_tree, estimate_fractal_dimension, MetricInput};
use crate::oracle::{self, CheckReport, Host};
use crate::separator::{extract_separator, PackingParams, SeparatorConfig, SeparatorResult, Variant};
use crate::stats::{ls_slope, median};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Cgmz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Lankiness,
    WeakLankiness,
    Thinness,
    Cone,
    SeparatedPairs,
    Degree,
    EdgeCount,
    LongEdges,
    Mst,
    Fractal,
    Packing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeparatorSpec {
    pub variant: Variant,
    /// Packing dimension; defaults to the ambient dimension (1 for matrices).
    pub d: Option<f64>,
    /// Doubling constant; defaults to `4 · 2^d`.
    pub lambda: Option<f64>,
    pub seed: u64,
    pub resample_budget: usize,
}

impl Default for SeparatorSpec {
    fn default() -> Self {
        Self {
            variant: Variant::Lanky,
            d: None,
            lambda: None,
            seed: 0,
            resample_budget: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub generator: Generator,
    pub algorithm: Algorithm,
    pub eps: f64,
    #[serde(default)]
    pub separator: SeparatorSpec,
    /// Checks run on top of the stretch, greedy-edge or reroute, and separator checks.
    #[serde(default)]
    pub checks: Vec<Check>,
    /// Replace the generated points by their explicit distance matrix.
    #[serde(default)]
    pub as_matrix: bool,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        check_eps(self.eps)
    }

    pub fn packing_params(&self, m: &MetricInput) -> PackingParams {
        let d = self
            .separator
            .d
            .unwrap_or_else(|| m.dim().or(self.generator.dim()).unwrap_or(1) as f64);
        let p = PackingParams::euclidean(d);
        match self.separator.lambda {
            Some(l) => p.with_lambda(l),
            None => p,
        }
    }

    pub fn separator_config(&self, m: &MetricInput) -> SeparatorConfig {
        SeparatorConfig {
            resample_budget: self.separator.resample_budget,
            ..SeparatorConfig::new(self.packing_params(m), self.separator.variant, self.separator.seed)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub tau: Option<f64>,
    pub kappa: Option<f64>,
    pub separator_size: usize,
    pub largest_component_fraction: f64,
    pub wall_ms: u128,
}

pub const SUMMARY_HEADER: &str =
    "n,edges,max_degree,tau,kappa,separator_size,largest_component_fraction,wall_ms";

impl SummaryRow {
    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{:.6},{}",
            self.n,
            self.edges,
            self.max_degree,
            opt(self.tau),
            opt(self.kappa),
            self.separator_size,
            self.largest_component_fraction,
            self.wall_ms
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub metric: MetricInput,
    pub spanner: WeightedGraph,
    pub separator: SeparatorResult,
    pub reports: Vec<CheckReport>,
    pub summary: SummaryRow,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&CheckReport> {
        self.reports.iter().filter(|r| !r.passed).collect()
    }
}

/// Runs one experiment. When `out` is given, writes `instance.*`,
/// `spanner.json`, `separator.json`, `checks.jsonl`, `summary.csv` and, for
/// the bounded-degree spanner, `reroutes.json` into it.
pub fn run(spec: &ExperimentSpec, out: Option<&Path>) -> Result<RunOutcome> {
    spec.validate()?;
    let start = Instant::now();
    let mut m = spec.generator.metric()?;
    if spec.as_matrix {
        m = m.to_matrix();
    }
    let host_graph = oracle::unit_ball_host(&m);
    let host = || match &host_graph {
        Some(h) => Host::Graph(h),
        None => Host::Metric(&m),
    };
    let mut reports = Vec::new();
    let mut reroutes = None;
    let mut g1 = None;
    let spanner = match spec.algorithm {
        Algorithm::Greedy => {
            let cfg = GreedyConfig::new(spec.eps);
            let out = greedy_spanner_detailed(&m, &cfg)?;
            reports.push(oracle::verify_stretch(&out.graph, host(), cfg.t()));
            reports.push(oracle::verify_greedy_edge_property(&out.graph, cfg.t()));
            out.graph
        }
        Algorithm::Cgmz => {
            let cfg = CgmzConfig::new(spec.eps)?;
            let (_, os) = cgmz_build(&m, &cfg);
            reports.push(oracle::verify_stretch(&os.g2, host(), cfg.stretch()));
            reports.push(oracle::verify_reroute_claims(&m, &os, spec.eps));
            reroutes = Some(os.reroute_log.clone());
            g1 = Some((os.g1, cfg.gamma()));
            os.g2
        }
    };
    let sep_cfg = spec.separator_config(&m);
    let separator = extract_separator(&spanner, &m, &sep_cfg)?;
    reports.push(oracle::verify_separator(&separator, &spanner, &m, &sep_cfg.params));

    let mut tau = None;
    let mut kappa = None;
    let needs_tree = spec
        .checks
        .iter()
        .any(|c| matches!(c, Check::Thinness | Check::Cone | Check::SeparatedPairs));
    let tree = needs_tree.then(|| build_net_tree(&m));
    for check in &spec.checks {
        let rep = match check {
            Check::Lankiness => {
                let r = oracle::measure_lankiness(&spanner, &m);
                tau = Some(r.measured);
                r
            }
            Check::WeakLankiness => oracle::measure_weak_lankiness(&spanner, &m),
            Check::Thinness => {
                let r = oracle::measure_thinness(&spanner, &m, tree.as_ref().unwrap());
                kappa = Some(r.measured);
                r
            }
            Check::Cone => oracle::verify_cone_property(
                &spanner,
                &m,
                tree.as_ref().unwrap(),
                spec.eps,
                100,
                spec.separator.seed,
            ),
            Check::SeparatedPairs => {
                let limit = (spec.algorithm == Algorithm::Greedy).then_some(1);
                oracle::max_edges_per_wspd_pair(
                    &spanner,
                    &m,
                    tree.as_ref().unwrap(),
                    4.0 / spec.eps,
                    limit,
                )
            }
            Check::Degree => oracle::max_degree(&spanner, None),
            Check::EdgeCount => oracle::count_edges(&spanner, None),
            Check::LongEdges => match &g1 {
                Some((g1, gamma)) => oracle::verify_long_edge_endpoints(g1, &m, *gamma),
                None => continue,
            },
            Check::Mst => oracle::verify_mst_containment(&spanner, &m),
            Check::Fractal => fractal_report(&m),
            Check::Packing => oracle::packing_report(&m, &sep_cfg.params, 200, spec.separator.seed),
        };
        reports.push(rep);
    }

    let n = m.len();
    let summary = SummaryRow {
        n,
        edges: spanner.num_edges(),
        max_degree: spanner.max_degree(),
        tau,
        kappa,
        separator_size: separator.s.len(),
        largest_component_fraction: separator.largest_component() as f64 / n as f64,
        wall_ms: start.elapsed().as_millis(),
    };
    let outcome = RunOutcome {
        metric: m,
        spanner,
        separator,
        reports,
        summary,
    };
    if let Some(dir) = out {
        write_artifacts(dir, spec, &outcome, reroutes.as_deref())?;
    }
    Ok(outcome)
}

fn fractal_report(m: &MetricInput) -> CheckReport {
    let radii: Vec<(f64, f64)> = (0..4).map(|k| (1.0, 2f64.powi(k + 1))).collect();
    let mut rep = CheckReport {
        check_name: "fractal_dimension".into(),
        passed: true,
        measured: f64::NAN,
        bound: m.dim().map(|d| d as f64),
        witness: None,
        note: None,
    };
    match estimate_fractal_dimension(m, &radii) {
        Ok(v) => rep.measured = v,
        Err(e) => {
            rep.passed = false;
            rep.note = Some(e.to_string());
        }
    }
    rep
}

fn write_artifacts(
    dir: &Path,
    spec: &ExperimentSpec,
    out: &RunOutcome,
    reroutes: Option<&[crate::cgmz::Reroute]>,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    match io::metric_points(&out.metric) {
        Some(points) => fs::write(dir.join("instance.json"), io::points_to_json(&points, out.metric.mu()))?,
        None => fs::write(dir.join("instance.csv"), io::matrix_to_csv(&out.metric))?,
    }
    fs::write(dir.join("spec.json"), serde_json::to_string_pretty(spec)?)?;
    fs::write(dir.join("spanner.json"), io::graph_to_json(&out.spanner))?;
    fs::write(
        dir.join("separator.json"),
        serde_json::to_string(&io::separator_to_json(&out.separator))?,
    )?;
    fs::write(dir.join("checks.jsonl"), io::reports_to_jsonl(&out.reports))?;
    fs::write(
        dir.join("summary.csv"),
        format!("{SUMMARY_HEADER}\n{}\n", out.summary.to_csv()),
    )?;
    if let Some(log) = reroutes {
        fs::write(dir.join("reroutes.json"), serde_json::to_string(&io::reroute_log_to_json(log))?)?;
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ScalingOutcome {
    /// One row per `(size, seed)`, sizes ascending.
    pub rows: Vec<SummaryRow>,
    /// Median separator size per size.
    pub medians: Vec<(usize, f64)>,
    /// Least-squares slope of `log median |S|` against `log n`; `None` with
    /// fewer than two sizes or a zero median.
    pub slope: Option<f64>,
    pub failures: Vec<CheckReport>,
}

/// Runs `template` at every size with separator seeds `seed, seed + 1, …,
/// seed + seeds − 1`. Writes `scaling.csv` and `fit.json` when `out` is given.
pub fn scaling(
    template: &ExperimentSpec,
    sizes: &[usize],
    seeds: usize,
    out: Option<&Path>,
) -> Result<ScalingOutcome> {
    if sizes.is_empty() || seeds == 0 {
        return Err(Error::InvalidParameter("need at least one size and one seed".into()));
    }
    let mut rows = Vec::new();
    let mut medians = Vec::new();
    let mut failures = Vec::new();
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    for &size in &sorted {
        let mut sizes_s = Vec::new();
        for k in 0..seeds {
            let mut spec = template.clone();
            spec.generator = template.generator.with_size(size)?;
            spec.separator.seed = template.separator.seed + k as u64;
            let res = run(&spec, None)?;
            failures.extend(res.failures().into_iter().cloned());
            sizes_s.push(res.summary.separator_size as f64);
            rows.push(res.summary);
        }
        medians.push((size, median(&sizes_s)));
    }
    let slope = if medians.len() >= 2 && medians.iter().all(|&(_, s)| s > 0.0) {
        let xs: Vec<f64> = medians.iter().map(|&(n, _)| (n as f64).ln()).collect();
        let ys: Vec<f64> = medians.iter().map(|&(_, s)| s.ln()).collect();
        ls_slope(&xs, &ys)
    } else {
        None
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let mut csv = format!("{SUMMARY_HEADER},seed\n");
        for (k, row) in rows.iter().enumerate() {
            csv.push_str(&format!("{},{}\n", row.to_csv(), template.separator.seed + (k % seeds) as u64));
        }
        fs::write(dir.join("scaling.csv"), csv)?;
        let fit = serde_json::json!({
            "sizes": medians.iter().map(|m| m.0).collect::<Vec<_>>(),
            "median_separator": medians.iter().map(|m| m.1).collect::<Vec<_>>(),
            "slope": slope,
        });
        fs::write(dir.join("fit.json"), serde_json::to_string_pretty(&fit)?)?;
    }
    Ok(ScalingOutcome {
        rows,
        medians,
        slope,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_spec() -> ExperimentSpec {
        ExperimentSpec {
            generator: Generator::Grid { k: 4, d: 2 },
            algorithm: Algorithm::Greedy,
            eps: 0.5,
            separator: SeparatorSpec::default(),
            checks: vec![Check::Lankiness, Check::Thinness, Check::Mst],
            as_matrix: false,
        }
    }

    #[test]
    fn small_grid_pipeline() {
        let out = run(&grid_spec(), None).unwrap();
        assert!(out.passed(), "{:?}", out.failures());
        assert!(out.summary.separator_size as f64 <= 4.0 * 4.0);
        assert_eq!(out.summary.edges, 24);
        assert!(out.summary.tau.is_some());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = grid_spec();
        let text = serde_json::to_string(&spec).unwrap();
        let back: ExperimentSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let minimal: ExperimentSpec = serde_json::from_str(
            r#"{"generator":{"type":"Uniform","n":10,"d":2,"seed":1},"algorithm":"cgmz","eps":0.5}"#,
        )
        .unwrap();
        assert_eq!(minimal.separator.resample_budget, 16);
    }

    #[test]
    fn single_size_has_no_slope() {
        let s = scaling(&grid_spec(), &[16], 2, None).unwrap();
        assert_eq!(s.rows.len(), 2);
        assert!(s.slope.is_none());
    }
}
