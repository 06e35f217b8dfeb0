//! `lanky`: build spanners, cut them with ball separators and check the results.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lanky::cgmz::{cgmz_build, CgmzConfig};
use lanky::experiment::{self, Algorithm, ExperimentSpec, SUMMARY_HEADER};
use lanky::generate::Generator;
use lanky::greedy::{greedy_spanner_detailed, GreedyConfig};
use lanky::io;
use lanky::metric::{build_net_tree, load_and_normalize, MetricInput};
use lanky::oracle::{self, CheckReport, Host};
use lanky::separator::{extract_separator, recursive_decompose, PackingParams, SeparatorConfig, Variant};
use lanky::WeightedGraph;

#[derive(Parser)]
#[command(name = "lanky", version, about = "Spanners, ball separators and their verifiers")]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "LANKY_OUT_DIR", default_value = ".")]
    out: PathBuf,
    /// Output format for points and graphs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Grid,
    Uniform,
    Cantor,
    ExpLine,
    Ubg,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Greedy,
    Cgmz,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Lanky,
    Thin,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Lanky => Variant::Lanky,
            VariantArg::Thin => Variant::WeaklyLankyThin,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum CheckArg {
    Stretch,
    GreedyEdge,
    Lankiness,
    WeakLankiness,
    Thinness,
    Cone,
    Pairs,
    Degree,
    Edges,
    Mst,
    Separator,
}

/// Where the vertices come from.
#[derive(Args)]
struct InputArgs {
    /// Points (CSV or JSON) or, with --matrix, a distance matrix CSV.
    #[arg(long)]
    input: PathBuf,
    /// Treat the CSV input as a distance matrix.
    #[arg(long)]
    matrix: bool,
    /// Ball radius for a unit ball graph input.
    #[arg(long)]
    mu: Option<f64>,
}

impl InputArgs {
    fn load(&self) -> Result<MetricInput> {
        let raw = io::load_metric(&self.input, self.matrix, self.mu)
            .with_context(|| format!("reading {}", self.input.display()))?;
        Ok(load_and_normalize(raw)?)
    }
}

#[derive(Args)]
struct SeparatorArgs {
    /// Packing dimension; defaults to the input dimension (1 for matrices).
    #[arg(long)]
    dim: Option<f64>,
    /// Doubling constant; defaults to 4 * 2^dim.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::Lanky)]
    variant: VariantArg,
    /// Number of random radii tried.
    #[arg(long, default_value_t = 16)]
    budget: usize,
}

impl SeparatorArgs {
    fn config(&self, m: &MetricInput) -> SeparatorConfig {
        let d = self.dim.unwrap_or(m.dim().unwrap_or(1) as f64);
        let mut params = PackingParams::euclidean(d);
        if let Some(l) = self.lambda {
            params = params.with_lambda(l);
        }
        SeparatorConfig {
            resample_budget: self.budget,
            ..SeparatorConfig::new(params, self.variant.into(), self.seed)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Number of points (uniform, ubg, exp-line).
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Points per side (grid).
        #[arg(long, default_value_t = 16)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Recursion depth (cantor).
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Growth factor (exp-line).
        #[arg(long, default_value_t = 3.0)]
        base: f64,
        /// Ball radius (ubg).
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Write the distance matrix instead of coordinates.
        #[arg(long)]
        as_matrix: bool,
    },
    /// Build a spanner.
    Spanner {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Greedy)]
        algorithm: AlgorithmArg,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Extract a separator from a graph.
    Separator {
        #[command(flatten)]
        input: InputArgs,
        /// Graph file (JSON, or CSV edge list).
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        sep: SeparatorArgs,
    },
    /// Run verifiers on a graph; exits nonzero when one fails.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        graph: PathBuf,
        /// Stretch target is 1 + eps for greedy-edge and stretch checks.
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Overrides the stretch target.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![CheckArg::Stretch])]
        checks: Vec<CheckArg>,
        /// Separator JSON to check with the `separator` check.
        #[arg(long)]
        separator: Option<PathBuf>,
        #[command(flatten)]
        sep: SeparatorArgs,
    },
    /// Run a pipeline at several sizes and fit the separator growth.
    Scaling {
        /// Experiment spec (JSON).
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Separator seeds per size.
        #[arg(long, default_value_t = 1)]
        seeds: usize,
    },
    /// Separate recursively down to small pieces.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 16)]
        leaf_size: usize,
        #[command(flatten)]
        sep: SeparatorArgs,
    },
    /// Run one experiment spec end to end.
    Run {
        #[arg(long)]
        spec: PathBuf,
    },
}

fn write(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn read_graph(path: &Path, n: usize) -> Result<WeightedGraph> {
    let g = io::read_graph(path, n).with_context(|| format!("reading {}", path.display()))?;
    if g.n() != n {
        bail!("graph has {} vertices but the input has {n}", g.n());
    }
    Ok(g)
}

fn read_spec(path: &Path) -> Result<ExperimentSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print_reports(reports: &[CheckReport]) -> bool {
    print!("{}", io::reports_to_jsonl(reports));
    reports.iter().all(|r| r.passed)
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    let out = cli.out.as_path();
    match cli.cmd {
        Command::Generate {
            family,
            n,
            k,
            dim,
            seed,
            depth,
            base,
            mu,
            as_matrix,
        } => {
            let gen = match family {
                Family::Grid => Generator::Grid { k, d: dim },
                Family::Uniform => Generator::Uniform { n, d: dim, seed },
                Family::Cantor => Generator::CantorDust { depth, d: dim },
                Family::ExpLine => Generator::ExpSpreadLine { n, base },
                Family::Ubg => Generator::UbgUniform { n, d: dim, mu, seed },
            };
            let points = gen.points()?.expect("generated families have points");
            let ubg_mu = matches!(family, Family::Ubg).then_some(mu);
            let path = if as_matrix {
                let m = MetricInput::euclidean(&points)?;
                write(out, "instance.csv", io::matrix_to_csv(&m))?
            } else if cli.format == Format::Csv {
                if ubg_mu.is_some() {
                    bail!("unit ball instances carry mu and need --format json");
                }
                write(out, "instance.csv", io::points_to_csv(&points))?
            } else {
                write(out, "instance.json", io::points_to_json(&points, ubg_mu))?
            };
            println!("{}", path.display());
            Ok(true)
        }
        Command::Spanner {
            input,
            algorithm,
            eps,
        } => {
            let m = input.load()?;
            let (g, extra) = match algorithm {
                AlgorithmArg::Greedy => {
                    let res = greedy_spanner_detailed(&m, &GreedyConfig::new(eps))?;
                    let info = json!({ "host_connected": res.host_connected });
                    (res.graph, info)
                }
                AlgorithmArg::Cgmz => {
                    let cfg = CgmzConfig::new(eps)?;
                    let (_, os) = cgmz_build(&m, &cfg);
                    write(
                        out,
                        "reroutes.json",
                        serde_json::to_string(&io::reroute_log_to_json(&os.reroute_log))?,
                    )?;
                    let info = json!({
                        "g1_edges": os.g1.num_edges(),
                        "reroutes": os.reroute_log.len(),
                        "gamma": cfg.gamma(),
                        "ell": cfg.ell(),
                    });
                    (os.g2, info)
                }
            };
            let path = match cli.format {
                Format::Json => write(out, "spanner.json", io::graph_to_json(&g))?,
                Format::Csv => write(out, "spanner.csv", io::graph_to_csv(&g))?,
            };
            println!(
                "{}",
                json!({
                    "file": path.display().to_string(),
                    "n": g.n(),
                    "edges": g.num_edges(),
                    "max_degree": g.max_degree(),
                    "scale": m.scale(),
                    "info": extra,
                })
            );
            Ok(true)
        }
        Command::Separator { input, graph, sep } => {
            let m = input.load()?;
            let g = read_graph(&graph, m.len())?;
            let cfg = sep.config(&m);
            let res = extract_separator(&g, &m, &cfg)?;
            let value = io::separator_to_json(&res);
            write(out, "separator.json", serde_json::to_string(&value)?)?;
            let rep = oracle::verify_separator(&res, &g, &m, &cfg.params);
            println!(
                "{}",
                json!({
                    "separator_size": res.s.len(),
                    "center": res.center,
                    "r_star": res.final_radius,
                    "largest_component": res.largest_component(),
                    "valid": rep.passed,
                })
            );
            Ok(rep.passed)
        }
        Command::Verify {
            input,
            graph,
            eps,
            t,
            checks,
            separator,
            sep,
        } => {
            let m = input.load()?;
            let g = read_graph(&graph, m.len())?;
            let t = t.unwrap_or(1.0 + eps);
            let ubg = oracle::unit_ball_host(&m);
            let needs_tree = checks
                .iter()
                .any(|c| matches!(c, CheckArg::Thinness | CheckArg::Cone | CheckArg::Pairs));
            let tree = needs_tree.then(|| build_net_tree(&m));
            let mut reports = Vec::new();
            for c in &checks {
                reports.push(match c {
                    CheckArg::Stretch => {
                        let host = match &ubg {
                            Some(h) => Host::Graph(h),
                            None => Host::Metric(&m),
                        };
                        oracle::verify_stretch(&g, host, t)
                    }
                    CheckArg::GreedyEdge => oracle::verify_greedy_edge_property(&g, t),
                    CheckArg::Lankiness => oracle::measure_lankiness(&g, &m),
                    CheckArg::WeakLankiness => oracle::measure_weak_lankiness(&g, &m),
                    CheckArg::Thinness => oracle::measure_thinness(&g, &m, tree.as_ref().unwrap()),
                    CheckArg::Cone => {
                        oracle::verify_cone_property(&g, &m, tree.as_ref().unwrap(), eps, 100, sep.seed)
                    }
                    CheckArg::Pairs => oracle::max_edges_per_wspd_pair(
                        &g,
                        &m,
                        tree.as_ref().unwrap(),
                        4.0 / eps,
                        Some(1),
                    ),
                    CheckArg::Degree => oracle::max_degree(&g, None),
                    CheckArg::Edges => oracle::count_edges(&g, None),
                    CheckArg::Mst => oracle::verify_mst_containment(&g, &m),
                    CheckArg::Separator => {
                        let path = separator
                            .as_ref()
                            .context("the separator check needs --separator FILE")?;
                        let text = fs::read_to_string(path)
                            .with_context(|| format!("reading {}", path.display()))?;
                        let res = io::separator_from_json(&serde_json::from_str(&text)?)?;
                        oracle::verify_separator(&res, &g, &m, &sep.config(&m).params)
                    }
                });
            }
            write(out, "checks.jsonl", io::reports_to_jsonl(&reports))?;
            Ok(print_reports(&reports))
        }
        Command::Scaling { spec, sizes, seeds } => {
            let spec = read_spec(&spec)?;
            let res = experiment::scaling(&spec, &sizes, seeds, Some(out))?;
            println!("{SUMMARY_HEADER}");
            for row in &res.rows {
                println!("{}", row.to_csv());
            }
            match res.slope {
                Some(s) => println!("slope,{s}"),
                None => println!("slope,undefined"),
            }
            if !res.failures.is_empty() {
                print_reports(&res.failures);
            }
            Ok(res.failures.is_empty())
        }
        Command::Decompose {
            input,
            graph,
            leaf_size,
            sep,
        } => {
            let m = input.load()?;
            let g = read_graph(&graph, m.len())?;
            let cfg = sep.config(&m);
            let tree = recursive_decompose(&g, &m, &cfg, leaf_size)?;
            write(
                out,
                "decomposition.json",
                serde_json::to_string(&io::decomposition_to_json(&tree))?,
            )?;
            println!(
                "{}",
                json!({
                    "depth": tree.depth(),
                    "splits": tree.splits().len(),
                    "max_path_separator": tree.max_path_separator(),
                })
            );
            Ok(true)
        }
        Command::Run { spec } => {
            let spec = read_spec(&spec)?;
            let res = experiment::run(&spec, Some(out))?;
            let algorithm = match spec.algorithm {
                Algorithm::Greedy => "greedy",
                Algorithm::Cgmz => "cgmz",
            };
            println!("{SUMMARY_HEADER}");
            println!("{}", res.summary.to_csv());
            let failures: Vec<CheckReport> = res.failures().into_iter().cloned().collect();
            if !failures.is_empty() {
                eprintln!("{algorithm} run has {} failing check(s)", failures.len());
                print_reports(&failures);
            }
            Ok(failures.is_empty())
        }
    }
}
