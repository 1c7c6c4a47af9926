//! Command-line front end.
//!
//! Exit codes: 0 when the command finished and its property holds, 1 when it
//! finished and the property fails, 2 on input or usage errors.

use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::conditions::{roundaboutness, three_point_condition};
use crate::error::{Error, Result};
use crate::formats::{FormatRegistry, RawMatrix};
use crate::geodesic::basic_geodesic_graph;
use crate::graph::WeightedGraph;
use crate::metric::{satisfies_tie_breaking, validate_metric, FiniteMetricSpace};
use crate::oracle::{GeneratorParams, GeneratorRegistry, GeneratorSpec};
use crate::output::GraphWriterRegistry;
use crate::rational::{fraction_string, parse_exact};
use crate::recognition::{mst, path_order, recognize_path};
use crate::report::{analyze_raw, AnalyzeOptions, ViolationRecord};

/// Environment variable holding the default `--jobs` value.
pub const JOBS_ENV: &str = "SPANMETRIC_JOBS";

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "spanmetric",
    version,
    about = "Decide whether a finite metric space is realised by a spanning tree, and measure how far it is from one"
)]
struct Cli {
    /// Worker threads for the scans (default: $SPANMETRIC_JOBS, else 1).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the metric axioms.
    Validate(InputArgs),
    /// Full JSON report; exit 0 iff the space is a spanning tree metric space.
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Cross-check with the brute-force oracles (within their size caps).
        #[arg(long)]
        verify: bool,
        /// Include per-phase timings in milliseconds.
        #[arg(long)]
        timings: bool,
    },
    /// Minimum spanning tree of K_M; exit 0 iff it is certified unique.
    Mst(GraphArgs),
    /// Basic geodesic graph G_M; exit 0 iff it is a tree.
    BasicGraph(GraphArgs),
    /// Roundaboutness ρ; exit 0 iff ρ = 0.
    Roundabout(InputArgs),
    /// Spanning path recognition; exit 0 iff the space is realised by a path.
    PathCheck(GraphArgs),
    /// Write a seeded random metric space.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input file; stdin when omitted or `-`.
    input: Option<String>,

    /// Input format: csv, lower, json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Output format: dot, json.
    #[arg(long, default_value = "json")]
    out: String,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Generator: tree, l1, euclidean, perturbed-tree.
    #[arg(long, default_value = "tree")]
    kind: String,

    /// Number of points.
    #[arg(short = 'n', long, default_value_t = 8)]
    n: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output format: csv, lower, json.
    #[arg(long, default_value = "csv")]
    format: String,

    /// Coordinate dimension for point-cloud kinds.
    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// Lower end of the weight / coordinate range.
    #[arg(long, default_value = "1")]
    weight_min: String,

    /// Upper end of the weight / coordinate range.
    #[arg(long, default_value = "10")]
    weight_max: String,

    /// Perturbation size for perturbed-tree.
    #[arg(long, default_value = "0.1")]
    magnitude: String,
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn done(holds: bool, stdout: String) -> Outcome {
        Outcome {
            code: if holds { EXIT_HOLDS } else { EXIT_FAILS },
            stdout,
            stderr: String::new(),
        }
    }

    fn error(message: String) -> Outcome {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Runs the CLI on `args` (including the program name), reading `stdin`
/// only when a command needs it.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_HOLDS,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => Outcome::error(rendered),
            };
        }
    };
    let jobs = match resolve_jobs(cli.jobs) {
        Ok(j) => j,
        Err(e) => return Outcome::error(format!("error: {e}\n")),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => return Outcome::error(format!("error: {e}\n")),
    };
    let mut buffered = Vec::new();
    if cli.command.reads_stdin() {
        if let Err(e) = stdin.read_to_end(&mut buffered) {
            return Outcome::error(format!("error: {e}\n"));
        }
    }
    let mut input: &[u8] = &buffered;
    pool.install(|| dispatch(cli.command, &mut input))
        .unwrap_or_else(|e| Outcome::error(format!("error: {e}\n")))
}

impl Command {
    fn reads_stdin(&self) -> bool {
        let input = match self {
            Command::Validate(i) | Command::Roundabout(i) => i,
            Command::Analyze { input, .. } => input,
            Command::Mst(g) | Command::BasicGraph(g) | Command::PathCheck(g) => &g.input,
            Command::Generate(_) => return false,
        };
        matches!(input.input.as_deref(), None | Some("-"))
    }
}

fn resolve_jobs(flag: Option<usize>) -> Result<usize> {
    let jobs = match flag {
        Some(j) => j,
        None => match std::env::var(JOBS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Io(format!("{JOBS_ENV}={v:?} is not a thread count")))?,
            Err(_) => 1,
        },
    };
    if jobs == 0 {
        return Err(Error::Io("--jobs must be at least 1".into()));
    }
    Ok(jobs)
}

fn read_raw(input: &InputArgs, stdin: &mut &[u8]) -> Result<RawMatrix> {
    let formats = FormatRegistry::builtin();
    let format = formats.get(&input.format)?;
    let text = match input.input.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            s
        }
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?,
    };
    format.parse(&text)
}

fn read_space(input: &InputArgs, stdin: &mut &[u8]) -> Result<FiniteMetricSpace> {
    let raw = read_raw(input, stdin)?;
    validate_metric(raw.rows, raw.labels)
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn dispatch(command: Command, stdin: &mut &[u8]) -> Result<Outcome> {
    match command {
        Command::Validate(input) => {
            let raw = read_raw(&input, stdin)?;
            let labels = raw.labels.clone();
            match validate_metric(raw.rows, raw.labels) {
                Ok(m) => Ok(Outcome::done(
                    true,
                    pretty(&json!({ "metric_valid": true, "n": m.n() })),
                )),
                Err(Error::NotMetric(v)) => Ok(Outcome::done(
                    false,
                    pretty(&json!({
                        "metric_valid": false,
                        "violation": ViolationRecord::new(&v, &labels),
                    })),
                )),
                Err(e) => Err(e),
            }
        }
        Command::Analyze { input, verify, timings } => {
            let raw = read_raw(&input, stdin)?;
            let report = analyze_raw(raw.rows, raw.labels, AnalyzeOptions { verify, timings })?;
            let holds = report.is_spanning_tree_metric == Some(true);
            let text = pretty(&serde_json::to_value(&report).expect("report serializes"));
            Ok(Outcome::done(holds, text))
        }
        Command::Mst(args) => {
            let m = read_space(&args.input, stdin)?;
            let tree = mst(&WeightedGraph::complete(&m))?;
            let mut extra = Map::new();
            extra.insert("unique_certified".into(), json!(tree.unique_certified));
            let writer = GraphWriterRegistry::builtin();
            let text = writer.get(&args.out)?.write(&tree.tree, &extra);
            Ok(Outcome::done(tree.unique_certified, text))
        }
        Command::BasicGraph(args) => {
            let m = read_space(&args.input, stdin)?;
            let g = basic_geodesic_graph(&m);
            let is_tree = g.edge_count() + 1 == m.n();
            let mut extra = Map::new();
            extra.insert("is_tree".into(), json!(is_tree));
            let writer = GraphWriterRegistry::builtin();
            let text = writer.get(&args.out)?.write(&g, &extra);
            Ok(Outcome::done(is_tree, text))
        }
        Command::Roundabout(input) => {
            let m = read_space(&input, stdin)?;
            let rho = roundaboutness(&m)?;
            let holds = rho.value == num_rational::BigRational::default();
            let triplet = rho
                .argmax_triplet
                .map(|(x, y, z)| [m.label(x), m.label(y), m.label(z)]);
            let text = pretty(&json!({
                "rho": fraction_string(&rho.value),
                "rho_decimal": rho.decimal,
                "rho_triplet": triplet,
                "tie_breaking": satisfies_tie_breaking(&m),
            }));
            Ok(Outcome::done(holds, text))
        }
        Command::PathCheck(args) => {
            let m = read_space(&args.input, stdin)?;
            let writer = GraphWriterRegistry::builtin();
            let writer = writer.get(&args.out)?;
            match recognize_path(&m) {
                Some(path) => {
                    let order: Vec<&str> = path_order(&path)
                        .unwrap_or_default()
                        .into_iter()
                        .map(|i| m.label(i))
                        .collect();
                    let mut extra = Map::new();
                    extra.insert("is_spanning_path_metric".into(), json!(true));
                    extra.insert("order".into(), json!(order));
                    Ok(Outcome::done(true, writer.write(&path, &extra)))
                }
                None => {
                    let three = three_point_condition(&m);
                    let witness = three
                        .witness
                        .map(|(x, y, z)| [m.label(x), m.label(y), m.label(z)]);
                    let text = match args.out.as_str() {
                        "dot" => "graph { }\n".to_string(),
                        _ => pretty(&json!({
                            "is_spanning_path_metric": false,
                            "three_point_holds": three.holds,
                            "three_point_witness": witness,
                        })),
                    };
                    Ok(Outcome::done(false, text))
                }
            }
        }
        Command::Generate(args) => {
            let params = GeneratorParams {
                weight_min: parse_exact(&args.weight_min)?,
                weight_max: parse_exact(&args.weight_max)?,
                dimension: args.dim,
                magnitude: parse_exact(&args.magnitude)?,
                ..GeneratorParams::default()
            };
            let spec = GeneratorSpec {
                kind: args.kind,
                n: args.n,
                seed: args.seed,
                params,
            };
            let formats = FormatRegistry::builtin();
            let format = formats.get(&args.format)?;
            let generated = GeneratorRegistry::builtin().generate(&spec)?;
            Ok(Outcome::done(true, format.write(&generated.space)?))
        }
    }
}
