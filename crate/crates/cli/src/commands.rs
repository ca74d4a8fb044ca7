use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use ztdp::decomp::{
    balanced_td, grid_balanced_td, grid_path_decomposition, metrics, to_modified_nice, validate, BfsLayerSeparator,
    DecompositionMetrics, TreeDecomposition,
};
use ztdp::engine::default_decomposition;
use ztdp::graphs::{grid_graph, random_connected_graph, random_graph, random_hypergraph, EdgeFamily, GridSpec};
use ztdp::io::{nice_from_json, nice_to_json, write_graph, write_hypergraph, write_td};
use ztdp::oracle::{exact_tree_depth, OracleBudget};

use crate::count::{oracle_answer, Instance, Problem};
use crate::input::{load_td, read, write_out, Input, InputArgs};
use crate::report::AnswerDoc;

#[derive(Args, Debug)]
pub struct OutputArg {
    /// Write here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Grid graph with the given side lengths.
    Grid {
        #[arg(required = true)]
        lengths: Vec<usize>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Erdős–Rényi graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Add edges until the graph is connected.
        #[arg(long)]
        connected: bool,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Random hypergraph with `m` nonempty hyperedges.
    Hypergraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArg,
    },
}

pub fn cmd_gen(kind: &GenKind) -> Result<bool> {
    let check_p = |p: f64| {
        if !(0.0..=1.0).contains(&p) {
            bail!("edge probability must lie in [0, 1], got {p}");
        }
        Ok(())
    };
    let (text, out) = match kind {
        GenKind::Grid { lengths, out } => (write_graph(&grid_graph(&GridSpec::new(lengths.clone())?)), out),
        GenKind::Random { n, p, seed, connected, out } => {
            check_p(*p)?;
            let g = if *connected {
                random_connected_graph(*n, *p, &mut ChaCha8Rng::seed_from_u64(*seed))
            } else {
                random_graph(*n, *p, *seed)
            };
            (write_graph(&g), out)
        }
        GenKind::Hypergraph { n, m, max_size, seed, out } => {
            if *n == 0 && *m > 0 {
                bail!("hyperedges need at least one vertex");
            }
            let h = random_hypergraph(*n, *m, *max_size, &mut ChaCha8Rng::seed_from_u64(*seed));
            (write_hypergraph(&h), out)
        }
    };
    write_out(out.output.as_deref(), &text)?;
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    /// Recursive balanced separators (grid cuts for `--grid`).
    Balanced,
    /// Layer-by-layer path decomposition of a grid.
    Path,
    SingleBag,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "balanced")]
    pub strategy: Strategy,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Serialize)]
struct DecomposeSummary<'a> {
    strategy: String,
    valid: bool,
    #[serde(flatten)]
    metrics: &'a DecompositionMetrics,
}

/// Writes the decomposition. Metrics go to stdout when the decomposition goes
/// to a file, and to stderr otherwise.
pub fn cmd_decompose(args: &DecomposeArgs) -> Result<bool> {
    let input = Input::load(&args.input)?;
    let primal = input.primal();
    let grid = match &input {
        Input::Graph { grid, .. } => grid.as_ref(),
        Input::Hypergraph { .. } => None,
    };
    let td = match (args.strategy, grid) {
        (Strategy::Balanced, Some(spec)) => grid_balanced_td(spec),
        (Strategy::Balanced, None) => balanced_td(&primal, &mut BfsLayerSeparator)?,
        (Strategy::Path, Some(spec)) => grid_path_decomposition(spec),
        (Strategy::Path, None) => bail!("the path strategy needs a --grid input"),
        (Strategy::SingleBag, _) => TreeDecomposition::single_bag(primal.n()),
    };
    let report = validate(&primal, &td);
    let m = metrics(&td);
    let summary = DecomposeSummary {
        strategy: format!("{:?}", args.strategy).to_lowercase(),
        valid: report.is_valid(),
        metrics: &m,
    };
    let json = serde_json::to_string_pretty(&summary)?;
    write_out(args.out.output.as_deref(), &write_td(&td, primal.n()))?;
    if args.out.output.is_some() {
        println!("{json}");
    } else {
        eprintln!("{json}");
    }
    Ok(report.is_valid())
}

#[derive(Args, Debug)]
#[group(id = "decomposition", required = true, multiple = false)]
pub struct DecompositionFile {
    /// Tree decomposition file.
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Modified nice decomposition in JSON.
    #[arg(long)]
    pub nice: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub file: DecompositionFile,
    /// Root bag (1-based) for a tree decomposition file.
    #[arg(long)]
    pub root: Option<usize>,
}

fn edge_lists(f: &dyn EdgeFamily) -> Vec<Vec<usize>> {
    (0..f.edge_count()).map(|i| f.edge(i).to_vec()).collect()
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<bool> {
    let input = Input::load(&args.input)?;
    let family: &dyn EdgeFamily = match &input {
        Input::Graph { g, .. } => g,
        Input::Hypergraph { h, .. } => h,
    };
    if let Some(path) = &args.file.td {
        let td = load_td(path, args.root, family.vertex_count())?;
        let report = validate(family, &td);
        println!("{report}");
        for v in report.violations.iter().skip(1) {
            println!("{v}");
        }
        return Ok(report.is_valid());
    }
    let path = args.file.nice.as_ref().expect("clap enforces one decomposition");
    // Parsing checks every structural invariant; what is left is the match
    // against this input.
    let nice = match nice_from_json(&read(path)?) {
        Ok(nice) => nice,
        Err(e) => {
            println!("{e}");
            return Ok(false);
        }
    };
    if nice.n() != family.vertex_count() || nice.edges() != edge_lists(family) {
        println!("decomposition is for a different input");
        return Ok(false);
    }
    println!("valid");
    Ok(true)
}

#[derive(Args, Debug)]
pub struct NiceArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Tree decomposition file; a balanced one is built when absent.
    #[arg(long)]
    pub td: Option<PathBuf>,
    #[arg(long, requires = "td")]
    pub root: Option<usize>,
    #[command(flatten)]
    pub out: OutputArg,
}

pub fn cmd_nice(args: &NiceArgs) -> Result<bool> {
    let input = Input::load(&args.input)?;
    let primal = input.primal();
    let td = match (&args.td, &input) {
        (Some(path), _) => load_td(path, args.root, primal.n())?,
        (None, Input::Graph { grid: Some(spec), .. }) => grid_balanced_td(spec),
        (None, _) => default_decomposition(&primal),
    };
    let nice = match &input {
        Input::Graph { g, .. } => to_modified_nice(&td, g)?,
        Input::Hypergraph { h, .. } => to_modified_nice(&td, h)?,
    };
    write_out(args.out.output.as_deref(), &(nice_to_json(&nice) + "\n"))?;
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleProblem {
    Pm,
    Matchpoly,
    Setcover,
    Domsets,
    Packings,
    /// Exact tree depth of the (primal) graph.
    Treedepth,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub problem: OracleProblem,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short = 'l')]
    pub l: Option<usize>,
    #[arg(long)]
    pub dom: bool,
}

pub const ORACLE_SCHEMA: &str = "ztdp.oracle/1";

#[derive(Serialize)]
struct OracleReport {
    schema: &'static str,
    problem: String,
    source: String,
    answer: AnswerDoc,
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<bool> {
    let input = Input::load(&args.input)?;
    let budget = OracleBudget::default();
    let problem = match args.problem {
        OracleProblem::Pm => Problem::Pm,
        OracleProblem::Matchpoly => Problem::Matchpoly,
        OracleProblem::Setcover => Problem::Setcover,
        OracleProblem::Domsets => Problem::Domsets,
        OracleProblem::Packings => Problem::Packings,
        OracleProblem::Treedepth => {
            let td = exact_tree_depth(&input.primal(), &budget)?;
            return print_oracle("treedepth", &input, AnswerDoc::Scalar(td.to_string()));
        }
    };
    let instance = Instance::prepare(problem, &input, args.dom)?;
    let answer = oracle_answer(instance.task(problem, args.l)?, &budget)?;
    print_oracle(problem.name(), &input, AnswerDoc::from_answer(&answer))
}

fn print_oracle(problem: &str, input: &Input, answer: AnswerDoc) -> Result<bool> {
    let report =
        OracleReport { schema: ORACLE_SCHEMA, problem: problem.to_string(), source: input.label().to_string(), answer };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(true)
}
