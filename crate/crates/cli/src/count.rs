use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use ztdp::algebra::{Int, Ring};
use ztdp::decomp::{grid_balanced_td, metrics, to_modified_nice, TreeDecomposition};
use ztdp::engine::{default_decomposition, run_task, Answer, Engine, EvalOptions, Task};
use ztdp::graphs::{closed_neighborhood_hypergraph, graph_as_hypergraph, EdgeFamily, Graph, GridSpec, Hypergraph};
use ztdp::oracle::{bf_l_packings, bf_matchings_by_size, bf_perfect_matchings, bf_set_covers, OracleBudget};

use crate::input::{load_td, Input, InputArgs};
use crate::report::{grid_bounds, path_bound, AnswerDoc, InputSummary, RunReport, RunStats, Timing, RUN_SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    /// Perfect matchings.
    Pm,
    /// Matchings of every size.
    Matchpoly,
    /// Set covers of a hypergraph (or of N[v] with --dom).
    Setcover,
    /// Dominating sets, counted as covers by closed neighbourhoods.
    Domsets,
    /// Collections of `l` pairwise disjoint (hyper)edges.
    Packings,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Pm => "pm",
            Problem::Matchpoly => "matchpoly",
            Problem::Setcover => "setcover",
            Problem::Domsets => "domsets",
            Problem::Packings => "packings",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Zeta,
    Table,
    /// Exhaustive enumeration, for small inputs only.
    Oracle,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(value_enum)]
    pub problem: Problem,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "zeta")]
    pub engine: EngineArg,
    /// Reduce every answer modulo this integer (at least 2).
    #[arg(long)]
    pub modulus: Option<Int>,
    /// Decomposition file; a balanced one is built when absent.
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Root bag (1-based) for the decomposition file.
    #[arg(long, requires = "td")]
    pub root: Option<usize>,
    /// Evaluate forget branches on this many threads.
    #[arg(long, value_name = "THREADS")]
    pub parallel: Option<usize>,
    /// Packing size.
    #[arg(short = 'l')]
    pub l: Option<usize>,
    /// Count covers by closed neighbourhoods of a graph input.
    #[arg(long)]
    pub dom: bool,
    /// Fail unless the grid depth and width bounds hold.
    #[arg(long)]
    pub check_grid_bound: bool,
}

/// The problem's own input, after reductions.
pub enum Instance {
    Graph(Graph),
    Hyper(Hypergraph),
}

impl Instance {
    pub fn prepare(problem: Problem, input: &Input, dom: bool) -> Result<Instance> {
        Ok(match (problem, input) {
            (Problem::Pm | Problem::Matchpoly, Input::Graph { g, .. }) => Instance::Graph(g.clone()),
            (Problem::Pm | Problem::Matchpoly, Input::Hypergraph { .. }) => {
                bail!("{} needs a graph input", problem.name())
            }
            (Problem::Setcover, Input::Hypergraph { h, .. }) if !dom => Instance::Hyper(h.clone()),
            (Problem::Setcover, Input::Graph { g, .. }) if dom => Instance::Hyper(closed_neighborhood_hypergraph(g)),
            (Problem::Setcover, _) => bail!("setcover needs a hypergraph, or a graph together with --dom"),
            (Problem::Domsets, Input::Graph { g, .. }) => Instance::Hyper(closed_neighborhood_hypergraph(g)),
            (Problem::Domsets, Input::Hypergraph { .. }) => bail!("domsets needs a graph input"),
            (Problem::Packings, Input::Graph { g, .. }) => Instance::Hyper(graph_as_hypergraph(g)),
            (Problem::Packings, Input::Hypergraph { h, .. }) => Instance::Hyper(h.clone()),
        })
    }

    pub fn task(&self, problem: Problem, l: Option<usize>) -> Result<Task<'_>> {
        Ok(match (self, problem) {
            (Instance::Graph(g), Problem::Pm) => Task::PerfectMatchings(g),
            (Instance::Graph(g), Problem::Matchpoly) => Task::MatchingPolynomial(g),
            (Instance::Hyper(h), Problem::Packings) => Task::LPackings(h, l.context("packings needs -l <size>")?),
            (Instance::Hyper(h), _) => Task::SetCovers(h),
            (Instance::Graph(_), _) => unreachable!("graph instances only carry matching problems"),
        })
    }

    fn edge_family(&self) -> &dyn EdgeFamily {
        match self {
            Instance::Graph(g) => g,
            Instance::Hyper(h) => h,
        }
    }

    fn summary(&self, source: &str) -> InputSummary {
        let f = self.edge_family();
        InputSummary { source: source.to_string(), vertices: f.vertex_count(), edges: f.edge_count() }
    }
}

/// Exhaustive answer for the task.
pub fn oracle_answer(task: Task<'_>, budget: &OracleBudget) -> Result<Answer> {
    Ok(match task {
        Task::PerfectMatchings(g) => Answer::Scalar(bf_perfect_matchings(g, budget)?),
        Task::MatchingPolynomial(g) => Answer::Coefficients(bf_matchings_by_size(g, budget)?),
        Task::SetCovers(h) => Answer::Scalar(bf_set_covers(h, budget)?),
        Task::LPackings(h, l) => Answer::Scalar(bf_l_packings(h, l, budget)?),
    })
}

fn reduce(a: Answer, m: Option<&Int>) -> Answer {
    let Some(m) = m else { return a };
    match a {
        Answer::Scalar(v) => Answer::Scalar(v.rem_euclid(m)),
        Answer::Coefficients(c) => Answer::Coefficients(c.iter().map(|v| v.rem_euclid(m)).collect()),
    }
}

/// Everything a single count needs, shared with `bench`.
pub struct Run<'a> {
    pub problem: Problem,
    pub instance: &'a Instance,
    pub source: &'a str,
    pub td: &'a TreeDecomposition,
    /// Set when `td` is the balanced grid decomposition of this grid.
    pub grid: Option<&'a GridSpec>,
    pub l: Option<usize>,
    pub opts: EvalOptions,
}

impl Run<'_> {
    pub fn execute(&self, engine: EngineArg, check_grid_bound: bool) -> Result<RunReport> {
        let task = self.instance.task(self.problem, self.l)?;
        let start = Instant::now();
        let (answer, stats, metrics, shortcut) = match engine {
            EngineArg::Oracle => {
                let nice = to_modified_nice(self.td, self.instance.edge_family())?;
                let answer = reduce(oracle_answer(task, &OracleBudget::default())?, self.opts.modulus.as_ref());
                (answer, None, metrics(&nice), false)
            }
            EngineArg::Zeta | EngineArg::Table => {
                let engine = if engine == EngineArg::Zeta { Engine::Zeta } else { Engine::Table };
                let out = run_task(task, Some(self.td), engine, &self.opts)?;
                (out.answer, Some(out.stats), out.metrics, out.shortcut)
            }
        };
        let wall_seconds = start.elapsed().as_secs_f64();

        let mut checks = Vec::new();
        if let Some(s) = &stats {
            checks.push(path_bound(&metrics, s));
        }
        if let Some(spec) = self.grid {
            checks.extend(grid_bounds(spec, &metrics, check_grid_bound));
        }
        let passed = checks.iter().all(|c| c.holds || !c.requested);
        Ok(RunReport {
            schema: RUN_SCHEMA.to_string(),
            problem: self.problem.name().to_string(),
            engine: format!("{engine:?}").to_lowercase(),
            input: self.instance.summary(self.source),
            answer: AnswerDoc::from_answer(&answer),
            modulus: self.opts.modulus.as_ref().map(Int::to_string),
            threads: self.opts.threads,
            shortcut,
            metrics,
            stats: stats.as_ref().map(RunStats::from),
            checks,
            passed,
            timing: Timing { wall_seconds },
        })
    }
}

/// Decomposition for a count: the file if given, the balanced grid
/// decomposition for matching problems on a grid, else the default.
pub fn choose_td<'a>(
    problem: Problem,
    input: &'a Input,
    instance: &Instance,
    file: Option<(&std::path::Path, Option<usize>)>,
) -> Result<(TreeDecomposition, Option<&'a GridSpec>)> {
    let primal = match instance {
        Instance::Graph(g) => g.clone(),
        Instance::Hyper(h) => h.primal_graph(),
    };
    if let Some((path, root)) = file {
        return Ok((load_td(path, root, primal.n())?, None));
    }
    if let (Input::Graph { grid: Some(spec), .. }, Problem::Pm | Problem::Matchpoly | Problem::Packings) =
        (input, problem)
    {
        return Ok((grid_balanced_td(spec), Some(spec)));
    }
    Ok((default_decomposition(&primal), None))
}

pub fn cmd_count(args: &CountArgs) -> Result<bool> {
    if args.problem == Problem::Packings && args.l.is_none() {
        bail!("packings needs -l <size>");
    }
    if args.parallel == Some(0) {
        bail!("--parallel needs at least one thread");
    }
    Ring::with_modulus(args.modulus.clone())?;
    let input = Input::load(&args.input)?;
    let instance = Instance::prepare(args.problem, &input, args.dom)?;
    let file = args.td.as_deref().map(|p| (p, args.root));
    let (td, grid) = choose_td(args.problem, &input, &instance, file)?;
    if args.check_grid_bound && grid.is_none() {
        bail!("--check-grid-bound needs a --grid input with its balanced decomposition");
    }
    let run = Run {
        problem: args.problem,
        instance: &instance,
        source: input.label(),
        td: &td,
        grid,
        l: args.l,
        opts: EvalOptions { modulus: args.modulus.clone(), threads: args.parallel, memory_limit: None },
    };
    let report = run.execute(args.engine, args.check_grid_bound)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(report.passed)
}
