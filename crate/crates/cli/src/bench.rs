use std::ops::RangeInclusive;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;
use ztdp::algebra::{Int, Ring};
use ztdp::engine::EvalOptions;
use ztdp::graphs::{grid_graph, GridSpec};

use crate::count::{choose_td, EngineArg, Instance, Problem, Run};
use crate::input::{grid_label, Input};

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Grid dimension.
    #[arg(short, long, default_value_t = 2)]
    pub d: usize,
    /// Side lengths, `a..b` (inclusive) or a single value.
    #[arg(short, long, value_parser = parse_range)]
    pub n: RangeInclusive<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "pm")]
    pub problems: Vec<Problem>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "zeta,table")]
    pub engines: Vec<EngineArg>,
    /// Packing size, needed for `packings`.
    #[arg(short = 'l')]
    pub l: Option<usize>,
    #[arg(long)]
    pub modulus: Option<Int>,
    #[arg(long, value_name = "THREADS")]
    pub parallel: Option<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad bound {t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => num(s).map(|v| v..=v),
    }
}

#[derive(Debug, Serialize)]
struct Row {
    instance: String,
    problem: &'static str,
    engine: String,
    answer: String,
    width: usize,
    tree_depth_h: usize,
    nodes: usize,
    leaves: usize,
    leaf_evaluations: Option<u64>,
    peak_live_values: Option<u64>,
    table_entries: Option<u64>,
    max_table_entries: Option<u64>,
    wall_seconds: f64,
    path_bound: Option<bool>,
    grid_bound: Option<bool>,
}

pub fn cmd_bench(args: &BenchArgs) -> Result<bool> {
    if args.problems.contains(&Problem::Packings) && args.l.is_none() {
        bail!("packings needs -l <size>");
    }
    Ring::with_modulus(args.modulus.clone())?;
    let sink: Box<dyn std::io::Write> = match &args.output {
        Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    let mut out = csv::Writer::from_writer(sink);
    let opts = EvalOptions { modulus: args.modulus.clone(), threads: args.parallel, memory_limit: None };
    let mut passed = true;

    for n in args.n.clone() {
        let spec = GridSpec::uniform(args.d, n)?;
        let label = format!("grid {}", grid_label(&spec));
        let input = Input::Graph { g: grid_graph(&spec), grid: Some(spec), label: label.clone() };
        for &problem in &args.problems {
            let instance = Instance::prepare(problem, &input, false)?;
            let (td, grid) = choose_td(problem, &input, &instance, None)?;
            let run =
                Run { problem, instance: &instance, source: &label, td: &td, grid, l: args.l, opts: opts.clone() };
            let mut first: Option<(EngineArg, String)> = None;
            for &engine in &args.engines {
                let report = run.execute(engine, false)?;
                let answer = report.answer.flat();
                let path = report.checks.iter().find(|c| c.name == "path_bound").map(|c| c.holds);
                passed &= path != Some(false);
                let grid_bound =
                    grid.is_some().then(|| report.checks.iter().filter(|c| c.name != "path_bound").all(|c| c.holds));
                out.serialize(Row {
                    instance: label.clone(),
                    problem: problem.name(),
                    engine: report.engine.clone(),
                    answer: answer.clone(),
                    width: report.metrics.width,
                    tree_depth_h: report.metrics.tree_depth_h,
                    nodes: report.metrics.node_count,
                    leaves: report.metrics.leaf_count,
                    leaf_evaluations: report.stats.as_ref().map(|s| s.leaf_evaluations),
                    peak_live_values: report.stats.as_ref().map(|s| s.peak_live_values),
                    table_entries: report.stats.as_ref().and_then(|s| s.table_entries),
                    max_table_entries: report.stats.as_ref().and_then(|s| s.max_table_entries),
                    wall_seconds: report.timing.wall_seconds,
                    path_bound: path,
                    grid_bound,
                })?;
                match &first {
                    None => first = Some((engine, answer)),
                    Some((e0, a0)) if *a0 != answer => {
                        out.flush()?;
                        bail!(
                            "engines disagree on {label} ({}): {e0:?} gives {a0}, {engine:?} gives {answer}",
                            problem.name()
                        );
                    }
                    Some(_) => {}
                }
            }
        }
        out.flush()?;
    }
    Ok(passed)
}
