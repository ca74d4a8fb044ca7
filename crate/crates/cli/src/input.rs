use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use ztdp::decomp::TreeDecomposition;
use ztdp::graphs::{grid_graph, Graph, GridSpec, Hypergraph};
use ztdp::io::{parse_graph, parse_hypergraph, parse_td};

/// Exactly one input source.
#[derive(Args, Clone, Debug)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Graph file (`p gr <n> <m>`).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Hypergraph file (`p hg <n> <m>`).
    #[arg(long)]
    pub hypergraph: Option<PathBuf>,
    /// Grid side lengths such as `4x4` or `2x2x2`.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let lengths = s
        .split(['x', ','])
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("bad length {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    GridSpec::new(lengths).map_err(|e| e.to_string())
}

pub fn grid_label(spec: &GridSpec) -> String {
    spec.lengths().iter().map(|l| l.to_string()).collect::<Vec<_>>().join("x")
}

pub enum Input {
    Graph { g: Graph, grid: Option<GridSpec>, label: String },
    Hypergraph { h: Hypergraph, label: String },
}

impl Input {
    pub fn load(args: &InputArgs) -> Result<Input> {
        if let Some(spec) = &args.grid {
            return Ok(Input::Graph {
                g: grid_graph(spec),
                grid: Some(spec.clone()),
                label: format!("grid {}", grid_label(spec)),
            });
        }
        if let Some(path) = &args.graph {
            let g = parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            return Ok(Input::Graph { g, grid: None, label: path.display().to_string() });
        }
        let path = args.hypergraph.as_ref().expect("clap enforces one input");
        let h = parse_hypergraph(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        Ok(Input::Hypergraph { h, label: path.display().to_string() })
    }

    pub fn label(&self) -> &str {
        match self {
            Input::Graph { label, .. } | Input::Hypergraph { label, .. } => label,
        }
    }

    /// The graph decompositions are built for.
    pub fn primal(&self) -> Graph {
        match self {
            Input::Graph { g, .. } => g.clone(),
            Input::Hypergraph { h, .. } => h.primal_graph(),
        }
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Reads a decomposition file; `root` is a 1-based bag id.
pub fn load_td(path: &Path, root: Option<usize>, n: usize) -> Result<TreeDecomposition> {
    let root = match root {
        Some(0) => bail!("--root is a 1-based bag id"),
        Some(r) => Some(r - 1),
        None => None,
    };
    let (td, file_n) = parse_td(&read(path)?, root).with_context(|| format!("parsing {}", path.display()))?;
    if file_n != n {
        bail!("{} is for {file_n} vertices, the input has {n}", path.display());
    }
    Ok(td)
}
