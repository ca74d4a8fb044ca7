//! The JSON document printed by `ztdp count`.

use serde::{Deserialize, Serialize};
use ztdp::algebra::Int;
use ztdp::decomp::DecompositionMetrics;
use ztdp::engine::{Answer, EvalStats};
use ztdp::graphs::GridSpec;

pub const RUN_SCHEMA: &str = "ztdp.run/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub problem: String,
    pub engine: String,
    pub input: InputSummary,
    /// Decimal string, or one decimal string per coefficient.
    pub answer: AnswerDoc,
    pub modulus: Option<String>,
    pub threads: Option<usize>,
    /// Set when the answer was known without evaluation.
    pub shortcut: bool,
    pub metrics: DecompositionMetrics,
    pub stats: Option<RunStats>,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Everything that may differ between identical runs lives here.
    pub timing: Timing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSummary {
    pub source: String,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnswerDoc {
    Scalar(String),
    Coefficients(Vec<String>),
}

impl AnswerDoc {
    pub fn from_answer(a: &Answer) -> AnswerDoc {
        match a {
            Answer::Scalar(v) => AnswerDoc::Scalar(v.to_string()),
            Answer::Coefficients(c) => AnswerDoc::Coefficients(c.iter().map(Int::to_string).collect()),
        }
    }

    /// One cell for CSV output; coefficients are joined by spaces.
    pub fn flat(&self) -> String {
        match self {
            AnswerDoc::Scalar(s) => s.clone(),
            AnswerDoc::Coefficients(c) => c.join(" "),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub leaf_evaluations: u64,
    pub peak_live_values: u64,
    pub table_entries: Option<u64>,
    pub max_table_entries: Option<u64>,
}

impl From<&EvalStats> for RunStats {
    fn from(s: &EvalStats) -> Self {
        RunStats {
            leaf_evaluations: s.leaf_evaluations,
            peak_live_values: s.peak_live_values,
            table_entries: s.table_entries,
            max_table_entries: s.max_table_entries,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
}

/// `value <= limit`. Only requested checks decide the exit code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: u128,
    pub limit: u128,
    pub holds: bool,
    pub requested: bool,
}

impl Check {
    pub fn new(name: &str, value: u128, limit: u128, requested: bool) -> Check {
        Check { name: name.to_string(), value, limit, holds: value <= limit, requested }
    }
}

/// Leaf evaluations against leaves times `2^h`.
pub fn path_bound(m: &DecompositionMetrics, s: &EvalStats) -> Check {
    let limit = u32::try_from(m.tree_depth_h)
        .ok()
        .and_then(|h| (m.leaf_count as u128).checked_shl(h))
        .filter(|&l| l >> m.tree_depth_h == m.leaf_count as u128)
        .unwrap_or(u128::MAX);
    Check::new("path_bound", s.leaf_evaluations as u128, limit, true)
}

/// Grid checks on the balanced grid decomposition: the general bound
/// `h <= 3dV/n_m`, and for uniform grids of dimension at least 2 the bounds
/// `h <= (2^d - 1) n^(d-1) / (2^(d-1) - 1)` and, for `d = 2`, `width + 1 <= 3n/2 + 2`.
pub fn grid_bounds(spec: &GridSpec, m: &DecompositionMetrics, requested: bool) -> Vec<Check> {
    let d = spec.dims() as u128;
    let h = m.tree_depth_h as u128;
    let mut out =
        vec![Check::new("grid_depth", h, 3 * d * spec.volume() as u128 / spec.max_length() as u128, requested)];
    if spec.is_uniform() && d >= 2 {
        let n = spec.max_length() as u128;
        let cross = n.pow(d as u32 - 1);
        out.push(Check::new("uniform_grid_depth", h, ((1 << d) - 1) * cross / ((1 << (d - 1)) - 1), requested));
        if d == 2 {
            // 2 (width + 1) <= 3n + 4, kept integral.
            out.push(Check::new("uniform_grid_width", 2 * (m.width as u128 + 1), 3 * n + 4, requested));
        }
    }
    out
}
