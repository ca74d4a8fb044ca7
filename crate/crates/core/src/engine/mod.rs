//! Counting over modified nice decompositions.
//!
//! [`evaluate`] recurses in the zeta domain and keeps only one rank vector per
//! node on the current root-to-leaf path. [`table_dp_evaluate`] is the
//! conventional bottom-up dynamic program over full value-space tables, kept as
//! an independent baseline that shares nothing but the [`ProblemSpec`].

mod problems;
mod table;
mod zeta;

pub use problems::{
    count_l_packings, count_perfect_matchings, count_set_covers, default_decomposition, matching_polynomial, run_task,
    Engine, Outcome, Task,
};
pub use table::{table_dp_evaluate, table_memory_limit, MEMORY_ENV};
pub use zeta::evaluate;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Int, Ring};
use crate::decomp::DecompError;

/// Largest bag the evaluators address with a machine-word subset mask.
pub const MAX_BAG: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error("bag of node {node} has {size} vertices; at most {MAX_BAG} are supported")]
    BagTooLarge { node: usize, size: usize },
    #[error("table DP needs about {needed} bytes for width {width}, limit is {limit} bytes")]
    WidthGuard { width: usize, needed: u128, limit: u128 },
    #[error("auxiliary leaf refers to edge {0}, which the problem does not know")]
    UnknownEdge(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Codomain of the per-node functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingKind {
    Scalar,
    /// Polynomials in one marker variable, truncated above degree `cap`.
    Polynomial {
        cap: usize,
    },
}

impl RingKind {
    pub fn cap(self) -> usize {
        match self {
            RingKind::Scalar => 0,
            RingKind::Polynomial { cap } => cap,
        }
    }
}

/// How two subtrees combine at a join.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinMode {
    /// Disjoint union (subset convolution), simulated with ranks.
    DisjointRanked,
    /// Arbitrary union (union product); no ranks needed.
    UnionRankFree,
}

/// What a forgotten vertex must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForgetMode {
    /// The vertex must be covered.
    MustCover,
    /// The vertex may be left uncovered.
    MaySkip,
}

/// Which part of the root polynomial is the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerKind {
    Coefficient(usize),
    AllCoefficients,
}

/// The answer extracted from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Scalar(Int),
    Coefficients(Vec<Int>),
}

impl Answer {
    pub fn scalar(&self) -> Option<&Int> {
        match self {
            Answer::Scalar(v) => Some(v),
            Answer::Coefficients(_) => None,
        }
    }

    pub fn coefficients(&self) -> &[Int] {
        match self {
            Answer::Scalar(v) => std::slice::from_ref(v),
            Answer::Coefficients(c) => c,
        }
    }
}

/// Declarative description of a counting problem.
///
/// Values are coefficient lists of length at most `cap + 1`; a scalar is a list
/// of length one. Every auxiliary leaf uses the same pair: `aux_empty` at the
/// empty set and `aux_edge` at the set of its edge's endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    pub name: String,
    pub ring: RingKind,
    pub join: JoinMode,
    pub forget: ForgetMode,
    pub leaf_value: Vec<Int>,
    pub aux_empty: Vec<Int>,
    pub aux_edge: Vec<Int>,
    pub answer: AnswerKind,
}

impl ProblemSpec {
    /// Scalar, disjoint joins, every vertex covered, each edge weighted 1.
    pub fn perfect_matchings() -> ProblemSpec {
        ProblemSpec {
            name: "perfect_matchings".into(),
            ring: RingKind::Scalar,
            join: JoinMode::DisjointRanked,
            forget: ForgetMode::MustCover,
            leaf_value: vec![Int::ONE],
            aux_empty: vec![Int::ONE],
            aux_edge: vec![Int::ONE],
            answer: AnswerKind::Coefficient(0),
        }
    }

    /// Generating polynomial of matchings by size, truncated at `cap`.
    pub fn matching_polynomial(cap: usize) -> ProblemSpec {
        ProblemSpec {
            name: "matching_polynomial".into(),
            ring: RingKind::Polynomial { cap },
            join: JoinMode::DisjointRanked,
            forget: ForgetMode::MaySkip,
            leaf_value: vec![Int::ONE],
            aux_empty: vec![Int::ONE],
            aux_edge: monomial(1, cap),
            answer: AnswerKind::AllCoefficients,
        }
    }

    /// Subcollections of hyperedges covering every element.
    pub fn set_covers() -> ProblemSpec {
        ProblemSpec {
            name: "set_covers".into(),
            ring: RingKind::Scalar,
            join: JoinMode::UnionRankFree,
            forget: ForgetMode::MustCover,
            leaf_value: vec![Int::ONE],
            aux_empty: vec![Int::ONE],
            aux_edge: vec![Int::ONE],
            answer: AnswerKind::Coefficient(0),
        }
    }

    /// Collections of `l` pairwise disjoint hyperedges.
    pub fn l_packings(l: usize) -> ProblemSpec {
        ProblemSpec {
            name: "l_packings".into(),
            ring: RingKind::Polynomial { cap: l },
            join: JoinMode::DisjointRanked,
            forget: ForgetMode::MaySkip,
            leaf_value: vec![Int::ONE],
            aux_empty: vec![Int::ONE],
            aux_edge: monomial(1, l),
            answer: AnswerKind::Coefficient(l),
        }
    }

    pub fn width(&self) -> usize {
        self.ring.cap() + 1
    }

    /// Pads (and truncates) a coefficient list to the ring's width.
    pub(crate) fn padded(&self, coeffs: &[Int], ring: &Ring) -> Vec<Int> {
        let mut out = vec![Int::ZERO; self.width()];
        for (slot, c) in out.iter_mut().zip(coeffs) {
            *slot = ring.reduce(c.clone());
        }
        out
    }

    pub fn extract(&self, root: &[Int]) -> Answer {
        match self.answer {
            AnswerKind::Coefficient(k) => Answer::Scalar(root.get(k).cloned().unwrap_or(Int::ZERO)),
            AnswerKind::AllCoefficients => Answer::Coefficients(root.to_vec()),
        }
    }
}

fn monomial(degree: usize, cap: usize) -> Vec<Int> {
    let mut out = vec![Int::ZERO; cap + 1];
    if degree <= cap {
        out[degree] = Int::ONE;
    }
    out
}

/// Knobs shared by both evaluators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalOptions {
    pub modulus: Option<Int>,
    /// Worker threads for the zeta engine; `None` or `Some(1)` runs serially.
    pub threads: Option<usize>,
    /// Table-DP memory limit in bytes; falls back to the environment when unset.
    pub memory_limit: Option<u128>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalStats {
    /// Number of (leaf, subset) evaluations.
    pub leaf_evaluations: u64,
    /// Most ring values held at once by the serial schedule.
    pub peak_live_values: u64,
    /// Ring values written into tables over the whole run (table DP only).
    pub table_entries: Option<u64>,
    /// Largest single table (table DP only).
    pub max_table_entries: Option<u64>,
    #[serde(with = "duration_secs")]
    pub wall_time: Duration,
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

/// Raw evaluator output: the root coefficient list and run statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub root: Vec<Int>,
    pub stats: EvalStats,
}
