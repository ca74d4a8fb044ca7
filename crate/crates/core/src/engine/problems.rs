//! The four built-in counting problems wired to both evaluators.

use serde::{Deserialize, Serialize};

use super::{evaluate, table_dp_evaluate, Answer, EngineError, EvalOptions, EvalStats, ProblemSpec};
use crate::algebra::Int;
use crate::decomp::{
    balanced_td, metrics, to_modified_nice, BfsLayerSeparator, DecompositionMetrics, TreeDecomposition,
};
use crate::graphs::{EdgeFamily, Graph, Hypergraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Zeta,
    Table,
}

/// A problem together with its input.
#[derive(Clone, Copy, Debug)]
pub enum Task<'a> {
    PerfectMatchings(&'a Graph),
    MatchingPolynomial(&'a Graph),
    SetCovers(&'a Hypergraph),
    LPackings(&'a Hypergraph, usize),
}

impl Task<'_> {
    pub fn spec(&self) -> ProblemSpec {
        match *self {
            Task::PerfectMatchings(_) => ProblemSpec::perfect_matchings(),
            Task::MatchingPolynomial(g) => ProblemSpec::matching_polynomial(g.n() / 2),
            Task::SetCovers(_) => ProblemSpec::set_covers(),
            Task::LPackings(_, l) => ProblemSpec::l_packings(l),
        }
    }

    fn input(&self) -> &dyn EdgeFamily {
        match *self {
            Task::PerfectMatchings(g) | Task::MatchingPolynomial(g) => g,
            Task::SetCovers(h) | Task::LPackings(h, _) => h,
        }
    }

    /// Graph whose decompositions are valid for the task's (hyper)edges.
    pub fn primal_graph(&self) -> Graph {
        match *self {
            Task::PerfectMatchings(g) | Task::MatchingPolynomial(g) => g.clone(),
            Task::SetCovers(h) | Task::LPackings(h, _) => h.primal_graph(),
        }
    }

    /// Answer known without evaluation, if any.
    fn shortcut(&self) -> Option<Answer> {
        match *self {
            Task::SetCovers(h) => {
                let mut covered = vec![false; h.n()];
                h.hyperedges().iter().flatten().for_each(|&v| covered[v] = true);
                covered.contains(&false).then_some(Answer::Scalar(Int::ZERO))
            }
            Task::LPackings(h, l) => (l > h.hyperedges().len()).then_some(Answer::Scalar(Int::ZERO)),
            _ => None,
        }
    }
}

/// Result of [`run_task`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub answer: Answer,
    pub stats: EvalStats,
    /// Metrics of the modified nice decomposition that was evaluated.
    pub metrics: DecompositionMetrics,
    /// Set when the answer was decided before evaluation.
    pub shortcut: bool,
}

/// Balanced decomposition from the breadth-first layer separator.
pub fn default_decomposition(g: &Graph) -> TreeDecomposition {
    balanced_td(g, &mut BfsLayerSeparator).expect("layer separators are valid")
}

/// Converts the decomposition (default when `td` is `None`), evaluates, and
/// extracts the answer.
pub fn run_task(
    task: Task<'_>,
    td: Option<&TreeDecomposition>,
    engine: Engine,
    opts: &EvalOptions,
) -> Result<Outcome, EngineError> {
    let owned;
    let td = match td {
        Some(td) => td,
        None => {
            owned = default_decomposition(&task.primal_graph());
            &owned
        }
    };
    let nice = to_modified_nice(td, task.input())?;
    let m = metrics(&nice);
    let spec = task.spec();
    if let Some(answer) = task.shortcut() {
        return Ok(Outcome { answer, stats: EvalStats::default(), metrics: m, shortcut: true });
    }
    let ev = match engine {
        Engine::Zeta => evaluate(&nice, &spec, opts)?,
        Engine::Table => table_dp_evaluate(&nice, &spec, opts)?,
    };
    Ok(Outcome { answer: spec.extract(&ev.root), stats: ev.stats, metrics: m, shortcut: false })
}

fn scalar(task: Task<'_>, td: Option<&TreeDecomposition>) -> Result<Int, EngineError> {
    let out = run_task(task, td, Engine::Zeta, &EvalOptions::default())?;
    Ok(out.answer.coefficients()[0].clone())
}

pub fn count_perfect_matchings(g: &Graph, td: Option<&TreeDecomposition>) -> Result<Int, EngineError> {
    scalar(Task::PerfectMatchings(g), td)
}

/// Coefficients `m^0..=m^{n/2}`: the number of matchings of each size.
pub fn matching_polynomial(g: &Graph, td: Option<&TreeDecomposition>) -> Result<Vec<Int>, EngineError> {
    let out = run_task(Task::MatchingPolynomial(g), td, Engine::Zeta, &EvalOptions::default())?;
    Ok(out.answer.coefficients().to_vec())
}

pub fn count_set_covers(hg: &Hypergraph, td: Option<&TreeDecomposition>) -> Result<Int, EngineError> {
    scalar(Task::SetCovers(hg), td)
}

pub fn count_l_packings(hg: &Hypergraph, l: usize, td: Option<&TreeDecomposition>) -> Result<Int, EngineError> {
    scalar(Task::LPackings(hg, l), td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::grid_balanced_td;
    use crate::graphs::{closed_neighborhood_hypergraph, grid_graph, GridSpec};

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    fn grid_pm(lengths: &[usize]) -> Int {
        let s = GridSpec::new(lengths.to_vec()).unwrap();
        count_perfect_matchings(&grid_graph(&s), Some(&grid_balanced_td(&s))).unwrap()
    }

    #[test]
    fn perfect_matching_examples() {
        assert_eq!(grid_pm(&[2, 2]), Int::from(2i64));
        assert_eq!(grid_pm(&[2, 2, 2]), Int::from(9i64));
        assert_eq!(grid_pm(&[4, 4]), Int::from(36i64));
        assert_eq!(grid_pm(&[3, 3]), Int::ZERO);
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(count_perfect_matchings(&k2, None).unwrap(), Int::ONE);
        let empty = Graph::new(0, &[]).unwrap();
        assert_eq!(count_perfect_matchings(&empty, None).unwrap(), Int::ONE);
    }

    #[test]
    fn matching_polynomial_examples() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(matching_polynomial(&k2, None).unwrap(), ints(&[1, 1]));
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(matching_polynomial(&p3, None).unwrap(), ints(&[1, 2]));
        let c4 = grid_graph(&GridSpec::new(vec![2, 2]).unwrap());
        assert_eq!(matching_polynomial(&c4, None).unwrap(), ints(&[1, 4, 2]));
    }

    #[test]
    fn set_cover_examples() {
        let one = Hypergraph::new(1, vec![vec![0]]).unwrap();
        assert_eq!(count_set_covers(&one, None).unwrap(), Int::ONE);
        let three = Hypergraph::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        assert_eq!(count_set_covers(&three, None).unwrap(), Int::from(5i64));
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(count_set_covers(&closed_neighborhood_hypergraph(&k2), None).unwrap(), Int::from(3i64));
        let gap = Hypergraph::new(2, vec![vec![0]]).unwrap();
        assert_eq!(count_set_covers(&gap, None).unwrap(), Int::ZERO);
        let empty = Hypergraph::new(0, vec![]).unwrap();
        assert_eq!(count_set_covers(&empty, None).unwrap(), Int::ONE);
    }

    #[test]
    fn packing_examples() {
        let two = Hypergraph::new(2, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(count_l_packings(&two, 2, None).unwrap(), Int::ONE);
        assert_eq!(count_l_packings(&two, 0, None).unwrap(), Int::ONE);
        assert_eq!(count_l_packings(&two, 3, None).unwrap(), Int::ZERO);
        let chain = Hypergraph::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(count_l_packings(&chain, 2, None).unwrap(), Int::ONE);
        assert_eq!(count_l_packings(&chain, 1, None).unwrap(), Int::from(3i64));
    }

    #[test]
    fn engines_agree_on_grid_2x3() {
        let g = grid_graph(&GridSpec::new(vec![2, 3]).unwrap());
        for engine in [Engine::Zeta, Engine::Table] {
            let out = run_task(Task::PerfectMatchings(&g), None, engine, &EvalOptions::default()).unwrap();
            assert_eq!(out.answer, Answer::Scalar(Int::from(3i64)));
        }
    }
}
