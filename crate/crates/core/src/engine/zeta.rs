//! The polynomial-space evaluator.
//!
//! A query `(x, X)` returns the whole rank vector `(ζf_x^i)[X]`, `i = 0..=|B_x|`,
//! flattened as `[rank][coefficient]`. Subsets `X` are bit masks relative to the
//! sorted bag of `x`. Only forget nodes query their child twice, so a leaf below
//! `f` forget nodes is reached `2^f` times.

use std::time::Instant;

use super::{EngineError, EvalOptions, EvalStats, Evaluation, ForgetMode, JoinMode, ProblemSpec, MAX_BAG};
use crate::algebra::{Int, Ring};
use crate::decomp::{ModifiedNiceDecomposition, NodeKind};

const STACK_BYTES: usize = 256 << 20;

#[derive(Clone, Copy, Debug)]
pub(super) enum Op {
    Leaf,
    Aux { edge_mask: u64, edge_size: usize },
    Introduce { child: usize, pos: u32 },
    Forget { child: usize, pos: u32 },
    Join { left: usize, right: usize },
}

/// Flattened, mask-ready view of a modified nice decomposition.
pub(super) struct Plan {
    pub ops: Vec<Op>,
    pub bag_len: Vec<usize>,
    pub root: usize,
}

impl Plan {
    pub fn new(nice: &ModifiedNiceDecomposition) -> Result<Plan, EngineError> {
        let nodes = nice.nodes();
        let mut ops = Vec::with_capacity(nodes.len());
        let mut bag_len = Vec::with_capacity(nodes.len());
        for (x, node) in nodes.iter().enumerate() {
            if node.bag.len() > MAX_BAG {
                return Err(EngineError::BagTooLarge { node: x, size: node.bag.len() });
            }
            bag_len.push(node.bag.len());
            let position = |v: usize, bag: &[usize]| {
                bag.binary_search(&v)
                    .map(|p| p as u32)
                    .map_err(|_| EngineError::Internal(format!("vertex {v} missing from a bag at node {x}")))
            };
            let op = match &node.kind {
                NodeKind::Leaf => Op::Leaf,
                NodeKind::AuxLeaf { edge } => {
                    let members = nice.edges().get(*edge).ok_or(EngineError::UnknownEdge(*edge))?;
                    let mut edge_mask = 0u64;
                    for &v in members {
                        edge_mask |= 1 << position(v, &node.bag)?;
                    }
                    Op::Aux { edge_mask, edge_size: members.len() }
                }
                NodeKind::Introduce { vertex } => {
                    Op::Introduce { child: node.children[0], pos: position(*vertex, &node.bag)? }
                }
                NodeKind::Forget { vertex } => {
                    let child = node.children[0];
                    Op::Forget { child, pos: position(*vertex, &nodes[child].bag)? }
                }
                NodeKind::Join | NodeKind::IntroduceEdge { .. } => {
                    Op::Join { left: node.children[0], right: node.children[1] }
                }
            };
            ops.push(op);
        }
        Ok(Plan { ops, bag_len, root: nice.root() })
    }
}

/// Removes bit `pos`, shifting higher bits down.
#[inline]
fn remove_bit(mask: u64, pos: u32) -> u64 {
    let low = mask & ((1u64 << pos) - 1);
    ((mask >> (pos + 1)) << pos) | low
}

/// Inserts `bit` at `pos`, shifting higher bits up.
#[inline]
fn insert_bit(mask: u64, pos: u32, bit: bool) -> u64 {
    let low = mask & ((1u64 << pos) - 1);
    ((mask >> pos) << (pos + 1)) | ((bit as u64) << pos) | low
}

struct Out {
    values: Vec<Int>,
    leaves: u64,
    /// Peak values held during the call, output included.
    peak: u64,
}

struct Ctx<'a> {
    plan: &'a Plan,
    ring: Ring,
    ranked: bool,
    forget: ForgetMode,
    /// Coefficients per value.
    w: usize,
    leaf: Vec<Int>,
    aux_empty: Vec<Int>,
    aux_edge: Vec<Int>,
}

impl Ctx<'_> {
    fn ranks(&self, x: usize) -> usize {
        if self.ranked {
            self.plan.bag_len[x] + 1
        } else {
            1
        }
    }

    fn eval(&self, x: usize, mask: u64, par_depth: u32) -> Out {
        let w = self.w;
        let ranks = self.ranks(x);
        match self.plan.ops[x] {
            Op::Leaf => {
                let values = repeat(&self.leaf, ranks);
                let peak = values.len() as u64;
                Out { values, leaves: 1, peak }
            }
            Op::Aux { edge_mask, edge_size } => {
                let mut values = repeat(&self.aux_empty, ranks);
                if mask & edge_mask == edge_mask {
                    let from = if self.ranked { edge_size } else { 0 };
                    for r in from..ranks {
                        for k in 0..w {
                            let slot = &mut values[r * w + k];
                            *slot = self.ring.add(slot, &self.aux_edge[k]);
                        }
                    }
                }
                let peak = values.len() as u64;
                Out { values, leaves: 1, peak }
            }
            Op::Introduce { child, pos } => {
                let c = self.eval(child, remove_bit(mask, pos), par_depth);
                let child_ranks = c.values.len() / w;
                let mut values = Vec::with_capacity(ranks * w);
                for r in 0..ranks {
                    // The top rank lies in the unconstrained region of the relaxation.
                    let src = r.min(child_ranks - 1);
                    values.extend_from_slice(&c.values[src * w..(src + 1) * w]);
                }
                let peak = c.peak.max((c.values.len() + values.len()) as u64);
                Out { values, leaves: c.leaves, peak }
            }
            Op::Forget { child, pos } => {
                let with = insert_bit(mask, pos, true);
                let without = insert_bit(mask, pos, false);
                let (a, b) = if par_depth > 0 {
                    rayon::join(|| self.eval(child, with, par_depth - 1), || self.eval(child, without, par_depth - 1))
                } else {
                    (self.eval(child, with, 0), self.eval(child, without, 0))
                };
                let mut values = Vec::with_capacity(ranks * w);
                let shift = if self.ranked { w } else { 0 };
                for idx in 0..ranks * w {
                    let mut v = self.ring.sub(&a.values[idx + shift], &b.values[idx + shift]);
                    if self.forget == ForgetMode::MaySkip {
                        v = self.ring.add(&v, &b.values[idx]);
                    }
                    values.push(v);
                }
                let peak = sequential_peak(&a, &b, values.len());
                Out { values, leaves: a.leaves + b.leaves, peak }
            }
            Op::Join { left, right } => {
                let a = self.eval(left, mask, par_depth);
                let b = self.eval(right, mask, par_depth);
                let mut values = vec![Int::ZERO; ranks * w];
                if self.ranked {
                    for i in 0..ranks {
                        for j in 0..=i {
                            self.ring.poly_mul_acc(
                                &mut values[i * w..(i + 1) * w],
                                &a.values[j * w..(j + 1) * w],
                                &b.values[(i - j) * w..(i - j + 1) * w],
                            );
                        }
                    }
                } else {
                    self.ring.poly_mul_acc(&mut values, &a.values, &b.values);
                }
                let peak = sequential_peak(&a, &b, values.len());
                Out { values, leaves: a.leaves + b.leaves, peak }
            }
        }
    }
}

fn repeat(v: &[Int], times: usize) -> Vec<Int> {
    let mut out = Vec::with_capacity(v.len() * times);
    for _ in 0..times {
        out.extend_from_slice(v);
    }
    out
}

/// Peak of "run first, hold it, run second, combine into the output".
fn sequential_peak(first: &Out, second: &Out, out_len: usize) -> u64 {
    let held = first.values.len() as u64;
    first.peak.max(held + second.peak).max(held + second.values.len() as u64 + out_len as u64)
}

/// Evaluates `spec` on `nice` and returns the root polynomial at the empty set, rank 0.
///
/// Results and statistics do not depend on `opts.threads`.
pub fn evaluate(
    nice: &ModifiedNiceDecomposition,
    spec: &ProblemSpec,
    opts: &EvalOptions,
) -> Result<Evaluation, EngineError> {
    let start = Instant::now();
    let ring = Ring::with_modulus(opts.modulus.clone())?;
    let plan = Plan::new(nice)?;
    let ctx = Ctx {
        plan: &plan,
        ranked: spec.join == JoinMode::DisjointRanked,
        forget: spec.forget,
        w: spec.width(),
        leaf: spec.padded(&spec.leaf_value, &ring),
        aux_empty: spec.padded(&spec.aux_empty, &ring),
        aux_edge: spec.padded(&spec.aux_edge, &ring),
        ring,
    };
    let threads = opts.threads.unwrap_or(1).max(1);
    let out = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .stack_size(STACK_BYTES / 4)
            .build()
            .map_err(|e| EngineError::Internal(format!("thread pool: {e}")))?;
        // A few spare levels keep all workers busy when branches are uneven.
        let depth = usize::BITS - (threads - 1).leading_zeros() + 3;
        pool.install(|| ctx.eval(plan.root, 0, depth))
    } else {
        std::thread::scope(|s| {
            std::thread::Builder::new()
                .stack_size(STACK_BYTES)
                .spawn_scoped(s, || ctx.eval(plan.root, 0, 0))
                .expect("spawn evaluator thread")
                .join()
                .expect("evaluator thread panicked")
        })
    };
    let root = out.values[..ctx.w].to_vec();
    Ok(Evaluation {
        root,
        stats: EvalStats {
            leaf_evaluations: out.leaves,
            peak_live_values: out.peak,
            table_entries: None,
            max_table_entries: None,
            wall_time: start.elapsed(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{to_modified_nice, TreeDecomposition};
    use crate::graphs::Graph;

    fn single_bag_nice(n: usize, edges: &[(usize, usize)]) -> ModifiedNiceDecomposition {
        let g = Graph::new(n, edges).unwrap();
        to_modified_nice(&TreeDecomposition::single_bag(n), &g).unwrap()
    }

    #[test]
    fn bit_helpers_round_trip() {
        let m = 0b1011_0110u64;
        for pos in 0..8 {
            for bit in [false, true] {
                assert_eq!(remove_bit(insert_bit(m, pos, bit), pos), m);
            }
        }
        assert_eq!(insert_bit(0b11, 1, false), 0b101);
    }

    #[test]
    fn k2_has_one_perfect_matching() {
        let nice = single_bag_nice(2, &[(0, 1)]);
        let ev = evaluate(&nice, &ProblemSpec::perfect_matchings(), &EvalOptions::default()).unwrap();
        assert_eq!(ev.root, vec![Int::ONE]);
        assert_eq!(ev.stats.leaf_evaluations, 8);
    }

    #[test]
    fn triangle_has_none() {
        let nice = single_bag_nice(3, &[(0, 1), (1, 2), (0, 2)]);
        let ev = evaluate(&nice, &ProblemSpec::perfect_matchings(), &EvalOptions::default()).unwrap();
        assert_eq!(ev.root, vec![Int::ZERO]);
    }

    #[test]
    fn k2_matching_polynomial() {
        let nice = single_bag_nice(2, &[(0, 1)]);
        let ev = evaluate(&nice, &ProblemSpec::matching_polynomial(1), &EvalOptions::default()).unwrap();
        assert_eq!(ev.root, vec![Int::ONE, Int::ONE]);
    }

    #[test]
    fn parallel_matches_serial() {
        let nice = single_bag_nice(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]);
        let spec = ProblemSpec::perfect_matchings();
        let serial = evaluate(&nice, &spec, &EvalOptions::default()).unwrap();
        let par = evaluate(&nice, &spec, &EvalOptions { threads: Some(4), ..Default::default() }).unwrap();
        assert_eq!(serial.root, vec![Int::from(3i64)]);
        assert_eq!(serial.root, par.root);
        assert_eq!(serial.stats.leaf_evaluations, par.stats.leaf_evaluations);
        assert_eq!(serial.stats.peak_live_values, par.stats.peak_live_values);
    }
}
