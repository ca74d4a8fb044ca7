//! Bottom-up table dynamic programming in value space (exponential-space baseline).

use std::time::Instant;

use super::zeta::{Op, Plan};
use super::{EngineError, EvalOptions, EvalStats, Evaluation, ForgetMode, JoinMode, ProblemSpec};
use crate::algebra::{Int, Ring};
use crate::decomp::ModifiedNiceDecomposition;

/// Environment variable holding the table-memory limit in bytes.
pub const MEMORY_ENV: &str = "ZTDP_MAX_MEMORY";

const DEFAULT_LIMIT: u128 = 2 << 30;

/// The configured limit, or 2 GiB when unset or unparsable.
pub fn table_memory_limit() -> u128 {
    std::env::var(MEMORY_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_LIMIT)
}

#[inline]
fn remove_bit(mask: usize, pos: u32) -> usize {
    let low = mask & ((1 << pos) - 1);
    ((mask >> (pos + 1)) << pos) | low
}

#[inline]
fn insert_bit(mask: usize, pos: u32, bit: bool) -> usize {
    let low = mask & ((1 << pos) - 1);
    ((mask >> pos) << (pos + 1)) | ((bit as usize) << pos) | low
}

/// Computes `f_x[Y]` for every node `x` and every `Y ⊆ B_x`, children first.
///
/// `f_x[Y]` counts partial solutions in the subtree of `x` whose covered bag
/// vertices are exactly `Y`. Joins use the subset convolution (disjoint mode)
/// or the union product (union mode), both by direct summation.
pub fn table_dp_evaluate(
    nice: &ModifiedNiceDecomposition,
    spec: &ProblemSpec,
    opts: &EvalOptions,
) -> Result<Evaluation, EngineError> {
    let start = Instant::now();
    let ring = Ring::with_modulus(opts.modulus.clone())?;
    let plan = Plan::new(nice)?;
    let w = spec.width();
    let max_bag = plan.bag_len.iter().copied().max().unwrap_or(0);
    let needed = (1u128 << max_bag) * w as u128 * std::mem::size_of::<Int>() as u128 * 3;
    let limit = opts.memory_limit.unwrap_or_else(table_memory_limit);
    if needed > limit {
        return Err(EngineError::WidthGuard { width: max_bag.saturating_sub(1), needed, limit });
    }
    let leaf = spec.padded(&spec.leaf_value, &ring);
    let aux_empty = spec.padded(&spec.aux_empty, &ring);
    let aux_edge = spec.padded(&spec.aux_edge, &ring);

    let mut order = Vec::with_capacity(plan.ops.len());
    let mut stack = vec![plan.root];
    while let Some(x) = stack.pop() {
        order.push(x);
        match plan.ops[x] {
            Op::Leaf | Op::Aux { .. } => {}
            Op::Introduce { child, .. } | Op::Forget { child, .. } => stack.push(child),
            Op::Join { left, right } => {
                stack.push(left);
                stack.push(right);
            }
        }
    }

    let mut tables: Vec<Option<Vec<Int>>> = vec![None; plan.ops.len()];
    let mut stats = EvalStats { table_entries: Some(0), max_table_entries: Some(0), ..Default::default() };
    let mut live = 0u64;
    let mut total = 0u64;
    let mut largest = 0u64;
    for &x in order.iter().rev() {
        let size = 1usize << plan.bag_len[x];
        let mut t = vec![Int::ZERO; size * w];
        let mut consumed = 0u64;
        match plan.ops[x] {
            Op::Leaf => {
                t.clone_from_slice(&leaf);
                stats.leaf_evaluations += 1;
            }
            Op::Aux { edge_mask, .. } => {
                t[..w].clone_from_slice(&aux_empty);
                let e = edge_mask as usize * w;
                for k in 0..w {
                    t[e + k] = ring.add(&t[e + k], &aux_edge[k]);
                }
                stats.leaf_evaluations += size as u64;
            }
            Op::Introduce { child, pos } => {
                let c = tables[child].take().expect("child computed");
                for y in 0..size {
                    if y >> pos & 1 == 0 {
                        let src = remove_bit(y, pos) * w;
                        t[y * w..(y + 1) * w].clone_from_slice(&c[src..src + w]);
                    }
                }
                consumed += c.len() as u64;
            }
            Op::Forget { child, pos } => {
                let c = tables[child].take().expect("child computed");
                for y in 0..size {
                    let with = insert_bit(y, pos, true) * w;
                    let without = insert_bit(y, pos, false) * w;
                    for k in 0..w {
                        let mut v = c[with + k].clone();
                        if spec.forget == ForgetMode::MaySkip {
                            v = ring.add(&v, &c[without + k]);
                        }
                        t[y * w + k] = v;
                    }
                }
                consumed += c.len() as u64;
            }
            Op::Join { left, right } => {
                let a = tables[left].take().expect("left computed");
                let b = tables[right].take().expect("right computed");
                for y in 0..size {
                    let out = &mut t[y * w..(y + 1) * w];
                    // Enumerate every z ⊆ y, including z = y and z = ∅.
                    let mut z = y;
                    loop {
                        match spec.join {
                            JoinMode::DisjointRanked => {
                                let r = y ^ z;
                                ring.poly_mul_acc(out, &a[z * w..(z + 1) * w], &b[r * w..(r + 1) * w]);
                            }
                            JoinMode::UnionRankFree => {
                                // Second sets with union y: (y \ z) plus any subset of z.
                                let rest = y ^ z;
                                let mut s = z;
                                loop {
                                    let r = rest | s;
                                    ring.poly_mul_acc(out, &a[z * w..(z + 1) * w], &b[r * w..(r + 1) * w]);
                                    if s == 0 {
                                        break;
                                    }
                                    s = (s - 1) & z;
                                }
                            }
                        }
                        if z == 0 {
                            break;
                        }
                        z = (z - 1) & y;
                    }
                }
                consumed += (a.len() + b.len()) as u64;
            }
        }
        let len = t.len() as u64;
        total += len;
        largest = largest.max(len);
        live += len;
        stats.peak_live_values = stats.peak_live_values.max(live);
        live -= consumed;
        tables[x] = Some(t);
    }
    let root = tables[plan.root].take().expect("root computed")[..w].to_vec();
    stats.table_entries = Some(total);
    stats.max_table_entries = Some(largest);
    stats.wall_time = start.elapsed();
    Ok(Evaluation { root, stats })
}
