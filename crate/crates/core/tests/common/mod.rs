#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ztdp::decomp::{balanced_td, DecompError, Separation, SeparatorOracle, TreeDecomposition};
use ztdp::engine::Outcome;
use ztdp::graphs::{random_connected_graph, Graph};
use ztdp::io::{parse_td, write_td};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every labelled connected graph on `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len())
        .filter_map(|pick| {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &p)| p).collect();
            let g = Graph::new(n, &edges).unwrap();
            g.is_connected().then_some(g)
        })
        .collect()
}

/// Connected graphs on up to six vertices (exhaustive) plus `random` seeded
/// connected graphs on seven to nine vertices.
pub fn matching_family(random: usize, seed: u64) -> Vec<Graph> {
    let mut out: Vec<Graph> = (1..=6).flat_map(connected_graphs).collect();
    let mut r = rng(seed);
    for _ in 0..random {
        let n = r.gen_range(7..=9);
        let p = r.gen_range(0.2..0.7);
        out.push(random_connected_graph(n, p, &mut r));
    }
    out
}

/// Splits each part at a random separator: a random subset goes to `S`, and the
/// remaining components are dealt randomly to the two sides.
pub struct RandomSeparator(pub ChaCha8Rng);

impl SeparatorOracle for RandomSeparator {
    fn separate(&mut self, g: &Graph, part: &[usize]) -> Result<Separation, DecompError> {
        let adj = g.adjacency();
        let mut sep = Vec::new();
        let mut rest = Vec::new();
        let share = self.0.gen_range(0.0..0.6);
        for &v in part {
            if self.0.gen_bool(share) {
                sep.push(v);
            } else {
                rest.push(v);
            }
        }
        let mut side = vec![usize::MAX; g.n()];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let inside: Vec<bool> = {
            let mut m = vec![false; g.n()];
            rest.iter().for_each(|&v| m[v] = true);
            m
        };
        for &s in &rest {
            if side[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            side[s] = id;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &w in &adj[comp[i]] {
                    if inside[w] && side[w] == usize::MAX {
                        side[w] = id;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comps.push(comp);
        }
        if sep.is_empty() && comps.len() == 1 {
            // Progress needs a nonempty separator; the rest stays on one side.
            let comp = &mut comps[0];
            let k = self.0.gen_range(0..comp.len());
            sep.push(comp.swap_remove(k));
        }
        comps.shuffle(&mut self.0);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, comp) in comps.into_iter().enumerate() {
            if i == 0 || (i > 1 && self.0.gen_bool(0.5)) {
                a.extend(comp);
            } else {
                b.extend(comp);
            }
        }
        sep.sort_unstable();
        a.sort_unstable();
        b.sort_unstable();
        Ok(Separation { separator: sep, a, b })
    }
}

pub fn random_td(g: &Graph, seed: u64) -> TreeDecomposition {
    balanced_td(g, &mut RandomSeparator(rng(seed))).expect("random separator is valid")
}

/// A decomposition that went through the text format, rooted at a random bag.
pub fn imported_td(g: &Graph, seed: u64) -> TreeDecomposition {
    let td = random_td(g, seed);
    let root = rng(seed ^ 0x5eed).gen_range(0..td.len());
    parse_td(&write_td(&td, g.n()), Some(root)).expect("own output parses").0
}

/// The per-run path bound: leaf evaluations at most leaves times 2^h.
pub fn path_bound_holds(out: &Outcome) -> bool {
    let h = out.metrics.tree_depth_h as u32;
    let cap = (out.metrics.leaf_count as u128) << h;
    out.stats.leaf_evaluations as u128 <= cap
}
