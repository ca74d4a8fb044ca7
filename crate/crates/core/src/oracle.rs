//! Brute-force reference counts.
//!
//! Everything here enumerates objects directly, with no transforms, so that a
//! bug in the engine cannot be mirrored by a bug in its check.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::Int;
use crate::graphs::{Graph, Hypergraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} is {found}, the budget allows at most {limit}")]
    Budget { what: &'static str, found: usize, limit: usize },
}

/// Size limits checked before any enumeration starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_hyperedges: usize,
    pub max_tree_depth_vertices: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_vertices: 20, max_edges: 24, max_hyperedges: 22, max_tree_depth_vertices: 12 }
    }
}

impl OracleBudget {
    fn check(what: &'static str, found: usize, limit: usize) -> Result<(), OracleError> {
        if found > limit {
            Err(OracleError::Budget { what, found, limit })
        } else {
            Ok(())
        }
    }
}

/// Counts perfect matchings by repeatedly pairing the lowest uncovered vertex.
pub fn bf_perfect_matchings(g: &Graph, budget: &OracleBudget) -> Result<Int, OracleError> {
    OracleBudget::check("vertex count", g.n(), budget.max_vertices)?;
    if g.n() % 2 == 1 {
        return Ok(Int::ZERO);
    }
    // Parallel edges are distinct choices, so keep multiplicities.
    let mut adj = vec![Vec::new(); g.n()];
    for &[u, v] in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn go(adj: &[Vec<usize>], used: &mut [bool]) -> u64 {
        let Some(v) = used.iter().position(|&u| !u) else {
            return 1;
        };
        used[v] = true;
        let mut total = 0;
        for &w in &adj[v] {
            if !used[w] {
                used[w] = true;
                total += go(adj, used);
                used[w] = false;
            }
        }
        used[v] = false;
        total
    }
    Ok(Int::from(go(&adj, &mut vec![false; g.n()])))
}

/// Number of matchings of each size `0..=n/2`, by backtracking over edges.
pub fn bf_matchings_by_size(g: &Graph, budget: &OracleBudget) -> Result<Vec<Int>, OracleError> {
    OracleBudget::check("edge count", g.edges().len(), budget.max_edges)?;
    let mut counts = vec![0u64; g.n() / 2 + 1];
    fn go(edges: &[[usize; 2]], i: usize, used: &mut [bool], size: usize, counts: &mut [u64]) {
        if i == edges.len() {
            counts[size] += 1;
            return;
        }
        go(edges, i + 1, used, size, counts);
        let [u, v] = edges[i];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            go(edges, i + 1, used, size + 1, counts);
            used[u] = false;
            used[v] = false;
        }
    }
    go(g.edges(), 0, &mut vec![false; g.n()], 0, &mut counts);
    Ok(counts.into_iter().map(Int::from).collect())
}

fn member_masks(hg: &Hypergraph) -> Vec<Vec<bool>> {
    hg.hyperedges()
        .iter()
        .map(|e| {
            let mut m = vec![false; hg.n()];
            e.iter().for_each(|&v| m[v] = true);
            m
        })
        .collect()
}

/// Counts subcollections whose union is the whole universe.
pub fn bf_set_covers(hg: &Hypergraph, budget: &OracleBudget) -> Result<Int, OracleError> {
    let m = hg.hyperedges().len();
    OracleBudget::check("hyperedge count", m, budget.max_hyperedges)?;
    let members = member_masks(hg);
    let mut count = 0u64;
    for pick in 0u64..1 << m {
        let covered = (0..hg.n()).all(|v| (0..m).any(|i| pick >> i & 1 == 1 && members[i][v]));
        if covered {
            count += 1;
        }
    }
    Ok(Int::from(count))
}

/// Counts `l`-element subcollections of pairwise disjoint hyperedges.
pub fn bf_l_packings(hg: &Hypergraph, l: usize, budget: &OracleBudget) -> Result<Int, OracleError> {
    let m = hg.hyperedges().len();
    OracleBudget::check("hyperedge count", m, budget.max_hyperedges)?;
    let edges = hg.hyperedges();
    let mut count = 0u64;
    for pick in 0u64..1 << m {
        if pick.count_ones() as usize != l {
            continue;
        }
        let mut seen = vec![false; hg.n()];
        let disjoint = (0..m)
            .filter(|&i| pick >> i & 1 == 1)
            .all(|i| edges[i].iter().all(|&v| !std::mem::replace(&mut seen[v], true)));
        if disjoint {
            count += 1;
        }
    }
    Ok(Int::from(count))
}

/// Counts vertex subsets `D` such that every vertex is in `D` or adjacent to it.
pub fn bf_dominating_sets(g: &Graph, budget: &OracleBudget) -> Result<Int, OracleError> {
    OracleBudget::check("vertex count", g.n(), budget.max_vertices)?;
    let adj = g.adjacency();
    let mut count = 0u64;
    for pick in 0u64..1 << g.n() {
        let dominated = (0..g.n()).all(|v| pick >> v & 1 == 1 || adj[v].iter().any(|&w| pick >> w & 1 == 1));
        if dominated {
            count += 1;
        }
    }
    Ok(Int::from(count))
}

/// Exact tree-depth: 1 + min over deleted roots for a connected set, max over
/// components otherwise; memoized on vertex subsets.
pub fn exact_tree_depth(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    OracleBudget::check("vertex count", g.n(), budget.max_tree_depth_vertices)?;
    let adj: Vec<u32> = g.adjacency().iter().map(|ns| ns.iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    fn components(adj: &[u32], set: u32) -> Vec<u32> {
        let mut rest = set;
        let mut out = Vec::new();
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            loop {
                let grown = comp | comp_neighbours(adj, comp) & set;
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }
    fn comp_neighbours(adj: &[u32], set: u32) -> u32 {
        (0..adj.len()).filter(|&v| set >> v & 1 == 1).fold(0, |m, v| m | adj[v])
    }
    fn td(adj: &[u32], set: u32, memo: &mut HashMap<u32, usize>) -> usize {
        if set == 0 {
            return 0;
        }
        if let Some(&d) = memo.get(&set) {
            return d;
        }
        let comps = components(adj, set);
        let d = if comps.len() > 1 {
            comps.iter().map(|&c| td(adj, c, memo)).max().unwrap_or(0)
        } else {
            (0..adj.len()).filter(|&v| set >> v & 1 == 1).map(|v| 1 + td(adj, set & !(1 << v), memo)).min().unwrap_or(0)
        };
        memo.insert(set, d);
        d
    }
    let all = if g.n() == 0 { 0 } else { u32::MAX >> (32 - g.n()) };
    Ok(td(&adj, all, &mut HashMap::new()))
}
