//! Graphs, hypergraphs, grid graphs and the closed-neighborhood reduction.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("endpoint {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1}) in a simple graph")]
    DuplicateEdge(usize, usize),
    #[error("hyperedge {0} is empty")]
    EmptyHyperedge(usize),
    #[error("grid dimension {0} has length zero")]
    ZeroLength(usize),
    #[error("grid needs at least one dimension")]
    NoDimensions,
}

/// Anything whose (hyper)edges can be viewed as vertex sets over `0..n`.
pub trait EdgeFamily {
    fn vertex_count(&self) -> usize;
    fn edge_count(&self) -> usize;
    /// Members of edge `i`, sorted ascending.
    fn edge(&self, i: usize) -> &[usize];
}

/// Undirected graph on vertices `0..n`. Edges are stored with the smaller endpoint first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<[usize; 2]>,
    multigraph: bool,
}

impl Graph {
    /// Builds a simple graph; duplicate edges are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Self::build(n, edges, false)
    }

    /// Builds a multigraph; parallel edges are kept as distinct edges.
    pub fn multigraph(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Self::build(n, edges, true)
    }

    fn build(n: usize, edges: &[(usize, usize)], multigraph: bool) -> Result<Graph, GraphError> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = [u.min(v), u.max(v)];
            if !multigraph && !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e[0], e[1]));
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out, multigraph })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }

    /// Neighbor lists, sorted, without repetition.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &[u, v] in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e[0] == v || e[1] == v).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

impl EdgeFamily for Graph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }
}

/// Set system over the universe `0..n`; hyperedges form a multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    n: usize,
    hyperedges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Members of each hyperedge are sorted and deduplicated.
    pub fn new(n: usize, hyperedges: Vec<Vec<usize>>) -> Result<Hypergraph, GraphError> {
        let mut out = Vec::with_capacity(hyperedges.len());
        for (i, mut e) in hyperedges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(GraphError::EmptyHyperedge(i));
            }
            if let Some(&w) = e.iter().find(|&&w| w >= n) {
                return Err(GraphError::OutOfRange { vertex: w, n });
            }
            e.sort_unstable();
            e.dedup();
            out.push(e);
        }
        Ok(Hypergraph { n, hyperedges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    /// The graph joining every pair of vertices that share a hyperedge.
    pub fn primal_graph(&self) -> Graph {
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for e in &self.hyperedges {
            for (i, &u) in e.iter().enumerate() {
                for &v in &e[i + 1..] {
                    if seen.insert((u, v)) {
                        edges.push((u, v));
                    }
                }
            }
        }
        Graph::new(self.n, &edges).expect("primal graph edges are valid")
    }

    /// Bitmask of each hyperedge. Requires `n <= 64`.
    pub fn masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bitmask view needs at most 64 elements");
        self.hyperedges.iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect()
    }
}

impl EdgeFamily for Hypergraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn edge_count(&self) -> usize {
        self.hyperedges.len()
    }

    fn edge(&self, i: usize) -> &[usize] {
        &self.hyperedges[i]
    }
}

/// Extents `n_1..n_d` of an axis-aligned grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridSpec {
    lengths: Vec<usize>,
}

impl GridSpec {
    pub fn new(lengths: Vec<usize>) -> Result<GridSpec, GraphError> {
        if lengths.is_empty() {
            return Err(GraphError::NoDimensions);
        }
        if let Some(i) = lengths.iter().position(|&l| l == 0) {
            return Err(GraphError::ZeroLength(i));
        }
        Ok(GridSpec { lengths })
    }

    pub fn uniform(d: usize, n: usize) -> Result<GridSpec, GraphError> {
        GridSpec::new(vec![n; d])
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn dims(&self) -> usize {
        self.lengths.len()
    }

    pub fn volume(&self) -> usize {
        self.lengths.iter().product()
    }

    pub fn max_length(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    /// Row-major strides; the last dimension varies fastest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.lengths.len()];
        for i in (0..self.lengths.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.lengths[i + 1];
        }
        strides
    }

    pub fn vertex_id(&self, coords: &[usize]) -> usize {
        coords.iter().zip(self.strides()).map(|(c, s)| c * s).sum()
    }

    pub fn coords(&self, mut id: usize) -> Vec<usize> {
        let strides = self.strides();
        strides
            .iter()
            .map(|s| {
                let c = id / s;
                id %= s;
                c
            })
            .collect()
    }

    pub fn is_uniform(&self) -> bool {
        self.lengths.windows(2).all(|w| w[0] == w[1])
    }
}

/// The grid graph: integer points in the box, joined at L1 distance one.
pub fn grid_graph(spec: &GridSpec) -> Graph {
    let strides = spec.strides();
    let mut edges = Vec::new();
    for id in 0..spec.volume() {
        let coords = spec.coords(id);
        for (dim, &c) in coords.iter().enumerate() {
            if c + 1 < spec.lengths[dim] {
                edges.push((id, id + strides[dim]));
            }
        }
    }
    Graph::new(spec.volume(), &edges).expect("grid edges are valid")
}

/// One hyperedge `N[v] = {v} ∪ N(v)` per vertex, in vertex order.
pub fn closed_neighborhood_hypergraph(g: &Graph) -> Hypergraph {
    let adj = g.adjacency();
    let sets = adj
        .into_iter()
        .enumerate()
        .map(|(v, mut nb)| {
            nb.push(v);
            nb
        })
        .collect();
    Hypergraph::new(g.n, sets).expect("closed neighborhoods are nonempty")
}

/// Each edge as a two-element hyperedge, in edge order.
pub fn graph_as_hypergraph(g: &Graph) -> Hypergraph {
    Hypergraph { n: g.n, hyperedges: g.edges.iter().map(|e| e.to_vec()).collect() }
}

/// Erdős–Rényi `G(n, p)`, deterministic in `seed`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_graph_with(n, p, &mut rng)
}

pub fn random_graph_with(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// A random connected graph: a random spanning tree plus `G(n, p)` extra edges.
pub fn random_connected_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut set = HashSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let (u, v) = (order[i].min(parent), order[i].max(parent));
        set.insert((u, v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                set.insert((u, v));
            }
        }
    }
    let mut edges: Vec<_> = set.into_iter().collect();
    edges.sort_unstable();
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// `m` random nonempty hyperedges over `0..n`, each of size at most `max_size`.
pub fn random_hypergraph(n: usize, m: usize, max_size: usize, rng: &mut impl Rng) -> Hypergraph {
    let max_size = max_size.clamp(1, n.max(1));
    let sets = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=max_size);
            let mut pool: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let j = rng.gen_range(i..n);
                pool.swap(i, j);
            }
            pool.truncate(size);
            pool
        })
        .collect();
    Hypergraph::new(n, sets).expect("generated hyperedges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_graph_examples() {
        let k2 = Graph::new(2, &[(1, 0)]).unwrap();
        assert_eq!(k2.edges(), &[[0, 1]]);
        let iso = Graph::new(1, &[]).unwrap();
        assert_eq!(iso.edges().len(), 0);
        let tri = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.edges().len(), 3);
    }

    #[test]
    fn make_graph_errors() {
        assert_eq!(Graph::new(2, &[(0, 2)]), Err(GraphError::OutOfRange { vertex: 2, n: 2 }));
        assert_eq!(Graph::new(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::new(2, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        let multi = Graph::multigraph(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(multi.edges().len(), 2);
        assert!(multi.is_multigraph());
    }

    #[test]
    fn grid_examples() {
        let c4 = grid_graph(&GridSpec::new(vec![2, 2]).unwrap());
        assert_eq!((c4.n(), c4.edges().len()), (4, 4));
        let cube = grid_graph(&GridSpec::new(vec![2, 2, 2]).unwrap());
        assert_eq!((cube.n(), cube.edges().len()), (8, 12));
        let g33 = grid_graph(&GridSpec::new(vec![3, 3]).unwrap());
        assert_eq!((g33.n(), g33.edges().len()), (9, 12));
        assert_eq!(GridSpec::new(vec![3, 0]), Err(GraphError::ZeroLength(1)));
        assert_eq!(GridSpec::new(vec![]), Err(GraphError::NoDimensions));
    }

    #[test]
    fn row_major_encoding() {
        let spec = GridSpec::new(vec![2, 3]).unwrap();
        assert_eq!(spec.vertex_id(&[0, 1]), 1);
        assert_eq!(spec.vertex_id(&[1, 0]), 3);
        assert_eq!(spec.coords(5), vec![1, 2]);
    }

    #[test]
    fn neighborhood_examples() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(closed_neighborhood_hypergraph(&k2).hyperedges(), &[vec![0, 1], vec![0, 1]]);
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(closed_neighborhood_hypergraph(&path).hyperedges(), &[vec![0, 1], vec![0, 1, 2], vec![1, 2]]);
        let iso = Graph::new(1, &[]).unwrap();
        assert_eq!(closed_neighborhood_hypergraph(&iso).hyperedges(), &[vec![0]]);
    }

    #[test]
    fn graph_as_hypergraph_examples() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(graph_as_hypergraph(&k2).hyperedges(), &[vec![0, 1]]);
        let tri = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(graph_as_hypergraph(&tri).edge_count(), 3);
        let empty = Graph::new(4, &[]).unwrap();
        assert!(graph_as_hypergraph(&empty).hyperedges().is_empty());
    }

    #[test]
    fn hypergraph_errors() {
        assert_eq!(Hypergraph::new(2, vec![vec![]]), Err(GraphError::EmptyHyperedge(0)));
        assert!(Hypergraph::new(2, vec![vec![0, 2]]).is_err());
        let dup = Hypergraph::new(2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(dup.hyperedges().len(), 2);
    }

    #[test]
    fn random_graph_is_seed_deterministic() {
        assert_eq!(random_graph(8, 0.4, 7), random_graph(8, 0.4, 7));
    }

    fn arb_spec() -> impl Strategy<Value = GridSpec> {
        prop::collection::vec(1usize..6, 1..5)
            .prop_filter("small", |l| l.iter().product::<usize>() <= 10_000)
            .prop_map(|l| GridSpec::new(l).unwrap())
    }

    proptest! {
        #[test]
        fn grid_degree_and_edge_count(spec in arb_spec()) {
            let g = grid_graph(&spec);
            let d = spec.dims();
            prop_assert_eq!(g.n(), spec.volume());
            let expect: usize = (0..d)
                .map(|i| (spec.lengths()[i] - 1) * spec.volume() / spec.lengths()[i])
                .sum();
            prop_assert_eq!(g.edges().len(), expect);
            for v in 0..g.n() {
                prop_assert!(g.degree(v) <= 2 * d);
            }
            if spec.lengths().iter().all(|&l| l >= 2) {
                prop_assert_eq!(g.degree(0), d);
            }
        }

        #[test]
        fn closed_neighborhoods_contain_vertex(n in 1usize..10, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = random_graph(n, p, seed);
            let hg = closed_neighborhood_hypergraph(&g);
            for v in 0..n {
                prop_assert!(hg.edge(v).contains(&v));
                prop_assert_eq!(hg.edge(v).len(), g.degree(v) + 1);
            }
            let as_hg = graph_as_hypergraph(&g);
            for (i, e) in g.edges().iter().enumerate() {
                prop_assert_eq!(as_hg.edge(i), &e[..]);
            }
        }
    }
}
