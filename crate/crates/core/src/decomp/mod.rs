//! Tree decompositions: representation, validation, construction and measurement.

mod balanced;
mod grid;
mod metrics;
mod nice;

pub use balanced::{balanced_td, BfsLayerSeparator, Separation, SeparatorOracle, TrivialSeparator};
pub use grid::{grid_balanced_td, grid_path_decomposition, grid_separator, GridRegion, GridSeparator};
pub use metrics::{metrics, DecompositionMetrics, RootedBags};
pub use nice::{to_modified_nice, ModifiedNiceDecomposition, NiceNode, NodeKind};

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::graphs::EdgeFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("malformed decomposition tree: {0}")]
    Structure(String),
    #[error("decomposition is invalid: {0}")]
    Invalid(ValidationReport),
    #[error("oracle returned a non-separator: edge ({0}, {1}) joins the two sides")]
    NotASeparator(usize, usize),
    #[error("oracle output is not a partition of the part: {0}")]
    NotAPartition(String),
    #[error("oracle made no progress on a part of {0} vertices")]
    NoProgress(usize),
    #[error("region has a single vertex in every dimension; nothing to cut")]
    NoCut,
    #[error("modified nice invariant violated at node {node}: {reason}")]
    Nice { node: usize, reason: String },
}

/// A rooted tree of bags. Bags are sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
    assignment: Option<Vec<usize>>,
}

impl TreeDecomposition {
    /// Builds from bags and parent links; exactly one node must have no parent.
    pub fn rooted(bags: Vec<Vec<usize>>, parent: Vec<Option<usize>>) -> Result<Self, DecompError> {
        if bags.is_empty() {
            return Err(DecompError::Structure("no bags".into()));
        }
        if bags.len() != parent.len() {
            return Err(DecompError::Structure("bag and parent counts differ".into()));
        }
        let roots: Vec<usize> = (0..bags.len()).filter(|&i| parent[i].is_none()).collect();
        let [root] = roots[..] else {
            return Err(DecompError::Structure(format!("expected one root, found {}", roots.len())));
        };
        let mut children = vec![Vec::new(); bags.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= bags.len() {
                    return Err(DecompError::Structure(format!("node {i} has unknown parent {p}")));
                }
                children[p].push(i);
            }
        }
        let td = TreeDecomposition {
            bags: bags.into_iter().map(sorted).collect(),
            parent,
            children,
            root,
            assignment: None,
        };
        if td.preorder().len() != td.bags.len() {
            return Err(DecompError::Structure("parent links contain a cycle".into()));
        }
        Ok(td)
    }

    /// Builds from an unrooted tree (bags plus tree edges), rooted at `root`.
    pub fn from_tree_edges(
        bags: Vec<Vec<usize>>,
        tree_edges: &[(usize, usize)],
        root: usize,
    ) -> Result<Self, DecompError> {
        let k = bags.len();
        if root >= k {
            return Err(DecompError::Structure(format!("root {root} out of range")));
        }
        if tree_edges.len() + 1 != k {
            return Err(DecompError::Structure(format!(
                "{} bags need {} tree edges, found {}",
                k,
                k.saturating_sub(1),
                tree_edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in tree_edges {
            if a >= k || b >= k || a == b {
                return Err(DecompError::Structure(format!("bad tree edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; k];
        let mut seen = vec![false; k];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(DecompError::Structure("tree edges do not connect all bags".into()));
        }
        Self::rooted(bags, parent)
    }

    /// One bag holding every vertex.
    pub fn single_bag(n: usize) -> Self {
        Self::rooted(vec![(0..n).collect()], vec![None]).expect("single bag is a tree")
    }

    /// Pins each (hyper)edge to a node whose bag must contain it.
    pub fn with_assignment(mut self, assignment: Vec<usize>) -> Self {
        self.assignment = Some(assignment);
        self
    }

    pub fn assignment(&self) -> Option<&[usize]> {
        self.assignment.as_deref()
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn bag(&self, x: usize) -> &[usize] {
        &self.bags[x]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent[x]
    }

    pub fn children(&self, x: usize) -> &[usize] {
        &self.children[x]
    }

    /// Undirected tree edges `(parent, child)`.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).filter_map(|x| self.parent[x].map(|p| (p, x))).collect()
    }

    /// Nodes in breadth-first order from the root.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.bags.len());
        let mut seen = vec![false; self.bags.len()];
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &c in &self.children[x] {
                if seen[c] {
                    return order;
                }
                seen[c] = true;
                queue.push_back(c);
            }
        }
        order
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.len()];
        for x in self.preorder() {
            for &c in &self.children[x] {
                depth[c] = depth[x] + 1;
            }
        }
        depth
    }

    /// Same tree with nodes renumbered so the root is node 0 and order is breadth-first.
    pub fn renumbered(&self) -> TreeDecomposition {
        let order = self.preorder();
        let mut new_id = vec![0; self.len()];
        for (i, &x) in order.iter().enumerate() {
            new_id[x] = i;
        }
        let bags = order.iter().map(|&x| self.bags[x].clone()).collect();
        let parent = order.iter().map(|&x| self.parent[x].map(|p| new_id[p])).collect();
        let mut td = Self::rooted(bags, parent).expect("renumbering keeps a tree");
        td.assignment = self.assignment.as_ref().map(|a| a.iter().map(|&x| new_id[x]).collect());
        td
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// A violated decomposition property, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    VertexOutOfRange {
        node: usize,
        vertex: usize,
    },
    /// `vertex` is in the bags of `x` and `y` but not of `z`, which lies between them.
    Disconnected {
        vertex: usize,
        x: usize,
        y: usize,
        z: usize,
    },
    EdgeUncovered {
        edge: usize,
        members: Vec<usize>,
    },
    AssignmentMismatch {
        edge: usize,
        node: usize,
    },
    VertexUncovered {
        vertex: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} holds unknown vertex {vertex}")
            }
            Violation::Disconnected { vertex, x, y, z } => {
                write!(f, "vertex {vertex} is in bags {x} and {y} but missing from bag {z} between them")
            }
            Violation::EdgeUncovered { edge, members } => {
                write!(f, "edge {edge} {members:?} is not contained in any bag")
            }
            Violation::AssignmentMismatch { edge, node } => {
                write!(f, "edge {edge} is assigned to bag {node}, which does not contain it")
            }
            Violation::VertexUncovered { vertex } => write!(f, "vertex {vertex} is in no bag"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violations.first() {
            None => write!(f, "valid"),
            Some(v) if self.violations.len() == 1 => write!(f, "{v}"),
            Some(v) => write!(f, "{v} (and {} more)", self.violations.len() - 1),
        }
    }
}

fn bag_contains(bag: &[usize], members: &[usize]) -> bool {
    members.iter().all(|v| bag.binary_search(v).is_ok())
}

/// Checks the three decomposition properties (and any edge assignment) against `input`.
pub fn validate<E: EdgeFamily + ?Sized>(input: &E, td: &TreeDecomposition) -> ValidationReport {
    let n = input.vertex_count();
    let mut violations = Vec::new();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (x, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                violations.push(Violation::VertexOutOfRange { node: x, vertex: v });
            } else {
                holders[v].push(x);
            }
        }
    }

    // Connectivity: each vertex may have only one "top" node (a holder whose parent is not).
    let depth = td.depths();
    for (v, nodes) in holders.iter().enumerate() {
        let mut tops: Vec<usize> = nodes
            .iter()
            .copied()
            .filter(|&x| match td.parent[x] {
                None => true,
                Some(p) => td.bags[p].binary_search(&v).is_err(),
            })
            .collect();
        if tops.len() > 1 {
            tops.sort_by_key(|&x| (depth[x], x));
            let x = tops[0];
            let y = tops[1];
            let z = td.parent[y].expect("a non-shallowest top has a parent");
            violations.push(Violation::Disconnected { vertex: v, x, y, z });
        }
    }

    for i in 0..input.edge_count() {
        let members = input.edge(i);
        let covered = match members.first() {
            None => true,
            Some(&first) if first < n => holders[first].iter().any(|&x| bag_contains(&td.bags[x], members)),
            Some(_) => false,
        };
        if !covered {
            violations.push(Violation::EdgeUncovered { edge: i, members: members.to_vec() });
        }
    }

    if let Some(assignment) = &td.assignment {
        for (edge, &node) in assignment.iter().enumerate() {
            let ok = node < td.len() && edge < input.edge_count() && bag_contains(&td.bags[node], input.edge(edge));
            if !ok {
                violations.push(Violation::AssignmentMismatch { edge, node });
            }
        }
    }

    for (v, nodes) in holders.iter().enumerate() {
        if nodes.is_empty() {
            violations.push(Violation::VertexUncovered { vertex: v });
        }
    }
    ValidationReport { violations }
}
