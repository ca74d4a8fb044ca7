//! Modified nice tree decompositions.
//!
//! Node types are leaf (empty bag), auxiliary leaf (carries one edge, bag equal
//! to its parent's), introduce vertex, forget vertex, join, and modified
//! introduce edge. The last one is a join whose second child is the auxiliary
//! leaf holding the edge, so no evaluation ever branches on an edge.

use serde::{Deserialize, Serialize};

use super::{validate, DecompError, TreeDecomposition};
use crate::graphs::EdgeFamily;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeKind {
    Leaf,
    AuxLeaf {
        edge: usize,
    },
    Introduce {
        vertex: usize,
    },
    /// Children are `[rest, aux_leaf]`.
    IntroduceEdge {
        edge: usize,
    },
    Forget {
        vertex: usize,
    },
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NiceNode {
    #[serde(flatten)]
    pub kind: NodeKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// A modified nice decomposition together with the (hyper)edges it introduces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModifiedNiceDecomposition {
    n: usize,
    edges: Vec<Vec<usize>>,
    nodes: Vec<NiceNode>,
    root: usize,
}

impl ModifiedNiceDecomposition {
    /// Assembles and checks every node-type invariant.
    pub fn new(n: usize, edges: Vec<Vec<usize>>, nodes: Vec<NiceNode>, root: usize) -> Result<Self, DecompError> {
        let nice = ModifiedNiceDecomposition { n, edges, nodes, root };
        nice.check()?;
        Ok(nice)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, x: usize) -> &NiceNode {
        &self.nodes[x]
    }

    /// The underlying bag tree.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let mut parent = vec![None; self.nodes.len()];
        for (x, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(x);
            }
        }
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        TreeDecomposition::rooted(bags, parent).expect("checked tree")
    }

    fn fail(node: usize, reason: impl Into<String>) -> DecompError {
        DecompError::Nice { node, reason: reason.into() }
    }

    fn check(&self) -> Result<(), DecompError> {
        let nodes = &self.nodes;
        if self.root >= nodes.len() {
            return Err(Self::fail(self.root, "root out of range"));
        }
        if !nodes[self.root].bag.is_empty() {
            return Err(Self::fail(self.root, "root bag is not empty"));
        }
        let mut parent_count = vec![0usize; nodes.len()];
        let mut aux_seen = vec![0usize; self.edges.len()];
        for (x, node) in nodes.iter().enumerate() {
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Self::fail(x, "bag is not strictly sorted"));
            }
            if node.bag.iter().any(|&v| v >= self.n) {
                return Err(Self::fail(x, "bag holds an unknown vertex"));
            }
            for &c in &node.children {
                if c >= nodes.len() {
                    return Err(Self::fail(x, "child out of range"));
                }
                parent_count[c] += 1;
            }
            let child_bag = |i: usize| &nodes[node.children[i]].bag;
            let arity = |k: usize| {
                if node.children.len() == k {
                    Ok(())
                } else {
                    Err(Self::fail(x, format!("expected {k} children, found {}", node.children.len())))
                }
            };
            match &node.kind {
                NodeKind::Leaf => {
                    arity(0)?;
                    if !node.bag.is_empty() {
                        return Err(Self::fail(x, "leaf bag is not empty"));
                    }
                }
                NodeKind::AuxLeaf { edge } => {
                    arity(0)?;
                    let members = self.edges.get(*edge).ok_or_else(|| Self::fail(x, "unknown edge"))?;
                    if !members.iter().all(|v| node.bag.binary_search(v).is_ok()) {
                        return Err(Self::fail(x, "auxiliary edge not inside the bag"));
                    }
                    aux_seen[*edge] += 1;
                }
                NodeKind::Introduce { vertex } => {
                    arity(1)?;
                    let mut expect = child_bag(0).clone();
                    if expect.binary_search(vertex).is_ok() {
                        return Err(Self::fail(x, "introduced vertex already in child bag"));
                    }
                    expect.push(*vertex);
                    expect.sort_unstable();
                    if expect != node.bag {
                        return Err(Self::fail(x, "introduce bag mismatch"));
                    }
                }
                NodeKind::Forget { vertex } => {
                    arity(1)?;
                    let child = child_bag(0);
                    if child.binary_search(vertex).is_err() {
                        return Err(Self::fail(x, "forgotten vertex not in child bag"));
                    }
                    let expect: Vec<usize> = child.iter().copied().filter(|v| v != vertex).collect();
                    if expect != node.bag {
                        return Err(Self::fail(x, "forget bag mismatch"));
                    }
                }
                NodeKind::Join => {
                    arity(2)?;
                    if child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return Err(Self::fail(x, "join children bags differ"));
                    }
                }
                NodeKind::IntroduceEdge { edge } => {
                    arity(2)?;
                    if child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return Err(Self::fail(x, "edge node children bags differ"));
                    }
                    match nodes[node.children[1]].kind {
                        NodeKind::AuxLeaf { edge: e } if e == *edge => {}
                        _ => return Err(Self::fail(x, "second child is not the matching auxiliary leaf")),
                    }
                }
            }
        }
        if parent_count[self.root] != 0 {
            return Err(Self::fail(self.root, "root has a parent"));
        }
        if let Some(x) = (0..nodes.len()).find(|&x| x != self.root && parent_count[x] != 1) {
            return Err(Self::fail(x, "node is not reached exactly once from the root"));
        }
        if let Some(e) = aux_seen.iter().position(|&c| c != 1) {
            return Err(Self::fail(self.root, format!("edge {e} is carried by {} auxiliary leaves", aux_seen[e])));
        }
        // With one parent per non-root node, reaching every node from the root rules out cycles.
        let mut seen = 0;
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            seen += 1;
            if seen > nodes.len() {
                break;
            }
            stack.extend(&nodes[x].children);
        }
        if seen != nodes.len() {
            return Err(Self::fail(self.root, "nodes unreachable from the root"));
        }
        let report = validate(&EdgeList { n: self.n, edges: &self.edges }, &self.to_tree_decomposition());
        if !report.is_valid() {
            return Err(DecompError::Invalid(report));
        }
        Ok(())
    }
}

struct EdgeList<'a> {
    n: usize,
    edges: &'a [Vec<usize>],
}

impl EdgeFamily for EdgeList<'_> {
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

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn bag(&self, x: usize) -> &[usize] {
        &self.nodes[x].bag
    }

    fn introduce(&mut self, below: usize, v: usize) -> usize {
        let mut bag = self.bag(below).to_vec();
        let pos = bag.binary_search(&v).expect_err("vertex not yet in bag");
        bag.insert(pos, v);
        self.push(NodeKind::Introduce { vertex: v }, bag, vec![below])
    }

    fn forget(&mut self, below: usize, v: usize) -> usize {
        let bag: Vec<usize> = self.bag(below).iter().copied().filter(|&w| w != v).collect();
        self.push(NodeKind::Forget { vertex: v }, bag, vec![below])
    }

    fn edge(&mut self, below: usize, edge: usize) -> usize {
        let bag = self.bag(below).to_vec();
        let aux = self.push(NodeKind::AuxLeaf { edge }, bag.clone(), vec![]);
        self.push(NodeKind::IntroduceEdge { edge }, bag, vec![below, aux])
    }

    fn join(&mut self, left: usize, right: usize) -> usize {
        let bag = self.bag(left).to_vec();
        self.push(NodeKind::Join, bag, vec![left, right])
    }
}

/// Each edge goes to the shallowest node containing it (ties: breadth-first order),
/// unless the decomposition already pins it.
fn assign_edges<E: EdgeFamily + ?Sized>(td: &TreeDecomposition, input: &E) -> Vec<usize> {
    if let Some(a) = td.assignment() {
        return a.to_vec();
    }
    let order = td.preorder();
    let mut rank = vec![0; td.len()];
    for (i, &x) in order.iter().enumerate() {
        rank[x] = i;
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); input.vertex_count()];
    for &x in &order {
        for &v in td.bag(x) {
            holders[v].push(x);
        }
    }
    (0..input.edge_count())
        .map(|i| {
            let members = input.edge(i);
            holders[members[0]]
                .iter()
                .copied()
                .filter(|&x| members.iter().all(|v| td.bag(x).binary_search(v).is_ok()))
                .min_by_key(|&x| rank[x])
                .expect("validated decomposition covers every edge")
        })
        .collect()
}

/// Converts a valid decomposition of `input` into modified nice form.
///
/// Bags are unchanged except for the added introduce/forget chains, so the width
/// is preserved. Each TD node `t` becomes a node with bag `B_t`; a leaf of the TD
/// starts from an empty leaf and introduces its bag in ascending order, with each
/// edge owned by `t` spliced in right after its last endpoint is introduced.
/// Internal TD nodes forget and introduce the bag difference on every child
/// branch, join the branches left-leaning, then add their owned edges on top.
pub fn to_modified_nice<E: EdgeFamily + ?Sized>(
    td: &TreeDecomposition,
    input: &E,
) -> Result<ModifiedNiceDecomposition, DecompError> {
    let report = validate(input, td);
    if !report.is_valid() {
        return Err(DecompError::Invalid(report));
    }
    let assignment = assign_edges(td, input);
    let mut owned: Vec<Vec<usize>> = vec![Vec::new(); td.len()];
    for (e, &x) in assignment.iter().enumerate() {
        owned[x].push(e);
    }

    let mut b = Builder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; td.len()];
    let order = td.preorder();
    for &t in order.iter().rev() {
        let bag = td.bag(t);
        let children = td.children(t);
        let mut cur;
        if children.is_empty() {
            cur = b.push(NodeKind::Leaf, vec![], vec![]);
            let mut pending = owned[t].clone();
            for &v in bag {
                cur = b.introduce(cur, v);
                let cur_bag = b.bag(cur).to_vec();
                let (ready, rest): (Vec<usize>, Vec<usize>) =
                    pending.into_iter().partition(|&e| input.edge(e).iter().all(|w| cur_bag.binary_search(w).is_ok()));
                pending = rest;
                for e in ready {
                    cur = b.edge(cur, e);
                }
            }
            debug_assert!(pending.is_empty());
        } else {
            let mut branches = Vec::with_capacity(children.len());
            for &c in children {
                let mut branch = top[c];
                for &v in td.bag(c) {
                    if bag.binary_search(&v).is_err() {
                        branch = b.forget(branch, v);
                    }
                }
                for &v in bag {
                    if td.bag(c).binary_search(&v).is_err() {
                        branch = b.introduce(branch, v);
                    }
                }
                branches.push(branch);
            }
            cur = branches[0];
            for &other in &branches[1..] {
                cur = b.join(cur, other);
            }
            for &e in &owned[t] {
                cur = b.edge(cur, e);
            }
        }
        top[t] = cur;
    }
    let mut root = top[td.root()];
    for &v in td.bag(td.root()) {
        root = b.forget(root, v);
    }
    let edges = (0..input.edge_count()).map(|i| input.edge(i).to_vec()).collect();
    ModifiedNiceDecomposition::new(input.vertex_count(), edges, b.nodes, root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::metrics;
    use crate::graphs::Graph;

    fn kinds_from_root(nice: &ModifiedNiceDecomposition) -> Vec<NodeKind> {
        let mut out = Vec::new();
        let mut x = nice.root();
        loop {
            let node = nice.node(x);
            out.push(node.kind.clone());
            match node.children.first() {
                Some(&c) => x = c,
                None => break,
            }
        }
        out
    }

    #[test]
    fn k2_single_bag_chain() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let nice = to_modified_nice(&TreeDecomposition::single_bag(2), &g).unwrap();
        assert_eq!(
            kinds_from_root(&nice),
            vec![
                NodeKind::Forget { vertex: 1 },
                NodeKind::Forget { vertex: 0 },
                NodeKind::IntroduceEdge { edge: 0 },
                NodeKind::Introduce { vertex: 1 },
                NodeKind::Introduce { vertex: 0 },
                NodeKind::Leaf,
            ]
        );
        assert_eq!(nice.nodes().len(), 7);
        let m = metrics(&nice);
        assert_eq!(m.tree_depth_h, 2);
        assert_eq!(m.max_forgets_on_path, 2);
    }

    #[test]
    fn isolated_vertex_chain() {
        let g = Graph::new(1, &[]).unwrap();
        let nice = to_modified_nice(&TreeDecomposition::single_bag(1), &g).unwrap();
        assert_eq!(
            kinds_from_root(&nice),
            vec![NodeKind::Forget { vertex: 0 }, NodeKind::Introduce { vertex: 0 }, NodeKind::Leaf]
        );
    }

    #[test]
    fn triangle_gets_three_edge_nodes() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let nice = to_modified_nice(&TreeDecomposition::single_bag(3), &g).unwrap();
        let edge_nodes = nice.nodes().iter().filter(|n| matches!(n.kind, NodeKind::IntroduceEdge { .. })).count();
        assert_eq!(edge_nodes, 3);
    }

    #[test]
    fn invalid_decomposition_is_rejected() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let td = TreeDecomposition::rooted(vec![vec![0], vec![1]], vec![None, Some(0)]).unwrap();
        assert!(matches!(to_modified_nice(&td, &g), Err(DecompError::Invalid(_))));
    }

    #[test]
    fn join_of_three_children_is_binarized() {
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let td = TreeDecomposition::rooted(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![None, Some(0), Some(0), Some(0)],
        )
        .unwrap();
        let nice = to_modified_nice(&td, &g).unwrap();
        let m = metrics(&nice);
        assert_eq!(m.join_count, 2);
        assert_eq!(m.tree_depth_h, m.max_forgets_on_path);
        assert_eq!(m.width, metrics(&td).width);
    }

    #[test]
    fn tampered_nodes_fail_the_check() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let nice = to_modified_nice(&TreeDecomposition::single_bag(2), &g).unwrap();
        let mut nodes = nice.nodes().to_vec();
        let leaf = nodes.iter().position(|n| n.kind == NodeKind::Leaf).unwrap();
        nodes[leaf].bag = vec![0];
        assert!(ModifiedNiceDecomposition::new(2, nice.edges().to_vec(), nodes, nice.root()).is_err());
    }
}
