use serde::{Deserialize, Serialize};

use super::nice::{ModifiedNiceDecomposition, NodeKind};
use super::TreeDecomposition;

/// Read access shared by plain and modified nice decompositions.
pub trait RootedBags {
    fn node_count(&self) -> usize;
    fn root_node(&self) -> usize;
    fn bag_of(&self, x: usize) -> &[usize];
    fn children_of(&self, x: usize) -> &[usize];
    /// Whether `x` forgets a vertex (only meaningful for nice forms).
    fn forgets(&self, _x: usize) -> bool {
        false
    }
    fn is_join(&self, x: usize) -> bool {
        self.children_of(x).len() >= 2
    }
}

impl RootedBags for TreeDecomposition {
    fn node_count(&self) -> usize {
        self.len()
    }

    fn root_node(&self) -> usize {
        self.root()
    }

    fn bag_of(&self, x: usize) -> &[usize] {
        self.bag(x)
    }

    fn children_of(&self, x: usize) -> &[usize] {
        self.children(x)
    }
}

impl RootedBags for ModifiedNiceDecomposition {
    fn node_count(&self) -> usize {
        self.nodes().len()
    }

    fn root_node(&self) -> usize {
        self.root()
    }

    fn bag_of(&self, x: usize) -> &[usize] {
        &self.nodes()[x].bag
    }

    fn children_of(&self, x: usize) -> &[usize] {
        &self.nodes()[x].children
    }

    fn forgets(&self, x: usize) -> bool {
        matches!(self.nodes()[x].kind, NodeKind::Forget { .. })
    }

    fn is_join(&self, x: usize) -> bool {
        matches!(self.nodes()[x].kind, NodeKind::Join)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionMetrics {
    /// Largest bag size minus one (zero when every bag is empty).
    pub width: usize,
    pub max_bag_size: usize,
    /// Largest union of bags along a root-to-leaf path.
    pub tree_depth_h: usize,
    pub node_count: usize,
    pub join_count: usize,
    pub leaf_count: usize,
    /// Most forget nodes on one root-to-leaf path.
    pub max_forgets_on_path: usize,
    /// Most nodes on one root-to-leaf path.
    pub longest_path_nodes: usize,
}

/// Single traversal that tracks the union of bags on the current root path.
pub fn metrics<D: RootedBags + ?Sized>(td: &D) -> DecompositionMetrics {
    let mut counts: std::collections::HashMap<usize, usize> = Default::default();
    let mut union = 0usize;
    let mut forgets = 0usize;
    let mut depth = 0usize;
    let mut out = DecompositionMetrics {
        width: 0,
        max_bag_size: 0,
        tree_depth_h: 0,
        node_count: td.node_count(),
        join_count: 0,
        leaf_count: 0,
        max_forgets_on_path: 0,
        longest_path_nodes: 0,
    };

    enum Step {
        Enter(usize),
        Exit(usize),
    }
    let mut stack = vec![Step::Enter(td.root_node())];
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter(x) => {
                depth += 1;
                for &v in td.bag_of(x) {
                    let c = counts.entry(v).or_insert(0);
                    if *c == 0 {
                        union += 1;
                    }
                    *c += 1;
                }
                if td.forgets(x) {
                    forgets += 1;
                }
                out.max_bag_size = out.max_bag_size.max(td.bag_of(x).len());
                if td.is_join(x) {
                    out.join_count += 1;
                }
                let children = td.children_of(x);
                if children.is_empty() {
                    out.leaf_count += 1;
                    out.tree_depth_h = out.tree_depth_h.max(union);
                    out.max_forgets_on_path = out.max_forgets_on_path.max(forgets);
                    out.longest_path_nodes = out.longest_path_nodes.max(depth);
                }
                stack.push(Step::Exit(x));
                for &c in children.iter().rev() {
                    stack.push(Step::Enter(c));
                }
            }
            Step::Exit(x) => {
                depth -= 1;
                for &v in td.bag_of(x) {
                    let c = counts.get_mut(&v).expect("entered before");
                    *c -= 1;
                    if *c == 0 {
                        union -= 1;
                    }
                }
                if td.forgets(x) {
                    forgets -= 1;
                }
            }
        }
    }
    out.width = out.max_bag_size.saturating_sub(1);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bag_metrics() {
        let m = metrics(&TreeDecomposition::single_bag(5));
        assert_eq!((m.width, m.tree_depth_h, m.node_count, m.leaf_count), (4, 5, 1, 1));
    }

    #[test]
    fn path_union_counts_distinct_vertices() {
        let td = TreeDecomposition::rooted(
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![1, 4]],
            vec![None, Some(0), Some(1), Some(0)],
        )
        .unwrap();
        let m = metrics(&td);
        assert_eq!(m.tree_depth_h, 4);
        assert_eq!(m.width, 1);
        assert_eq!(m.join_count, 1);
        assert_eq!(m.leaf_count, 2);
        assert_eq!(m.longest_path_nodes, 3);
    }
}
