//! Recursive balanced-separator decompositions.

use std::collections::VecDeque;

use super::{DecompError, TreeDecomposition};
use crate::graphs::Graph;

/// A split of a vertex set into a separator and two sides with no edge between them.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Separation {
    pub separator: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

pub trait SeparatorOracle {
    /// Splits `part` (sorted, at least three vertices) of `g`.
    fn separate(&mut self, g: &Graph, part: &[usize]) -> Result<Separation, DecompError>;
}

/// Puts the whole part into the separator, yielding a single bag.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialSeparator;

impl SeparatorOracle for TrivialSeparator {
    fn separate(&mut self, _g: &Graph, part: &[usize]) -> Result<Separation, DecompError> {
        Ok(Separation { separator: part.to_vec(), a: vec![], b: vec![] })
    }
}

/// Generic oracle for arbitrary graphs.
///
/// A disconnected part is split between its components with an empty separator.
/// A connected part is cut at the breadth-first layer (from a pseudo-peripheral
/// vertex) that best balances the vertices before and after it.
#[derive(Clone, Copy, Debug, Default)]
pub struct BfsLayerSeparator;

impl SeparatorOracle for BfsLayerSeparator {
    fn separate(&mut self, g: &Graph, part: &[usize]) -> Result<Separation, DecompError> {
        let adj = g.adjacency();
        let mut inside = vec![false; g.n()];
        for &v in part {
            inside[v] = true;
        }
        let comps = components(&adj, &inside, part);
        if comps.len() > 1 {
            let mut sides = [Vec::new(), Vec::new()];
            let mut comps = comps;
            comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
            for comp in comps {
                let side = if sides[0].len() <= sides[1].len() { 0 } else { 1 };
                sides[side].extend(comp);
            }
            let [mut a, mut b] = sides;
            a.sort_unstable();
            b.sort_unstable();
            return Ok(Separation { separator: vec![], a, b });
        }

        let (_, far) = bfs_layers(&adj, &inside, part[0]);
        let (layers, _) = bfs_layers(&adj, &inside, far);
        let total = part.len();
        let mut before = 0;
        let mut best: Option<(usize, usize)> = None;
        for (i, layer) in layers.iter().enumerate() {
            let after = total - before - layer.len();
            let score = before.max(after);
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, i));
            }
            before += layer.len();
        }
        let (_, cut) = best.expect("nonempty part");
        let collect = |range: std::ops::Range<usize>| {
            let mut out: Vec<usize> = layers[range].iter().flatten().copied().collect();
            out.sort_unstable();
            out
        };
        Ok(Separation { separator: collect(cut..cut + 1), a: collect(0..cut), b: collect(cut + 1..layers.len()) })
    }
}

fn components(adj: &[Vec<usize>], inside: &[bool], part: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; inside.len()];
    let mut out = Vec::new();
    for &s in part {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in &adj[v] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Layers of a BFS restricted to `inside`, plus the lowest-numbered vertex of the last layer.
fn bfs_layers(adj: &[Vec<usize>], inside: &[bool], start: usize) -> (Vec<Vec<usize>>, usize) {
    let mut dist = vec![usize::MAX; inside.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut layers: Vec<Vec<usize>> = Vec::new();
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        if layers.len() <= d {
            layers.push(Vec::new());
        }
        layers[d].push(v);
        for &w in &adj[v] {
            if inside[w] && dist[w] == usize::MAX {
                dist[w] = d + 1;
                queue.push_back(w);
            }
        }
    }
    let far = *layers.last().and_then(|l| l.iter().min()).expect("start is reached");
    (layers, far)
}

/// Checks that the oracle returned a genuine, progressing separation of `part`.
fn check_separation(g: &Graph, part: &[usize], sep: &Separation) -> Result<(), DecompError> {
    let mut mine = sep.separator.clone();
    mine.extend(&sep.a);
    mine.extend(&sep.b);
    mine.sort_unstable();
    if mine != part {
        return Err(DecompError::NotAPartition(format!(
            "separator and sides hold {} vertices for a part of {}",
            mine.len(),
            part.len()
        )));
    }
    let mut side = vec![0u8; g.n()];
    for &v in &sep.a {
        side[v] = 1;
    }
    for &v in &sep.b {
        side[v] = 2;
    }
    for &[u, v] in g.edges() {
        if side[u] | side[v] == 3 {
            return Err(DecompError::NotASeparator(u, v));
        }
    }
    if sep.separator.is_empty() && (sep.a.is_empty() || sep.b.is_empty()) {
        return Err(DecompError::NoProgress(part.len()));
    }
    Ok(())
}

/// Builds a decomposition by recursive separation.
///
/// Each node owns a separator `S` of its part; its bag is `S` plus the ancestor
/// vertices adjacent to the part. A part of at most two vertices becomes a leaf
/// bag holding the part and its inherited vertices.
pub fn balanced_td<O: SeparatorOracle + ?Sized>(g: &Graph, oracle: &mut O) -> Result<TreeDecomposition, DecompError> {
    let adj = g.adjacency();
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    let all: Vec<usize> = (0..g.n()).collect();
    // (part, inherited, parent node)
    let mut stack = vec![(all, Vec::<usize>::new(), None)];
    let mut mark = vec![false; g.n()];
    while let Some((part, inherited, up)) = stack.pop() {
        let node = bags.len();
        if part.len() <= 2 {
            let mut bag = part;
            bag.extend(&inherited);
            bag.sort_unstable();
            bags.push(bag);
            parent.push(up);
            continue;
        }
        let sep = oracle.separate(g, &part)?;
        check_separation(g, &part, &sep)?;
        let mut bag = sep.separator.clone();
        bag.extend(&inherited);
        bag.sort_unstable();
        for side in [sep.b, sep.a] {
            if side.is_empty() {
                continue;
            }
            for &v in &side {
                for &w in &adj[v] {
                    mark[w] = true;
                }
            }
            let pass: Vec<usize> = bag.iter().copied().filter(|&w| mark[w]).collect();
            for &v in &side {
                for &w in &adj[v] {
                    mark[w] = false;
                }
            }
            stack.push((side, pass, Some(node)));
        }
        bags.push(bag);
        parent.push(up);
    }
    if bags.is_empty() {
        return Ok(TreeDecomposition::single_bag(0));
    }
    TreeDecomposition::rooted(bags, parent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{metrics, validate};

    struct Scripted(Vec<Separation>);

    impl SeparatorOracle for Scripted {
        fn separate(&mut self, _g: &Graph, _part: &[usize]) -> Result<Separation, DecompError> {
            Ok(self.0.remove(0))
        }
    }

    #[test]
    fn single_vertex_one_bag() {
        let g = Graph::new(1, &[]).unwrap();
        let td = balanced_td(&g, &mut BfsLayerSeparator).unwrap();
        assert_eq!(td.bags(), &[vec![0]]);
    }

    #[test]
    fn path_with_midpoint_separator() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut oracle = Scripted(vec![Separation { separator: vec![1], a: vec![0], b: vec![2, 3] }]);
        let td = balanced_td(&g, &mut oracle).unwrap();
        assert!(validate(&g, &td).is_valid());
        assert_eq!(td.bag(td.root()), &[1]);
    }

    #[test]
    fn trivial_oracle_gives_single_bag() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4), (0, 4)]).unwrap();
        let td = balanced_td(&g, &mut TrivialSeparator).unwrap();
        assert_eq!(td.len(), 1);
        assert_eq!(metrics(&td).width, 4);
    }

    #[test]
    fn crossing_edge_is_rejected_with_witness() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let mut oracle = Scripted(vec![Separation { separator: vec![], a: vec![0], b: vec![1, 2] }]);
        assert_eq!(balanced_td(&g, &mut oracle), Err(DecompError::NotASeparator(0, 1)));
    }

    #[test]
    fn non_partition_is_rejected() {
        let g = Graph::new(3, &[]).unwrap();
        let mut oracle = Scripted(vec![Separation { separator: vec![0], a: vec![1], b: vec![] }]);
        assert!(matches!(balanced_td(&g, &mut oracle), Err(DecompError::NotAPartition(_))));
    }

    #[test]
    fn bfs_oracle_on_cycle_is_valid() {
        let edges: Vec<(usize, usize)> = (0..10).map(|i| (i, (i + 1) % 10)).collect();
        let g = Graph::new(10, &edges).unwrap();
        let td = balanced_td(&g, &mut BfsLayerSeparator).unwrap();
        assert!(validate(&g, &td).is_valid());
        assert!(metrics(&td).width <= 4);
    }

    #[test]
    fn bfs_oracle_on_disconnected_graph() {
        let g = Graph::new(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        let td = balanced_td(&g, &mut BfsLayerSeparator).unwrap();
        assert!(validate(&g, &td).is_valid());
        assert_eq!(metrics(&td).width, 1);
    }
}
