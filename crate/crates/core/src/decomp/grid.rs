//! Grid separators and the two grid decompositions.

use super::balanced::{balanced_td, BfsLayerSeparator, Separation, SeparatorOracle};
use super::{DecompError, TreeDecomposition};
use crate::graphs::{grid_graph, Graph, GridSpec};

/// Inclusive coordinate box inside a grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRegion {
    pub low: Vec<usize>,
    pub high: Vec<usize>,
}

impl GridRegion {
    pub fn whole(spec: &GridSpec) -> GridRegion {
        GridRegion { low: vec![0; spec.dims()], high: spec.lengths().iter().map(|&l| l - 1).collect() }
    }

    pub fn len(&self, dim: usize) -> usize {
        self.high[dim] - self.low[dim] + 1
    }

    pub fn volume(&self) -> usize {
        (0..self.low.len()).map(|i| self.len(i)).product()
    }

    /// Smallest box containing the given vertices (which must be nonempty).
    pub fn bounding(spec: &GridSpec, vertices: &[usize]) -> GridRegion {
        let mut low = vec![usize::MAX; spec.dims()];
        let mut high = vec![0; spec.dims()];
        for &v in vertices {
            for (i, c) in spec.coords(v).into_iter().enumerate() {
                low[i] = low[i].min(c);
                high[i] = high[i].max(c);
            }
        }
        GridRegion { low, high }
    }

    /// Vertex ids inside the box, ascending.
    pub fn vertices(&self, spec: &GridSpec) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.volume());
        let mut coords = self.low.clone();
        loop {
            out.push(spec.vertex_id(&coords));
            let mut i = coords.len();
            loop {
                if i == 0 {
                    out.sort_unstable();
                    return out;
                }
                i -= 1;
                if coords[i] < self.high[i] {
                    coords[i] += 1;
                    break;
                }
                coords[i] = self.low[i];
            }
        }
    }
}

/// Cuts the longest dimension of `region` (lowest index on ties) with a slab of
/// thickness one at `low + (len - 1) / 2`; `a` is the lower side, `b` the upper.
pub fn grid_separator(spec: &GridSpec, region: &GridRegion) -> Result<Separation, DecompError> {
    let dims = region.low.len();
    let dim = (0..dims)
        .fold(None, |best: Option<usize>, i| match best {
            Some(b) if region.len(b) >= region.len(i) => Some(b),
            _ => Some(i),
        })
        .expect("at least one dimension");
    if region.len(dim) < 2 {
        return Err(DecompError::NoCut);
    }
    let cut = region.low[dim] + (region.len(dim) - 1) / 2;
    let mut sep = Separation::default();
    for v in region.vertices(spec) {
        let c = spec.coords(v)[dim];
        match c.cmp(&cut) {
            std::cmp::Ordering::Less => sep.a.push(v),
            std::cmp::Ordering::Equal => sep.separator.push(v),
            std::cmp::Ordering::Greater => sep.b.push(v),
        }
    }
    Ok(sep)
}

/// Oracle that applies [`grid_separator`] to the bounding box of each part.
/// Parts that do not fill their box (never produced by the grid recursion)
/// fall back to the breadth-first layer separator.
#[derive(Clone, Debug)]
pub struct GridSeparator {
    spec: GridSpec,
}

impl GridSeparator {
    pub fn new(spec: &GridSpec) -> GridSeparator {
        GridSeparator { spec: spec.clone() }
    }
}

impl SeparatorOracle for GridSeparator {
    fn separate(&mut self, g: &Graph, part: &[usize]) -> Result<Separation, DecompError> {
        let region = GridRegion::bounding(&self.spec, part);
        if region.volume() == part.len() {
            grid_separator(&self.spec, &region)
        } else {
            BfsLayerSeparator.separate(g, part)
        }
    }
}

/// The balanced decomposition of a grid: recursive halving of the longest side.
pub fn grid_balanced_td(spec: &GridSpec) -> TreeDecomposition {
    let g = grid_graph(spec);
    balanced_td(&g, &mut GridSeparator::new(spec)).expect("grid slabs are separators")
}

/// Path decomposition sweeping layers along the first dimension: the next
/// layer's vertices are added one at a time, each followed by forgetting its
/// neighbour in the current layer. Largest bag: cross-section plus one.
pub fn grid_path_decomposition(spec: &GridSpec) -> TreeDecomposition {
    let layers = spec.lengths()[0];
    let cross = spec.volume() / layers;
    let mut current: Vec<usize> = (0..cross).collect();
    let mut bags = Vec::new();
    if layers == 1 {
        bags.push(current.clone());
    }
    for j in 0..layers.saturating_sub(1) {
        for k in 0..cross {
            let old = j * cross + k;
            let new = (j + 1) * cross + k;
            current.push(new);
            let mut bag = current.clone();
            bag.sort_unstable();
            bags.push(bag);
            current.retain(|&v| v != old);
        }
    }
    let parent = (0..bags.len()).map(|i| i.checked_sub(1)).collect();
    TreeDecomposition::rooted(bags, parent).expect("path shape")
}
