//! Polynomial-space counting over tree decompositions.
//!
//! Perfect matchings, matching polynomials, set covers and `l`-packings are
//! counted by recursing over a modified nice tree decomposition in the zeta
//! transform domain ([`engine::evaluate`]). Space stays polynomial; time is
//! exponential in the largest union of bags along a root-to-leaf path, which
//! the balanced constructions in [`decomp`] keep small.
//!
//! ```
//! use ztdp::decomp::grid_balanced_td;
//! use ztdp::engine::count_perfect_matchings;
//! use ztdp::graphs::{grid_graph, GridSpec};
//!
//! let spec = GridSpec::new(vec![4, 4]).unwrap();
//! let td = grid_balanced_td(&spec);
//! let count = count_perfect_matchings(&grid_graph(&spec), Some(&td)).unwrap();
//! assert_eq!(count.to_string(), "36");
//! ```

pub mod algebra;
pub mod decomp;
pub mod engine;
pub mod graphs;
pub mod io;
pub mod oracle;
