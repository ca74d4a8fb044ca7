//! Exact ring arithmetic and subset-lattice transforms.

mod int;
mod ring;
mod setfn;

pub use int::Int;
pub use ring::{PolyValue, Ring, RingElement, RingValue};
pub use setfn::{
    canonical_relaxation, mobius, ranked_union_convolve, subset_convolve, union_product, zeta, Relaxation, SetFunction,
    MAX_GROUND_SET,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(String),
    #[error("ground set of size {0} exceeds the dense-table limit of {MAX_GROUND_SET}")]
    GroundSetTooLarge(usize),
    #[error("table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("ground sets differ: {0} vs {1}")]
    GroundSetMismatch(usize, usize),
    #[error("relaxation has {found} ranks, expected {expected}")]
    RankCount { expected: usize, found: usize },
}
