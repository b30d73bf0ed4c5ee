//! Random and explicit subsets of a group and their non-degenerate additive
//! quadruple structure.

mod incremental;
mod quadruples;
mod sample;

pub use incremental::IncrementalQuadruples;
pub use quadruples::{
    enumerate_quadruples, enumerate_quadruples_naive, isolated_elements, OrbitRow, PairSums,
    QuadrupleSet,
};
pub use sample::{sample_binomial, sample_fixed, Provenance, SubsetSample};
