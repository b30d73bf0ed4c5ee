//! Computational tools for Freiman homomorphisms on subsets of finite Abelian
//! groups: additive quadruples, homomorphism spaces, additive connectivity,
//! fuzzy extraction of affine maps, and random-set experiments.

pub mod connectivity;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod fuzzy;
pub mod group;
pub mod hom;
pub mod linalg;
pub mod rng;
pub mod sets;

pub use error::{Error, Result};
pub use group::{Character, Element, GroupSpec};
