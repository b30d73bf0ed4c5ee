//! Exact and modular linear algebra for integer relation matrices.

pub mod congruence;
pub mod modp;
pub mod rank;
pub mod snf;

pub use congruence::{mod_inverse, solve_mod};
pub use modp::{is_prime_u64, rank_primes, PrimeField};
pub use rank::{exact_nullity, exact_rank, modular_nullity, ModularNullity, PropagationPlan};
pub use snf::{lattice_basis, smith_normal_form, SmithForm};
