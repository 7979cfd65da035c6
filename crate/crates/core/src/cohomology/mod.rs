//! First cohomology of a cyclic group `Θ`: cocycles, the pointed set
//! `H¹(Θ, G)` for finite `G`, the abelian group `H¹(Θ, Z^d)` for lattices,
//! twisted fixed subgroups, restriction kernels, and the counting identity
//! relating them along a tower.

mod cocycle;
mod counting;
mod lattice;

pub use cocycle::{
    enumerate_cocycles, h1_finite, norm, restriction_kernel_finite, twisted_fixed_subgroup,
    Cocycle, H1Classes,
};
pub use counting::{
    verify_counting_finite, verify_counting_lattice, CountingReport, LATTICE_ENUMERATION_LIMIT,
};
pub use lattice::{
    h1_lattice, h1_lattice_brute_force, representatives_reduce_injectively,
    restriction_kernel_lattice, BruteForceH1, LatticeAction,
};

use thiserror::Error;

use crate::groups::GroupError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum H1Error {
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("action matrix does not satisfy A^{order} = I")]
    ActionOrder { order: u64 },
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
