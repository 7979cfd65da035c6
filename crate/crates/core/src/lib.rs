//! Finite-level machinery for mod-ℓ cohomology growth in p-adic analytic towers.

pub mod arith;
pub mod betti;
pub mod catalog;
pub mod cohomology;
pub mod groups;
pub mod lefschetz;
pub mod linalg;
pub mod smith;
