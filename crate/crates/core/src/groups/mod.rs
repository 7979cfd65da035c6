//! Finite groups materialized by generator closure: subgroups, quotients,
//! Frattini subgroups and lower p-series, congruence kernels, and cyclic
//! automorphism actions.

mod action;
mod congruence;
mod group;
mod hom;
mod rule;
mod series;

pub use action::{fixed_subgroup, ThetaAction};
pub use congruence::{
    congruence_kernel, congruence_kernel_generators, congruence_kernel_order, symplectic_form,
    ClassicalFamily,
};
pub use group::{default_cap, FiniteGroup, CAP_ENV_VAR, DEFAULT_ELEMENT_CAP};
pub use hom::{quotient, GroupHom};
pub use rule::{AbelianRule, GroupRule, MatrixRule, QuotientRule};
pub use series::{frattini, lower_p_series, p_group_prime, SeriesData};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("closure exceeded the element cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("invalid group element: {0}")]
    InvalidElement(String),
    #[error("group of order {order} is not a p-group")]
    NotPGroup { order: u64 },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("action does not stabilize the group")]
    ActionDoesNotStabilize,
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("level {level} is outside 1..={k}")]
    InvalidLevel { level: u32, k: u32 },
    #[error("series check failed: {0}")]
    SeriesViolation(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
