//! Structure-constant Lie algebras, Killing forms and exact signatures, and
//! the sign bookkeeping for Lefschetz numbers of finite-order automorphisms.

mod algebra;
mod form;
pub mod qmat;
mod signs;

use thiserror::Error;

pub use algebra::{
    derived_center_split, fixed_subalgebra, killing_form, sl, so, sp, su, symplectic_gram,
    AlgebraAuto, LieAlgebraSC, MatrixLieAlgebra, ReductiveSplit,
};
pub use form::{signature, QuadForm, SignatureResult};
pub use signs::{
    euler_sign, has_non_vanishing, mod8_signature_check, q_from_dim_sign, rohlfs_sum, EulerSign,
    ReductiveFactor,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("subspace is not closed under the bracket")]
    NotClosed,
    #[error("not reductive: {0}")]
    NotReductive(String),
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("dim {dim} and signature {sign} are incompatible")]
    Parity { dim: u32, sign: i64 },
    #[error("class {index} has χ = {chi}, against the sign δ = {delta}")]
    SignIncoherent { index: usize, chi: i64, delta: i64 },
    #[error("declared sign must be ±1, got {0}")]
    InvalidDelta(i64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("integer overflow")]
    Overflow,
}
