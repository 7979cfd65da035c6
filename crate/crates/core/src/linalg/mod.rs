//! Exact linear algebra over `Z/p^k` and over the integers.
//!
//! Everything here is integer arithmetic. Residues are kept in the canonical
//! range `[0, p^k)` so that matrices can be hashed and ordered as group
//! elements.

mod abelian;
mod fp;
mod int;
mod snf;
mod zpk;

pub use abelian::{ker_mod_im, KerModIm};
pub use fp::{nullspace_mod_prime, rank_mod_prime};
pub use int::IntMat;
pub use snf::{smith_normal_form, SnfResult};
pub use zpk::{MatZpk, PrimePower};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime power exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus {p}^{k} exceeds the supported range (< 2^32)")]
    ModulusTooLarge { p: u64, k: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live over different moduli")]
    ModulusMismatch,
    #[error("determinant is not a unit modulo {0}")]
    NotInvertible(u64),
    #[error("cannot reduce from level {from} to higher level {to}")]
    LevelTooHigh { from: u32, to: u32 },
    #[error("image of B is not contained in the kernel of N")]
    ContainmentViolated,
    #[error("vector is not in the kernel of N")]
    NotInKernel,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

/// Trial-division primality test; inputs here are small moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `Some(k)` when `n = p^k` with `k >= 1`.
pub fn prime_power_exponent(n: u64, p: u64) -> Option<u32> {
    if n < p || p < 2 {
        return None;
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some(k)
}

/// If `n > 1` is a prime power, returns its prime.
pub fn prime_of_prime_power(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    prime_power_exponent(n, p).map(|_| p)
}
