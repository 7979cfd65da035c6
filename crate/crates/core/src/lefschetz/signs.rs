//! Signs of Euler characteristics of arithmetic groups read off from real
//! forms, and the sign-coherent sum of twisted Euler characteristics.

use serde::{Deserialize, Serialize};

use super::LefschetzError;

/// `2q = dim g′ + sign(B|g′)`, so `q` is the dimension of the noncompact
/// part of the Cartan decomposition of `g′`.
pub fn q_from_dim_sign(dim_derived: u32, sign: i64) -> Result<u32, LefschetzError> {
    let d = dim_derived as i64;
    let total = d + sign;
    if sign.abs() > d || total % 2 != 0 {
        return Err(LefschetzError::Parity {
            dim: dim_derived,
            sign,
        });
    }
    Ok((total / 2) as u32)
}

/// The sign of `χ(Γ_H)` for torsion-free arithmetic `Γ_H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EulerSign {
    Plus,
    Minus,
    /// `q` is odd, so `χ` vanishes.
    Zero,
}

impl EulerSign {
    pub fn value(self) -> i64 {
        match self {
            EulerSign::Plus => 1,
            EulerSign::Minus => -1,
            EulerSign::Zero => 0,
        }
    }

    /// Whether `chi` is compatible with this sign.
    pub fn admits(self, chi: i64) -> bool {
        match self {
            EulerSign::Zero => chi == 0,
            s => chi == 0 || chi.signum() == s.value(),
        }
    }
}

/// `(−1)^{q/2}` for even `q`.
pub fn euler_sign(q: u32) -> EulerSign {
    match (q % 2, (q / 2) % 2) {
        (1, _) => EulerSign::Zero,
        (_, 0) => EulerSign::Plus,
        _ => EulerSign::Minus,
    }
}

/// `L = Σ χ(Γ^{τ|c})` over the classes, rejecting any term with `δ·χ < 0`.
pub fn rohlfs_sum(chis: &[i64], delta: i64) -> Result<i64, LefschetzError> {
    if delta != 1 && delta != -1 {
        return Err(LefschetzError::InvalidDelta(delta));
    }
    if let Some((index, &chi)) = chis.iter().enumerate().find(|(_, &c)| delta * c < 0) {
        return Err(LefschetzError::SignIncoherent { index, chi, delta });
    }
    chis.iter()
        .try_fold(0i64, |acc, &c| acc.checked_add(c))
        .ok_or(LefschetzError::Overflow)
}

/// Signatures of forms that are isometric at every finite place agree mod 8.
pub fn mod8_signature_check(sign_a: i64, sign_b: i64) -> bool {
    (sign_a - sign_b).rem_euclid(8) == 0
}

/// Building blocks of a reductive group up to isogeny.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReductiveFactor {
    /// Semisimple with `H(R)` having discrete series.
    SemisimpleDs,
    /// `H(R)` compact.
    Compact,
    /// A `Q`-split torus of the given rank.
    SplitTorus { rank: u32 },
    /// Anything the sufficient conditions do not cover.
    Other { label: String },
}

/// `Some(true)` when every factor satisfies one of the sufficient
/// conditions for `χ ≠ 0`, which survive isogenies and products; `None`
/// when some factor is not covered and no conclusion follows.
pub fn has_non_vanishing(factors: &[ReductiveFactor]) -> Option<bool> {
    factors
        .iter()
        .all(|f| !matches!(f, ReductiveFactor::Other { .. }))
        .then_some(true)
}
