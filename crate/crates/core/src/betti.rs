//! Mod-ℓ Betti numbers and Euler characteristics of groups built from free,
//! free abelian and cyclic pieces, plus cohomology of `Z` with coefficients
//! in a finite `F_ℓ`-module.

use num::rational::Rational64;
use num::CheckedMul;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{is_prime, rank_mod_prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BettiError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Betti vector has infinite support; supply a degree cap")]
    InfiniteSupport,
    #[error("action matrix is singular mod {0}")]
    Singular(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error("Betti number overflow")]
    Overflow,
}

/// Groups whose mod-ℓ cohomology is known in closed form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDescriptor {
    Trivial,
    Free { rank: u32 },
    FreeAbelian { rank: u32 },
    FiniteCyclic { order: u64 },
    Product { factors: Vec<GroupDescriptor> },
}

impl GroupDescriptor {
    pub fn product(factors: Vec<GroupDescriptor>) -> Self {
        GroupDescriptor::Product { factors }
    }

    pub fn is_torsion_free(&self) -> bool {
        match self {
            GroupDescriptor::FiniteCyclic { order } => *order == 1,
            GroupDescriptor::Product { factors } => factors.iter().all(Self::is_torsion_free),
            _ => true,
        }
    }
}

/// `b_i = dim_{F_ℓ} H^i(Γ, F_ℓ)` encoded by its Poincaré series
/// `core(t) / (1 − t)^periodic`, so infinite support never needs truncating.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    ell: u64,
    core: Vec<u64>,
    periodic: u32,
}

fn binom(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

impl BettiVector {
    /// A finitely supported vector.
    pub fn finite(ell: u64, b: Vec<u64>) -> Self {
        BettiVector {
            ell,
            core: trim(if b.is_empty() { vec![0] } else { b }),
            periodic: 0,
        }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn is_finite(&self) -> bool {
        self.periodic == 0
    }

    /// Numerator coefficients of the Poincaré series.
    pub fn core(&self) -> &[u64] {
        &self.core
    }

    /// Exponent of `(1 − t)^{-1}` in the Poincaré series.
    pub fn periodic_factors(&self) -> u32 {
        self.periodic
    }

    /// `b_i`.
    pub fn degree(&self, i: usize) -> Result<u128, BettiError> {
        if self.periodic == 0 {
            return Ok(self.core.get(i).copied().unwrap_or(0) as u128);
        }
        let c = self.periodic as u64;
        let mut acc: u128 = 0;
        for (j, &cj) in self.core.iter().enumerate().take(i + 1) {
            let w = binom((i - j) as u64 + c - 1, c - 1).ok_or(BettiError::Overflow)?;
            acc = acc
                .checked_add(w.checked_mul(cj as u128).ok_or(BettiError::Overflow)?)
                .ok_or(BettiError::Overflow)?;
        }
        Ok(acc)
    }

    /// Last degree with `b_i ≠ 0`, for finite support.
    pub fn top_degree(&self) -> Option<usize> {
        if self.periodic > 0 {
            return None;
        }
        self.core.iter().rposition(|&b| b != 0)
    }

    /// `(b_0, …, b_max)`.
    pub fn prefix(&self, max: usize) -> Result<Vec<u128>, BettiError> {
        (0..=max).map(|i| self.degree(i)).collect()
    }

    /// Künneth over a field: the Poincaré series multiply.
    pub fn tensor(&self, other: &BettiVector) -> BettiVector {
        let mut core = vec![0u64; self.core.len() + other.core.len() - 1];
        for (i, &a) in self.core.iter().enumerate() {
            for (j, &b) in other.core.iter().enumerate() {
                core[i + j] += a * b;
            }
        }
        BettiVector {
            ell: self.ell,
            core: trim(core),
            periodic: self.periodic + other.periodic,
        }
    }
}

/// Closed-form mod-ℓ Betti numbers.
pub fn betti_mod_l(g: &GroupDescriptor, ell: u64) -> Result<BettiVector, BettiError> {
    if !is_prime(ell) {
        return Err(BettiError::NotPrime(ell));
    }
    Ok(betti_unchecked(g, ell))
}

fn betti_unchecked(g: &GroupDescriptor, ell: u64) -> BettiVector {
    match g {
        GroupDescriptor::Trivial => BettiVector::finite(ell, vec![1]),
        GroupDescriptor::Free { rank } => BettiVector::finite(ell, vec![1, *rank as u64]),
        GroupDescriptor::FreeAbelian { rank } => {
            let d = *rank as u64;
            BettiVector::finite(
                ell,
                (0..=d)
                    .map(|i| binom(d, i).expect("small rank") as u64)
                    .collect(),
            )
        }
        GroupDescriptor::FiniteCyclic { order } => {
            if order % ell == 0 {
                BettiVector {
                    ell,
                    core: vec![1],
                    periodic: 1,
                }
            } else {
                BettiVector::finite(ell, vec![1])
            }
        }
        GroupDescriptor::Product { factors } => factors
            .iter()
            .fold(BettiVector::finite(ell, vec![1]), |acc, f| {
                acc.tensor(&betti_unchecked(f, ell))
            }),
    }
}

/// `Σ_{i ≥ r} b_i`, or `Σ_{r ≤ i ≤ cap} b_i` when a cap is given.
pub fn tail_sum(v: &BettiVector, r: usize, cap: Option<usize>) -> Result<u128, BettiError> {
    let last = match (cap, v.top_degree()) {
        (Some(c), Some(t)) => c.min(t),
        (Some(c), None) => c,
        (None, Some(t)) => t,
        (None, None) if v.is_finite() => return Ok(0),
        (None, None) => return Err(BettiError::InfiniteSupport),
    };
    (r..=last).try_fold(0u128, |acc, i| {
        acc.checked_add(v.degree(i)?).ok_or(BettiError::Overflow)
    })
}

/// Euler characteristic of rational cohomology (so finite groups give 1).
pub fn euler_char(g: &GroupDescriptor) -> i64 {
    match g {
        GroupDescriptor::Trivial | GroupDescriptor::FiniteCyclic { .. } => 1,
        GroupDescriptor::Free { rank } => 1 - *rank as i64,
        GroupDescriptor::FreeAbelian { rank } => (*rank == 0) as i64,
        GroupDescriptor::Product { factors } => factors.iter().map(euler_char).product(),
    }
}

/// `χ(Γ') = [Γ : Γ'] · χ(Γ)`.
pub fn chi_finite_index(chi_base: Rational64, index: u64) -> Result<Rational64, BettiError> {
    if index == 0 {
        return Err(BettiError::ZeroIndex);
    }
    let idx = i64::try_from(index).map_err(|_| BettiError::Overflow)?;
    chi_base
        .checked_mul(&Rational64::from_integer(idx))
        .ok_or(BettiError::Overflow)
}

/// A finite-dimensional `F_ℓ[Z]`-module: the generator of `Z` acts by `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlModule {
    ell: u64,
    action: Vec<Vec<u64>>,
}

impl FlModule {
    pub fn new(ell: u64, action: Vec<Vec<i64>>) -> Result<Self, BettiError> {
        if !is_prime(ell) {
            return Err(BettiError::NotPrime(ell));
        }
        let d = action.len();
        if action.iter().any(|r| r.len() != d) {
            return Err(BettiError::DimensionMismatch(
                "action matrix must be square".into(),
            ));
        }
        if rank_mod_prime(&action, ell) != d {
            return Err(BettiError::Singular(ell));
        }
        let action = action
            .iter()
            .map(|r| r.iter().map(|&x| x.rem_euclid(ell as i64) as u64).collect())
            .collect();
        Ok(FlModule { ell, action })
    }

    /// Trivial action on `F_ℓ^d`.
    pub fn trivial(ell: u64, d: usize) -> Result<Self, BettiError> {
        Self::new(
            ell,
            (0..d)
                .map(|i| (0..d).map(|j| (i == j) as i64).collect())
                .collect(),
        )
    }

    /// The sum-zero submodule of `F_ℓ^n` under the cyclic shift `e_i ↦ e_{i+1}`,
    /// written in the basis `b_i = e_i − e_{i+1}`.
    pub fn cyclic_shift_sum_zero(ell: u64, n: usize) -> Result<Self, BettiError> {
        if n < 2 {
            return Err(BettiError::DimensionMismatch("need n ≥ 2".into()));
        }
        let d = n - 1;
        let shift = |v: &[i64]| -> Vec<i64> { (0..n).map(|i| v[(i + n - 1) % n]).collect() };
        // coordinates of a sum-zero vector: c_i = x_0 + … + x_i
        let coords = |x: &[i64]| -> Vec<i64> {
            let mut acc = 0;
            x.iter()
                .take(d)
                .map(|&v| {
                    acc += v;
                    acc
                })
                .collect()
        };
        let mut cols = Vec::with_capacity(d);
        for i in 0..d {
            let mut b = vec![0i64; n];
            b[i] = 1;
            b[i + 1] = -1;
            cols.push(coords(&shift(&b)));
        }
        let rows = (0..d)
            .map(|r| (0..d).map(|c| cols[c][r]).collect())
            .collect();
        Self::new(ell, rows)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn dim(&self) -> usize {
        self.action.len()
    }

    pub fn action(&self) -> &[Vec<u64>] {
        &self.action
    }

    fn t_minus_one_rank(&self) -> usize {
        let rows: Vec<Vec<i64>> = self
            .action
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, &x)| x as i64 - (i == j) as i64)
                    .collect()
            })
            .collect();
        rank_mod_prime(&rows, self.ell)
    }

    /// `(dim ker(T − 1), dim coker(T − 1))`.
    pub fn cohomology_of_z(&self) -> (usize, usize) {
        let r = self.t_minus_one_rank();
        (self.dim() - r, self.dim() - r)
    }

    /// `H^0` of the trivial group, which is the whole module.
    pub fn h0_trivial_group(&self) -> usize {
        self.dim()
    }
}

/// `H⁰(Z, M)` and `H¹(Z, M)` dimensions.
pub fn cohomology_of_z_with_module(m: &FlModule) -> (usize, usize) {
    m.cohomology_of_z()
}
