//! Smith–Floyd and Adem bookkeeping on towers whose cohomology is
//! computable: the fixed-point side split over `H¹(Θ, Γ_n)`, the chain of
//! inequalities behind the growth bound, and a log-log fit of the growth.

use num::rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{theorem1_exponent, ArithError};
use crate::betti::{betti_mod_l, tail_sum, BettiError, GroupDescriptor};
use crate::cohomology::{
    h1_finite, h1_lattice, h1_lattice_brute_force, restriction_kernel_finite,
    restriction_kernel_lattice, twisted_fixed_subgroup, H1Error, LatticeAction,
};
use crate::groups::{
    fixed_subgroup, p_group_prime, FiniteGroup, GroupError, GroupRule, ThetaAction,
};
use crate::linalg::{is_prime, prime_of_prime_power};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmithError {
    #[error("level {level}: no descriptor for {what}")]
    MissingDescriptor { level: u32, what: String },
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("no level {0}")]
    NoSuchLevel(u32),
    #[error(transparent)]
    Betti(#[from] BettiError),
    #[error(transparent)]
    H1(#[from] H1Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Everything the inequalities need about one level `Γ_n` of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelData {
    pub level: u32,
    /// `[Γ_1 : Γ_n]`
    pub index: u128,
    /// Descriptor of `Γ_n`; without it only the lower bound is checked.
    #[serde(default)]
    pub gamma: Option<GroupDescriptor>,
    /// One entry per class of `H¹(Θ, Γ_n)`, trivial class first: the
    /// descriptor of the twisted fixed group.
    pub classes: Vec<Option<GroupDescriptor>>,
    /// `|ker(H¹(Θ, Γ_n) → H¹(Θ, Γ_1))|`
    pub kernel_size: u64,
}

/// Exponent data `d = (dim G^Θ − λ)/dim G` and `α` for the prediction `dα`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthMeta {
    pub dim_g: u32,
    pub dim_fixed: u32,
    pub lambda: u32,
    /// `α` as `[numerator, denominator]`.
    pub alpha: (i64, i64),
}

impl GrowthMeta {
    pub fn alpha(&self) -> Result<Rational64, SmithError> {
        if self.alpha.1 == 0 {
            return Err(SmithError::InvalidScenario("α has zero denominator".into()));
        }
        Ok(Rational64::new(self.alpha.0, self.alpha.1))
    }

    pub fn predicted(&self) -> Result<Rational64, SmithError> {
        Ok(theorem1_exponent(
            self.dim_fixed,
            self.lambda,
            self.dim_g,
            self.alpha()?,
        )?)
    }
}

/// A tower `Γ_1 ⊇ Γ_2 ⊇ …` with a `Θ`-action, reduced to level data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub label: String,
    pub p: u64,
    pub ell: u64,
    pub theta_order: u64,
    pub levels: Vec<LevelData>,
    #[serde(default)]
    pub meta: Option<GrowthMeta>,
    /// Degree cap for descriptors with infinite mod-`ℓ` support.
    #[serde(default)]
    pub degree_cap: Option<usize>,
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

impl Scenario {
    /// Checks the primes, that `Θ` is an `ℓ`-group, that indices strictly
    /// increase by powers of `p`, and that each level lists its classes.
    pub fn validate(&self) -> Result<(), SmithError> {
        if !is_prime(self.p) || !is_prime(self.ell) {
            return Err(SmithError::InvalidScenario(format!(
                "p = {} and ℓ = {} must be prime",
                self.p, self.ell
            )));
        }
        if self.p == self.ell {
            return Err(SmithError::InvalidScenario(format!(
                "p and ℓ coincide ({})",
                self.p
            )));
        }
        if !is_power_of(self.theta_order, self.ell) {
            return Err(SmithError::InvalidScenario(format!(
                "|Θ| = {} is not a power of ℓ = {}",
                self.theta_order, self.ell
            )));
        }
        for (i, lv) in self.levels.iter().enumerate() {
            if lv.level != i as u32 + 1 {
                return Err(SmithError::InvalidTower(format!(
                    "levels must be numbered 1, 2, …; found {} at position {i}",
                    lv.level
                )));
            }
            if lv.classes.is_empty() {
                return Err(SmithError::InvalidTower(format!(
                    "level {} lists no H¹ classes",
                    lv.level
                )));
            }
            if lv.kernel_size == 0 || lv.kernel_size as usize > lv.classes.len() {
                return Err(SmithError::InvalidTower(format!(
                    "level {}: kernel size {} out of range",
                    lv.level, lv.kernel_size
                )));
            }
            if !u64::try_from(lv.index).is_ok_and(|i| is_power_of(i, self.p)) {
                return Err(SmithError::InvalidTower(format!(
                    "level {}: index {} is not a power of p",
                    lv.level, lv.index
                )));
            }
        }
        if let Some(first) = self.levels.first() {
            if first.index != 1 {
                return Err(SmithError::InvalidTower("level 1 must have index 1".into()));
            }
        }
        if self.levels.windows(2).any(|w| w[1].index <= w[0].index) {
            return Err(SmithError::InvalidTower(
                "indices must strictly increase".into(),
            ));
        }
        Ok(())
    }

    pub fn level(&self, n: u32) -> Result<&LevelData, SmithError> {
        self.levels
            .iter()
            .find(|l| l.level == n)
            .ok_or(SmithError::NoSuchLevel(n))
    }

    fn tail(&self, g: &GroupDescriptor, r: usize) -> Result<u128, SmithError> {
        Ok(tail_sum(&betti_mod_l(g, self.ell)?, r, self.degree_cap)?)
    }
}

/// `Σ_{[c]} Σ_{i ≥ r} dim H^i(Γ_n^{Θ|c}, F_ℓ)`.
pub fn adem_rhs(scenario: &Scenario, n: u32, r: usize) -> Result<u128, SmithError> {
    let lv = scenario.level(n)?;
    lv.classes
        .iter()
        .enumerate()
        .try_fold(0u128, |acc, (i, d)| {
            let d = d.as_ref().ok_or_else(|| SmithError::MissingDescriptor {
                level: n,
                what: format!("twisted fixed group of class {i}"),
            })?;
            Ok(acc + scenario.tail(d, r)?)
        })
}

/// Both sides of the fixed-point inequality at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithFloydCheck {
    pub level: u32,
    pub degree: usize,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
}

/// `Σ_{i ≥ r} dim H^i(Γ_n) ≥ adem_rhs`.
pub fn smith_floyd_check(
    scenario: &Scenario,
    n: u32,
    r: usize,
) -> Result<SmithFloydCheck, SmithError> {
    let lv = scenario.level(n)?;
    let g = lv
        .gamma
        .as_ref()
        .ok_or_else(|| SmithError::MissingDescriptor {
            level: n,
            what: "Γ_n".into(),
        })?;
    let lhs = scenario.tail(g, r)?;
    let rhs = adem_rhs(scenario, n, r)?;
    Ok(SmithFloydCheck {
        level: n,
        degree: r,
        lhs,
        rhs,
        holds: lhs >= rhs,
    })
}

/// `tail(Γ_n) ≥ adem_rhs ≥ |ker h_n| · tail(Γ_n^Θ)`; the first term is
/// absent in lower-bound-only mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub level: u32,
    pub degree: usize,
    pub tail: Option<u128>,
    pub adem: u128,
    pub lower: u128,
    pub holds: bool,
}

pub fn chain_check(scenario: &Scenario, n: u32, r: usize) -> Result<ChainCheck, SmithError> {
    let lv = scenario.level(n)?;
    let adem = adem_rhs(scenario, n, r)?;
    let fixed = lv.classes[0]
        .as_ref()
        .ok_or_else(|| SmithError::MissingDescriptor {
            level: n,
            what: "Γ_n^Θ".into(),
        })?;
    let lower = lv.kernel_size as u128 * scenario.tail(fixed, r)?;
    let tail = lv.gamma.as_ref().map(|g| scenario.tail(g, r)).transpose()?;
    let holds = adem >= lower && tail.is_none_or(|t| t >= adem);
    Ok(ChainCheck {
        level: n,
        degree: r,
        tail,
        adem,
        lower,
        holds,
    })
}

/// Level data for `Γ_n = s_n Z^d` with the lattice action; by default
/// `s_n = p^{n−1}`.
///
/// Multiplication by `s_n` is a `Θ`-isomorphism `Z^d → Γ_n`, so every level
/// has the classes of `H¹(Θ, Z^d)`, and every twisted fixed group is the
/// fixed lattice `Γ_n^Θ ≅ Z^f` because twisting an abelian action by a
/// cocycle does not change it.
pub fn lattice_scenario(
    label: &str,
    action: &LatticeAction,
    p: u64,
    ell: u64,
    scales: &[u64],
) -> Result<Scenario, SmithError> {
    let Some(&s1) = scales.first() else {
        return Err(SmithError::InvalidTower("no levels".into()));
    };
    for w in scales.windows(2) {
        if w[0] == 0 || w[1] % w[0] != 0 || w[1] / w[0] != p {
            return Err(SmithError::InvalidTower(format!(
                "Γ_n/Γ_(n+1) = (Z/{})^d is not elementary abelian of exponent p = {p}",
                if w[0] == 0 { 0 } else { w[1] / w[0] }
            )));
        }
    }
    if s1 == 0 {
        return Err(SmithError::InvalidTower("scale must be positive".into()));
    }
    let d = action.dim() as u32;
    let f = action.fixed_rank()? as u32;
    let h1 = h1_lattice(action)?;
    let classes = h1
        .order()
        .ok_or_else(|| SmithError::InvalidScenario("H¹ is infinite".into()))?;
    let levels = scales
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let ratio = s / s1;
            let kernel = restriction_kernel_lattice(action, ratio)?;
            let index = (ratio as u128)
                .checked_pow(d)
                .ok_or(SmithError::InvalidScenario("index overflow".into()))?;
            Ok(LevelData {
                level: i as u32 + 1,
                index,
                gamma: Some(GroupDescriptor::FreeAbelian { rank: d }),
                classes: vec![Some(GroupDescriptor::FreeAbelian { rank: f }); classes as usize],
                kernel_size: kernel.len() as u64,
            })
        })
        .collect::<Result<Vec<_>, SmithError>>()?;
    let sc = Scenario {
        label: label.into(),
        p,
        ell,
        theta_order: action.order(),
        levels,
        meta: Some(GrowthMeta {
            dim_g: d.max(1),
            dim_fixed: f,
            lambda: f,
            alpha: (1, 1),
        }),
        degree_cap: None,
    };
    sc.validate()?;
    Ok(sc)
}

/// The standard tower `s_n = p^{n−1}`, `n = 1..=depth`.
pub fn lattice_scales(p: u64, depth: u32) -> Vec<u64> {
    (0..depth).map(|i| p.pow(i)).collect()
}

/// The Adem sum for a lattice tower from enumeration alone: the class count
/// of `H¹(Θ, Z^d)` by fixed-point counting and the fixed rank mod an
/// auxiliary prime.
pub fn adem_rhs_lattice_brute_force(
    action: &LatticeAction,
    ell: u64,
    r: usize,
) -> Result<u128, SmithError> {
    let bf = h1_lattice_brute_force(action)?;
    let b = betti_mod_l(
        &GroupDescriptor::FreeAbelian {
            rank: bf.fixed_rank,
        },
        ell,
    )?;
    Ok(bf.order * tail_sum(&b, r, None)?)
}

/// Level data for a tower of finite `p`-groups `Γ_1 ⊇ Γ_2 ⊇ …`.
///
/// Checks that every term is `Θ`-stable and normal in `Γ_1` and that
/// `Γ_n/Γ_{n+1}` is elementary abelian. With `ℓ ≠ p` a finite `p`-group
/// has the mod-`ℓ` cohomology of a point, so every descriptor is trivial.
/// Kernel classes are checked to have twisted fixed groups of the same
/// order as `Γ_n^Θ`.
pub fn finite_scenario<R: GroupRule + 'static>(
    label: &str,
    tower: &[FiniteGroup<R>],
    action: &ThetaAction<R>,
    ell: u64,
) -> Result<Scenario, SmithError> {
    let Some(top) = tower.first() else {
        return Err(SmithError::InvalidTower("no levels".into()));
    };
    let p = match p_group_prime(top)? {
        Some(p) => p,
        None => {
            // The trivial group is a p-group for any p; pick the least prime ≠ ℓ.
            if ell == 2 {
                3
            } else {
                2
            }
        }
    };
    validate_finite_tower(tower, p)?;
    for g in tower {
        action.validate_on(g)?;
    }
    let levels = tower
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let h1 = h1_finite(g, action)?;
            let untwisted = fixed_subgroup(g, action)?;
            let kernel = restriction_kernel_finite(g, top, action)?;
            for &k in &kernel {
                let tw = twisted_fixed_subgroup(g, action, &h1.representatives()[k])?;
                if tw.order() != untwisted.order() {
                    return Err(SmithError::InvalidTower(format!(
                        "level {}: kernel class {k} has twisted fixed group of order {} ≠ {}",
                        i + 1,
                        tw.order(),
                        untwisted.order()
                    )));
                }
            }
            Ok(LevelData {
                level: i as u32 + 1,
                index: (top.order() / g.order()) as u128,
                gamma: Some(GroupDescriptor::Trivial),
                classes: vec![Some(GroupDescriptor::Trivial); h1.len()],
                kernel_size: kernel.len() as u64,
            })
        })
        .collect::<Result<Vec<_>, SmithError>>()?;
    let sc = Scenario {
        label: label.into(),
        p,
        ell,
        theta_order: action.order(),
        levels,
        meta: None,
        degree_cap: None,
    };
    sc.validate()?;
    Ok(sc)
}

/// Nested, normal in `Γ_1`, strictly decreasing, with elementary abelian
/// `p`-quotients.
pub fn validate_finite_tower<R: GroupRule>(
    tower: &[FiniteGroup<R>],
    p: u64,
) -> Result<(), SmithError> {
    let Some(top) = tower.first() else {
        return Err(SmithError::InvalidTower("no levels".into()));
    };
    for (i, w) in tower.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let n = i + 1;
        if !b.is_subgroup_of(a) {
            return Err(SmithError::InvalidTower(format!(
                "Γ_{} is not contained in Γ_{n}",
                n + 1
            )));
        }
        if b.order() == a.order() {
            return Err(SmithError::InvalidTower(format!("Γ_{} = Γ_{n}", n + 1)));
        }
        if !b.is_normal_in(top) {
            return Err(SmithError::InvalidTower(format!(
                "Γ_{} is not normal in Γ_1",
                n + 1
            )));
        }
        let gens = a.generators();
        let r = a.rule();
        let abelian = gens
            .iter()
            .all(|x| gens.iter().all(|y| b.contains(&r.commutator(x, y))));
        let exponent_p = gens.iter().all(|x| b.contains(&r.pow(x, p)));
        if !abelian || !exponent_p {
            return Err(SmithError::InvalidTower(format!(
                "Γ_{n}/Γ_{} of order {} is not elementary abelian of exponent {p}",
                n + 1,
                a.order() / b.order()
            )));
        }
    }
    if prime_of_prime_power(top.order() as u64).is_some_and(|q| q != p) {
        return Err(SmithError::InvalidTower(format!("Γ_1 is not a {p}-group")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitStatus {
    Ok,
    /// All fitted values coincide; the slope is exactly zero.
    ConstantValues,
    /// Fewer than two levels.
    TooFewLevels,
    /// Some fitted value is zero, so it has no logarithm.
    ZeroValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub level: u32,
    pub index: u128,
    pub tail: Option<u128>,
    pub adem: u128,
    pub lower: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub degree: usize,
    pub rows: Vec<GrowthRow>,
    /// Least-squares slope of `log adem_rhs` against `log [Γ:Γ_n]`.
    pub fitted: Option<f64>,
    /// Root mean square of the fit residuals.
    pub residual: Option<f64>,
    /// `dα` from the scenario metadata, as `(numerator, denominator)`.
    pub predicted: Option<(i64, i64)>,
    pub status: FitStatus,
}

/// Ordinary least squares slope and RMS residual of `y` against `x`.
fn ols(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = points
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    (slope, (rss / n).sqrt())
}

/// Fits the growth of the Adem sum in the index over levels `1..=levels`.
pub fn growth_fit(scenario: &Scenario, r: usize, levels: u32) -> Result<GrowthReport, SmithError> {
    scenario.validate()?;
    let rows = (1..=levels.min(scenario.levels.len() as u32))
        .into_par_iter()
        .map(|n| {
            let c = chain_check(scenario, n, r)?;
            Ok(GrowthRow {
                level: n,
                index: scenario.level(n)?.index,
                tail: c.tail,
                adem: c.adem,
                lower: c.lower,
            })
        })
        .collect::<Result<Vec<_>, SmithError>>()?;
    let predicted = scenario
        .meta
        .as_ref()
        .map(GrowthMeta::predicted)
        .transpose()?
        .map(|q| (*q.numer(), *q.denom()));
    let (fitted, residual, status) = if rows.len() < 2 {
        (None, None, FitStatus::TooFewLevels)
    } else if rows.iter().any(|r| r.adem == 0) {
        (None, None, FitStatus::ZeroValue)
    } else if rows.iter().all(|r| r.adem == rows[0].adem) {
        (Some(0.0), Some(0.0), FitStatus::ConstantValues)
    } else {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| ((r.index as f64).ln(), (r.adem as f64).ln()))
            .collect();
        let (s, res) = ols(&pts);
        (Some(s), Some(res), FitStatus::Ok)
    };
    Ok(GrowthReport {
        degree: r,
        rows,
        fitted,
        residual,
        predicted,
        status,
    })
}
