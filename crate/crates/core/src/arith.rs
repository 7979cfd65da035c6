//! Closed-form indices, growth exponents, starting degrees and dimension
//! counts for congruence towers in arithmetic groups.
//!
//! Number fields and groups are plain data records; nothing here factors
//! ideals or builds root systems.

use num::rational::Rational64;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::ClassicalFamily;
use crate::linalg::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("no discrete series for {0}")]
    NoDiscreteSeries(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("integer overflow")]
    Overflow,
}

/// A number field recorded by its degree and archimedean places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumberFieldData {
    pub degree: u32,
    pub real_places: u32,
    pub complex_places: u32,
    /// Primes `ℓ` such that the field contains all `ℓ`-th roots of unity.
    #[serde(default)]
    pub contains_mu_ell: Vec<u64>,
}

impl NumberFieldData {
    pub fn new(degree: u32, real_places: u32, complex_places: u32) -> Result<Self, ArithError> {
        let f = NumberFieldData {
            degree,
            real_places,
            complex_places,
            contains_mu_ell: Vec::new(),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn rationals() -> Self {
        NumberFieldData {
            degree: 1,
            real_places: 1,
            complex_places: 0,
            contains_mu_ell: Vec::new(),
        }
    }

    pub fn with_roots_of_unity(mut self, ells: &[u64]) -> Result<Self, ArithError> {
        self.contains_mu_ell.extend_from_slice(ells);
        self.contains_mu_ell.sort_unstable();
        self.contains_mu_ell.dedup();
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), ArithError> {
        if self.degree == 0 {
            return Err(ArithError::OutOfRange(
                "field degree must be positive".into(),
            ));
        }
        if self.degree != self.real_places + 2 * self.complex_places {
            return Err(ArithError::Inconsistent(format!(
                "degree {} differs from s + 2t = {} + 2·{}",
                self.degree, self.real_places, self.complex_places
            )));
        }
        if let Some(&l) = self.contains_mu_ell.iter().find(|&&l| !is_prime(l)) {
            return Err(ArithError::OutOfRange(format!("{l} is not prime")));
        }
        Ok(())
    }

    pub fn archimedean_places(&self) -> u32 {
        self.real_places + self.complex_places
    }

    pub fn is_totally_real(&self) -> bool {
        self.complex_places == 0
    }

    /// `−1` lies in every field, so `ℓ = 2` never needs declaring.
    pub fn has_roots_of_unity(&self, ell: u64) -> bool {
        ell == 2 || self.contains_mu_ell.contains(&ell)
    }
}

/// A split semisimple group with the data of its real points `G(R)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitGroupData {
    pub label: String,
    pub rank: u32,
    pub dim: u32,
    /// Dimension of a maximal compact subgroup `K` of `G(R)`.
    pub compact_dim: u32,
    /// Whether `rank_C K = rank_C G(R)`.
    pub has_ds: bool,
}

impl SplitGroupData {
    /// `SL_n`, with `K = SO(n)`; discrete series only for `n = 2`.
    pub fn sl(n: u32) -> Result<Self, ArithError> {
        if n < 2 {
            return Err(ArithError::OutOfRange("SL_n needs n ≥ 2".into()));
        }
        Ok(SplitGroupData {
            label: format!("SL_{n}"),
            rank: n - 1,
            dim: n * n - 1,
            compact_dim: n * (n - 1) / 2,
            has_ds: n / 2 == n - 1,
        })
    }

    /// `Sp_{2n}`, with `K = U(n)`; always has discrete series.
    pub fn sp(n: u32) -> Result<Self, ArithError> {
        if n < 1 {
            return Err(ArithError::OutOfRange("Sp_2n needs n ≥ 1".into()));
        }
        Ok(SplitGroupData {
            label: format!("Sp_{}", 2 * n),
            rank: n,
            dim: n * (2 * n + 1),
            compact_dim: n * n,
            has_ds: true,
        })
    }

    /// The split form `SO(a, b)` of `SO_n` with `a = ⌈n/2⌉`, `b = ⌊n/2⌋`.
    pub fn so(n: u32) -> Result<Self, ArithError> {
        if n < 3 {
            return Err(ArithError::OutOfRange("SO_n needs n ≥ 3".into()));
        }
        let (a, b) = (n.div_ceil(2), n / 2);
        Ok(SplitGroupData {
            label: format!("SO_{n}"),
            rank: n / 2,
            dim: n * (n - 1) / 2,
            compact_dim: a * (a - 1) / 2 + b * (b - 1) / 2,
            has_ds: a / 2 + b / 2 == n / 2,
        })
    }

    pub fn custom(
        label: &str,
        rank: u32,
        dim: u32,
        compact_dim: u32,
        has_ds: bool,
    ) -> Result<Self, ArithError> {
        let g = SplitGroupData {
            label: label.into(),
            rank,
            dim,
            compact_dim,
            has_ds,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ArithError> {
        if self.rank == 0 || self.dim == 0 {
            return Err(ArithError::OutOfRange(format!(
                "{}: rank and dimension must be positive",
                self.label
            )));
        }
        if self.compact_dim > self.dim
            || (self.has_ds && !(self.dim - self.compact_dim).is_multiple_of(2))
        {
            return Err(ArithError::Inconsistent(format!(
                "{}: dim G − dim K = {} − {} must be nonnegative, and even under discrete series",
                self.label, self.dim, self.compact_dim
            )));
        }
        Ok(())
    }

    /// `q = dim(G(R)/K)/2`, when it is an integer.
    pub fn q(&self) -> Option<u32> {
        let d = self.dim - self.compact_dim;
        d.is_multiple_of(2).then_some(d / 2)
    }
}

/// Numerical data of a congruence tower over a prime ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerParams {
    pub p: u64,
    /// `[E:F] = 2^m` in the base change setting.
    pub m: u32,
    /// Ramification index of the prime ideal over `p`.
    pub e: u32,
    pub place_count: u32,
}

impl TowerParams {
    pub fn validate(&self, field: &NumberFieldData) -> Result<(), ArithError> {
        if !is_prime(self.p) {
            return Err(ArithError::OutOfRange(format!("{} is not prime", self.p)));
        }
        if self.e == 0 {
            return Err(ArithError::OutOfRange(
                "ramification index must be at least 1".into(),
            ));
        }
        if self.e > field.degree {
            return Err(ArithError::Inconsistent(format!(
                "e = {} exceeds [F:Q] = {}",
                self.e, field.degree
            )));
        }
        if self.place_count < field.archimedean_places() {
            return Err(ArithError::Inconsistent(format!(
                "|S| = {} is smaller than the {} archimedean places",
                self.place_count,
                field.archimedean_places()
            )));
        }
        Ok(())
    }
}

fn checked_pow(base: u64, exp: u64) -> Result<u128, ArithError> {
    let exp = u32::try_from(exp).map_err(|_| ArithError::Overflow)?;
    (base as u128).checked_pow(exp).ok_or(ArithError::Overflow)
}

/// `|SL_n(Z/p^k)| = [SL_n(Z):Γ(p^k)] = p^{(n²−1)(k−1)} · p^{n(n−1)/2} · Π_{i=2}^n (p^i − 1)`.
pub fn congruence_index(
    family: ClassicalFamily,
    n: u32,
    p: u64,
    k: u32,
) -> Result<u128, ArithError> {
    if family != ClassicalFamily::SL {
        return Err(ArithError::UnsupportedFamily(format!("{family:?}")));
    }
    if !is_prime(p) {
        return Err(ArithError::OutOfRange(format!("{p} is not prime")));
    }
    if n == 0 || k == 0 {
        return Err(ArithError::OutOfRange("need n ≥ 1 and k ≥ 1".into()));
    }
    let n = n as u64;
    let mut acc = checked_pow(p, (n * n - 1) * (k as u64 - 1))?;
    acc = acc
        .checked_mul(checked_pow(p, n * (n - 1) / 2)?)
        .ok_or(ArithError::Overflow)?;
    for i in 2..=n {
        let f = checked_pow(p, i)? - 1;
        acc = acc.checked_mul(f).ok_or(ArithError::Overflow)?;
    }
    Ok(acc)
}

/// `d·α` with `d = (dim G^Θ − λ)/dim G`.
pub fn theorem1_exponent(
    dim_fixed: u32,
    lambda: u32,
    dim_g: u32,
    alpha: Rational64,
) -> Result<Rational64, ArithError> {
    if dim_g == 0 {
        return Err(ArithError::OutOfRange("dim G must be positive".into()));
    }
    if lambda > dim_fixed || dim_fixed > dim_g {
        return Err(ArithError::OutOfRange(format!(
            "need 0 ≤ λ ≤ dim G^Θ ≤ dim G, got λ = {lambda}, dim G^Θ = {dim_fixed}, dim G = {dim_g}"
        )));
    }
    if alpha < Rational64::zero() || alpha > Rational64::one() {
        return Err(ArithError::OutOfRange(format!(
            "α = {alpha} lies outside [0, 1]"
        )));
    }
    Ok(Rational64::new((dim_fixed - lambda) as i64, dim_g as i64) * alpha)
}

/// Exponent and starting degree for the base change tower of `group` over
/// `field` along an extension of degree `extension_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChangeResult {
    pub m: u32,
    pub exponent: Rational64,
    pub start_degree: u32,
}

/// The exponent `1/[E:F]` and `q = dim(G_∞/K_∞)/2` for `G_∞ = G(F ⊗ R)`.
///
/// A complex place contributes `G(C)`, which never has discrete series, so
/// `field` must be totally real.
pub fn basechange_exponent(
    group: &SplitGroupData,
    field: &NumberFieldData,
    extension_degree: u64,
) -> Result<BaseChangeResult, ArithError> {
    group.validate()?;
    field.validate()?;
    if extension_degree == 0 || !extension_degree.is_power_of_two() {
        return Err(ArithError::Hypothesis(format!(
            "[E:F] = {extension_degree} is not a power of 2"
        )));
    }
    if !group.has_ds || !field.is_totally_real() {
        return Err(ArithError::NoDiscreteSeries(group.label.clone()));
    }
    let m = extension_degree.trailing_zeros();
    Ok(BaseChangeResult {
        m,
        exponent: Rational64::new(1, extension_degree as i64),
        start_degree: field.degree * group.q().expect("discrete series forces even dim G/K"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2nReport {
    pub exponent: Rational64,
    pub start_degree: u32,
    pub vcd: i64,
}

/// Bounds for congruence subgroups of `SL_{2n}(O_E)` obtained from the
/// symplectic involution on top of base change for `Sp_{2n}`.
pub fn sl2n_example_report(
    n: u32,
    m: u32,
    base: &NumberFieldData,
    ext: &NumberFieldData,
) -> Result<Sl2nReport, ArithError> {
    base.validate()?;
    ext.validate()?;
    if n == 0 {
        return Err(ArithError::OutOfRange("n must be at least 1".into()));
    }
    if m > 30 {
        return Err(ArithError::Overflow);
    }
    if !base.is_totally_real() {
        return Err(ArithError::Hypothesis("F must be totally real".into()));
    }
    let ext_degree = 1u64 << m;
    if ext.degree as u64 != base.degree as u64 * ext_degree {
        return Err(ArithError::Inconsistent(format!(
            "[E:Q] = {} but [F:Q]·2^m = {}",
            ext.degree,
            base.degree as u64 * ext_degree
        )));
    }
    let (ni, mi) = (n as i64, ext_degree as i64);
    let exponent = Rational64::new(ni * (2 * ni + 1), mi * (4 * ni * ni - 1));
    let start_degree = base.degree * (n * n + n) / 2;
    let (s, t) = (ext.real_places as i64, ext.complex_places as i64);
    let vcd = 2 * mi * base.degree as i64 * ni * ni + (s - 2) * ni - (s + t - 1);

    let sp = SplitGroupData::sp(n)?;
    let sl = SplitGroupData::sl(2 * n)?;
    let bc = basechange_exponent(&sp, base, ext_degree)?;
    let composed = theorem1_exponent(sp.dim, 0, sl.dim, bc.exponent)?;
    if composed != exponent || bc.start_degree != start_degree {
        return Err(ArithError::Inconsistent(format!(
            "closed form {exponent}, degree {start_degree} vs composition {composed}, degree {}",
            bc.start_degree
        )));
    }
    Ok(Sl2nReport {
        exponent,
        start_degree,
        vcd,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitGroupsReport {
    pub alpha: Rational64,
    pub start_degree: u32,
    pub lambda: u32,
}

/// `α = r([F:Q] − |S| + 1)/(dim G · [F:Q])` and starting degree `r(|S| − 1)`
/// for `S`-arithmetic subgroups of a split group, with coefficients mod `ell`.
pub fn split_groups_exponent(
    group: &SplitGroupData,
    field: &NumberFieldData,
    place_count: u32,
    ell: u64,
) -> Result<SplitGroupsReport, ArithError> {
    group.validate()?;
    field.validate()?;
    if place_count < field.archimedean_places().max(1) {
        return Err(ArithError::Hypothesis(format!(
            "|S| = {place_count} misses archimedean places ({})",
            field.archimedean_places()
        )));
    }
    if place_count > field.degree {
        return Err(ArithError::Hypothesis(format!(
            "|S| = {place_count} exceeds [F:Q] = {}",
            field.degree
        )));
    }
    if !is_prime(ell) {
        return Err(ArithError::OutOfRange(format!("{ell} is not prime")));
    }
    if !field.has_roots_of_unity(ell) {
        return Err(ArithError::Hypothesis(format!(
            "F lacks the {ell}-th roots of unity"
        )));
    }
    let (r, deg, dim, s) = (
        group.rank as i64,
        field.degree as i64,
        group.dim as i64,
        place_count as i64,
    );
    let alpha = Rational64::new(r * (deg - s + 1), dim * deg);
    let lambda = dirichlet_unit_rank(group.rank, place_count)?;
    let composed = theorem1_exponent(
        group.rank * field.degree,
        lambda,
        group.dim * field.degree,
        Rational64::one(),
    )?;
    if composed != alpha {
        return Err(ArithError::Inconsistent(format!(
            "closed form {alpha} vs composition {composed}"
        )));
    }
    Ok(SplitGroupsReport {
        alpha,
        start_degree: lambda,
        lambda,
    })
}

/// Rank `r(|S| − 1)` of the `S`-integral points of a split torus of rank `r`.
pub fn dirichlet_unit_rank(torus_rank: u32, place_count: u32) -> Result<u32, ArithError> {
    if place_count == 0 {
        return Err(ArithError::OutOfRange("|S| must be at least 1".into()));
    }
    torus_rank
        .checked_mul(place_count - 1)
        .ok_or(ArithError::Overflow)
}

/// Levels advanced by one Frattini step in the congruence filtration.
pub fn frattini_step(e: u32) -> Result<u32, ArithError> {
    if e == 0 {
        return Err(ArithError::OutOfRange(
            "ramification index must be at least 1".into(),
        ));
    }
    Ok(e)
}

/// Level reached from `level` after `steps` Frattini steps.
pub fn frattini_level(level: u32, e: u32, steps: u32) -> Result<u32, ArithError> {
    let step = frattini_step(e)?;
    step.checked_mul(steps)
        .and_then(|d| d.checked_add(level))
        .ok_or(ArithError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn index_values() {
        assert_eq!(congruence_index(ClassicalFamily::SL, 2, 3, 1).unwrap(), 24);
        assert_eq!(congruence_index(ClassicalFamily::SL, 2, 3, 2).unwrap(), 648);
        for (p, k) in [(2, 1), (3, 4), (7, 2)] {
            assert_eq!(congruence_index(ClassicalFamily::SL, 1, p, k).unwrap(), 1);
        }
        assert!(matches!(
            congruence_index(ClassicalFamily::Sp, 2, 3, 1),
            Err(ArithError::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn index_level_ratio() {
        for n in 1..=4u32 {
            for p in [2u64, 3, 5] {
                for k in 2..=3 {
                    let a = congruence_index(ClassicalFamily::SL, n, p, k).unwrap();
                    let b = congruence_index(ClassicalFamily::SL, n, p, k - 1).unwrap();
                    assert_eq!(a / b, (p as u128).pow(n * n - 1));
                    assert_eq!(a % b, 0);
                }
            }
        }
    }

    #[test]
    fn index_matches_kernel_order() {
        use crate::groups::congruence_kernel_order;
        use crate::linalg::PrimePower;
        let pp = PrimePower::new(3, 3).unwrap();
        let full = congruence_index(ClassicalFamily::SL, 2, 3, 3).unwrap();
        let level1 = congruence_index(ClassicalFamily::SL, 2, 3, 1).unwrap();
        assert_eq!(
            full / level1,
            congruence_kernel_order(ClassicalFamily::SL, 2, pp, 1)
        );
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(theorem1_exponent(8, 0, 8, r(1, 1)).unwrap(), r(1, 1));
        assert_eq!(theorem1_exponent(4, 0, 8, r(1, 1)).unwrap(), r(1, 2));
        assert_eq!(theorem1_exponent(3, 3, 8, r(1, 1)).unwrap(), r(0, 1));
        assert!(theorem1_exponent(3, 4, 8, r(1, 1)).is_err());
        assert!(theorem1_exponent(9, 0, 8, r(1, 1)).is_err());
        assert!(theorem1_exponent(4, 0, 8, r(3, 2)).is_err());
        assert!(theorem1_exponent(4, 0, 8, r(-1, 2)).is_err());
    }

    #[test]
    fn group_tables() {
        for n in 2..=6 {
            let g = SplitGroupData::sl(n).unwrap();
            assert_eq!((g.dim, g.rank), (n * n - 1, n - 1));
            assert_eq!(g.has_ds, n == 2);
            let s = SplitGroupData::sp(n).unwrap();
            assert_eq!((s.dim, s.rank), (n * (2 * n + 1), n));
            assert!(s.validate().is_ok() && g.validate().is_ok());
        }
        assert_eq!(SplitGroupData::sl(2).unwrap().q(), Some(1));
        assert_eq!(SplitGroupData::sl(3).unwrap().q(), None);
        assert_eq!(SplitGroupData::sp(2).unwrap().q(), Some(3));
        // SO(2,1) ≅ PGL_2(R), SO(3,2) has DS, SO(2,2) has DS, SO(3,3) does not.
        assert!(SplitGroupData::so(3).unwrap().has_ds);
        assert!(SplitGroupData::so(4).unwrap().has_ds);
        assert!(SplitGroupData::so(5).unwrap().has_ds);
        assert!(!SplitGroupData::so(6).unwrap().has_ds);
        assert_eq!(SplitGroupData::so(5).unwrap().q(), Some(3));
        assert!(SplitGroupData::custom("bad", 1, 3, 2, true).is_err());
        assert!(SplitGroupData::custom("bad", 1, 3, 4, false).is_err());
    }

    #[test]
    fn basechange_values() {
        let sp4 = SplitGroupData::sp(2).unwrap();
        let q = NumberFieldData::rationals();
        let r0 = basechange_exponent(&sp4, &q, 1).unwrap();
        assert_eq!((r0.m, r0.exponent), (0, r(1, 1)));
        let r1 = basechange_exponent(&sp4, &q, 2).unwrap();
        assert_eq!((r1.m, r1.exponent, r1.start_degree), (1, r(1, 2), 3));
        assert!(matches!(
            basechange_exponent(&sp4, &q, 3),
            Err(ArithError::Hypothesis(_))
        ));
        let sl3 = SplitGroupData::sl(3).unwrap();
        assert!(matches!(
            basechange_exponent(&sl3, &q, 2),
            Err(ArithError::NoDiscreteSeries(_))
        ));
        let imag = NumberFieldData::new(2, 0, 1).unwrap();
        assert!(basechange_exponent(&sp4, &imag, 2).is_err());
    }

    #[test]
    fn sl2n_values() {
        let q = NumberFieldData::rationals();
        let e = NumberFieldData::new(2, 2, 0).unwrap();
        let rep = sl2n_example_report(1, 1, &q, &e).unwrap();
        assert_eq!(rep.exponent, r(1, 2));
        assert_eq!(rep.vcd, 3);
        assert_eq!(rep.start_degree, 1);
        let imag = NumberFieldData::new(2, 0, 1).unwrap();
        assert!(sl2n_example_report(1, 1, &imag, &NumberFieldData::new(4, 4, 0).unwrap()).is_err());
        assert!(matches!(
            sl2n_example_report(1, 2, &q, &e),
            Err(ArithError::Inconsistent(_))
        ));
    }

    #[test]
    fn sl2n_sweep_matches_composition() {
        for deg in 1..=3u32 {
            let base = NumberFieldData::new(deg, deg, 0).unwrap();
            for m in 0..=3u32 {
                let d = deg << m;
                let ext = NumberFieldData::new(d, d, 0).unwrap();
                for n in 1..=5u32 {
                    let rep = sl2n_example_report(n, m, &base, &ext).unwrap();
                    let direct =
                        theorem1_exponent(n * (2 * n + 1), 0, 4 * n * n - 1, r(1, 1 << m)).unwrap();
                    assert_eq!(rep.exponent, direct);
                    assert!(rep.exponent > r(0, 1) && rep.exponent <= r(1, 1));
                }
            }
        }
    }

    #[test]
    fn split_group_values() {
        let sl2 = SplitGroupData::sl(2).unwrap();
        let imag = NumberFieldData::new(2, 0, 1).unwrap();
        let rep = split_groups_exponent(&sl2, &imag, 1, 2).unwrap();
        assert_eq!((rep.alpha, rep.start_degree, rep.lambda), (r(1, 3), 0, 0));
        assert!(matches!(
            split_groups_exponent(&sl2, &imag, 3, 2),
            Err(ArithError::Hypothesis(_))
        ));
        assert!(matches!(
            split_groups_exponent(&sl2, &imag, 1, 3),
            Err(ArithError::Hypothesis(_))
        ));
        let cyclo = imag.with_roots_of_unity(&[3]).unwrap();
        assert!(split_groups_exponent(&sl2, &cyclo, 2, 3).is_ok());
    }

    #[test]
    fn split_group_sweep() {
        let groups = [
            SplitGroupData::sl(2),
            SplitGroupData::sl(3),
            SplitGroupData::sp(2),
            SplitGroupData::so(5),
        ];
        for g in groups.into_iter().map(Result::unwrap) {
            for deg in 1..=6u32 {
                for t in 0..=deg / 2 {
                    let f = NumberFieldData::new(deg, deg - 2 * t, t).unwrap();
                    for s in f.archimedean_places()..=deg {
                        let rep = split_groups_exponent(&g, &f, s, 2).unwrap();
                        let (rk, dg, dm, sz) = (g.rank as i64, deg as i64, g.dim as i64, s as i64);
                        assert_eq!(rep.alpha, r(rk * dg - rk * (sz - 1), dg * dm));
                        assert!(rep.alpha >= r(0, 1) && rep.alpha <= r(1, 1));
                    }
                }
            }
        }
    }

    #[test]
    fn unit_rank_and_steps() {
        assert_eq!(dirichlet_unit_rank(5, 1).unwrap(), 0);
        assert_eq!(dirichlet_unit_rank(2, 3).unwrap(), 4);
        assert!(dirichlet_unit_rank(2, 0).is_err());
        assert_eq!(frattini_step(1).unwrap(), 1);
        assert_eq!(frattini_step(2).unwrap(), 2);
        assert_eq!(frattini_level(1, 1, 4).unwrap(), 5);
        assert!(frattini_step(0).is_err());
    }

    #[test]
    fn unit_rank_wires_into_descriptor() {
        use crate::betti::{betti_mod_l, GroupDescriptor};
        let lambda = dirichlet_unit_rank(1, 3).unwrap();
        let b = betti_mod_l(&GroupDescriptor::FreeAbelian { rank: lambda }, 2).unwrap();
        assert_eq!(b.top_degree(), Some(lambda as usize));
    }

    #[test]
    fn frattini_step_on_sl2() {
        use crate::groups::{congruence_kernel, frattini};
        use crate::linalg::PrimePower;
        let pp = PrimePower::new(3, 3).unwrap();
        let g1 = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, 100_000).unwrap();
        let next = frattini_level(1, 1, 1).unwrap();
        let g2 = congruence_kernel(ClassicalFamily::SL, 2, pp, next, 100_000).unwrap();
        assert!(frattini(&g1, 100_000).unwrap().same_elements(&g2));
    }

    #[test]
    fn tower_params_check() {
        let f = NumberFieldData::new(2, 2, 0).unwrap();
        let ok = TowerParams {
            p: 3,
            m: 1,
            e: 1,
            place_count: 2,
        };
        assert!(ok.validate(&f).is_ok());
        assert!(TowerParams { p: 4, ..ok.clone() }.validate(&f).is_err());
        assert!(TowerParams { e: 0, ..ok.clone() }.validate(&f).is_err());
        assert!(TowerParams {
            place_count: 1,
            ..ok
        }
        .validate(&f)
        .is_err());
        assert!(NumberFieldData::new(3, 2, 0).is_err());
    }
}
