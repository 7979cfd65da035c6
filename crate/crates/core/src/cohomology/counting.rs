use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::groups::{
    fixed_subgroup, frattini, lower_p_series, p_group_prime, quotient, AbelianRule, FiniteGroup,
    GroupRule, ThetaAction,
};
use crate::linalg::{rank_mod_prime, smith_normal_form};

use super::{
    h1_finite, h1_lattice, restriction_kernel_finite, restriction_kernel_lattice, H1Error,
    LatticeAction,
};

/// Cardinalities around `1 → Γ_n^Θ → Γ_1^Θ → (Γ_1/Γ_n)^Θ → H¹(Θ,Γ_n) → H¹(Θ,Γ_1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingReport {
    pub prime: u64,
    pub level: u32,
    /// `|(Γ_1/Γ_n)^Θ|`
    pub quotient_fixed: u128,
    /// `[Γ_1^Θ : Γ_n^Θ]`
    pub fixed_index: u128,
    /// `|ker h_n|`
    pub kernel_size: u128,
    /// `dim_{F_p} (Γ_1/Φ(Γ_1))^Θ`
    pub delta: u32,
    /// every nonempty fiber of the connecting map has `[Γ_1^Θ : Γ_n^Θ]` points
    pub fibers_uniform: Option<bool>,
    /// the connecting map hits exactly `ker h_n`
    pub image_is_kernel: Option<bool>,
    /// `|ker h_n| · [Γ_1^Θ : Γ_n^Θ] = |(Γ_1/Γ_n)^Θ|`
    pub identity_holds: bool,
    /// `|(Γ_1/Γ_n)^Θ| = p^{(n-1)δ}`, when `Γ_n` is the `n`-th lower p-series term
    pub power_law_holds: Option<bool>,
}

impl CountingReport {
    pub fn passed(&self) -> bool {
        self.identity_holds
            && self.fibers_uniform != Some(false)
            && self.image_is_kernel != Some(false)
            && self.power_law_holds != Some(false)
    }
}

fn log_exact(mut x: u128, p: u64) -> Option<u32> {
    let mut e = 0;
    while x > 1 {
        if !x.is_multiple_of(p as u128) {
            return None;
        }
        x /= p as u128;
        e += 1;
    }
    (x == 1).then_some(e)
}

/// Checks the counting identity for `Γ_n ⊴ Γ_1`, both finite and `Θ`-stable.
pub fn verify_counting_finite<R: GroupRule + 'static>(
    gamma1: &FiniteGroup<R>,
    gamma_n: &FiniteGroup<R>,
    level: u32,
    action: &ThetaAction<R>,
    cap: usize,
) -> Result<CountingReport, H1Error> {
    if level == 0 {
        return Err(H1Error::Incompatible("levels start at 1".into()));
    }
    if !gamma_n.is_normal_in(gamma1) {
        return Err(H1Error::Incompatible(
            "Γ_n is not a normal subgroup of Γ_1".into(),
        ));
    }
    action.validate_on(gamma1)?;
    action.validate_on(gamma_n)?;
    let prime = p_group_prime(gamma1)?.unwrap_or(1);
    let r = gamma1.rule().clone();

    let fix1 = fixed_subgroup(gamma1, action)?;
    let fix_n = fixed_subgroup(gamma_n, action)?;
    let fixed_index = (fix1.order() / fix_n.order()) as u128;

    let (q, _) = quotient(gamma1, gamma_n)?;
    let qrule = q.rule().clone();
    let q_action = action.on_quotient(qrule);
    let q_fixed = fixed_subgroup(&q, &q_action)?;

    let h1_n = h1_finite(gamma_n, action)?;
    let kernel = restriction_kernel_finite(gamma_n, gamma1, action)?;

    // connecting map: the coset of g goes to the class of g^{-1} α(g)
    let mut fibers: BTreeMap<usize, u128> = BTreeMap::new();
    // canonical coset representatives are elements of Γ_1
    for g in q_fixed.elements() {
        let c = r.mul(&r.inv(g), &action.apply(g));
        let class = h1_n
            .class_of(&c)
            .ok_or(H1Error::Incompatible("connecting map leaves Γ_n".into()))?;
        *fibers.entry(class).or_default() += 1;
    }
    let fibers_uniform = fibers.values().all(|&s| s == fixed_index);
    let image: Vec<usize> = fibers.keys().copied().collect();

    let delta = if gamma1.is_trivial() {
        0
    } else {
        let phi = frattini(gamma1, cap)?;
        let (fq, _) = quotient(gamma1, &phi)?;
        let fa = action.on_quotient(fq.rule().clone());
        let fixed = fixed_subgroup(&fq, &fa)?.order() as u128;
        log_exact(fixed, prime).ok_or(H1Error::Incompatible(
            "Frattini quotient fixed points".into(),
        ))?
    };

    let power_law_holds = if gamma1.is_trivial() {
        Some(q_fixed.order() == 1)
    } else {
        let series = lower_p_series(gamma1, cap)?;
        series
            .term(level as usize)
            .same_elements(gamma_n)
            .then(|| q_fixed.order() as u128 == (prime as u128).pow((level - 1) * delta))
    };

    let kernel_size = kernel.len() as u128;
    Ok(CountingReport {
        prime,
        level,
        quotient_fixed: q_fixed.order() as u128,
        fixed_index,
        kernel_size,
        delta,
        fibers_uniform: Some(fibers_uniform),
        image_is_kernel: Some(image == kernel),
        identity_holds: kernel_size * fixed_index == q_fixed.order() as u128,
        power_law_holds,
    })
}

/// Solutions of `(A − I)x ≡ 0 (mod s)` via the Smith form of `A − I`:
/// with `U(A − I)V = D`, they are `x = V y` with `d_i y_i ≡ 0`.
fn fixed_points_mod(
    action: &LatticeAction,
    s: u64,
    limit: usize,
) -> Result<(u128, Option<Vec<Vec<i64>>>), H1Error> {
    let d = action.dim();
    let snf = smith_normal_form(&action.coboundary_matrix()?)?;
    let divs = snf.divisors();
    // allowed residues for each y_i, as (step, count)
    let ranges: Vec<(u64, u64)> = (0..d)
        .map(|i| {
            let di = divs.get(i).copied().unwrap_or(0).unsigned_abs();
            let g = if di == 0 { s } else { num::integer::gcd(di, s) };
            (s / g, g)
        })
        .collect();
    let count: u128 = ranges.iter().map(|&(_, c)| c as u128).product();
    if count > limit as u128 {
        return Ok((count, None));
    }
    let mut ys: Vec<Vec<i64>> = vec![vec![]];
    for &(step, c) in &ranges {
        ys = ys
            .into_iter()
            .flat_map(|y| (0..c).map(move |t| [y.as_slice(), &[(t * step) as i64]].concat()))
            .collect();
    }
    let v = snf.v();
    let mut xs: Vec<Vec<i64>> = ys
        .iter()
        .map(|y| {
            let x = v.mul_vec(y)?;
            Ok(x.into_iter().map(|e| e.rem_euclid(s as i64)).collect())
        })
        .collect::<Result<_, H1Error>>()?;
    xs.sort();
    xs.dedup();
    if xs.len() as u128 != count {
        return Err(H1Error::Incompatible(
            "parametrized fixed points are not distinct".into(),
        ));
    }
    Ok((count, Some(xs)))
}

/// Largest `(Z/s)^d` this module enumerates when cross-checking fibers.
pub const LATTICE_ENUMERATION_LIMIT: usize = 1 << 20;

/// Checks the counting identity on the tower `Γ_n = p^{n-1} Z^d`.
pub fn verify_counting_lattice(
    action: &LatticeAction,
    p: u64,
    level: u32,
) -> Result<CountingReport, H1Error> {
    if level == 0 {
        return Err(H1Error::Incompatible("levels start at 1".into()));
    }
    if action.order().is_multiple_of(p) {
        return Err(H1Error::Incompatible(format!("p = {p} divides |Θ|")));
    }
    let d = action.dim();
    let s = p.pow(level - 1);

    // [Γ_1^Θ : Γ_n^Θ] is the size of the image of the fixed lattice in (Z/s)^d
    let basis = action.fixed_lattice_basis()?;
    let fixed_index = if basis.is_empty() || s == 1 {
        1
    } else {
        let rule = Arc::new(AbelianRule::new(vec![s; d])?);
        let gens: Vec<Vec<u64>> = basis.iter().map(|b| rule.elem(b)).collect();
        FiniteGroup::generated_by(rule, &gens, LATTICE_ENUMERATION_LIMIT)?.order() as u128
    };

    let (quotient_fixed, points) = fixed_points_mod(action, s, LATTICE_ENUMERATION_LIMIT)?;
    let kernel = restriction_kernel_lattice(action, s)?;
    let h1 = h1_lattice(action)?;
    let kernel_coords: Vec<Vec<i64>> = kernel
        .iter()
        .map(|y| h1.coordinates(y))
        .collect::<Result<_, _>>()?;

    let (fibers_uniform, image_is_kernel) = match points {
        Some(xs) => {
            let b = action.coboundary_matrix()?;
            let mut fibers: BTreeMap<Vec<i64>, u128> = BTreeMap::new();
            for x in xs {
                let c = b.mul_vec(&x)?;
                if c.iter().any(|v| v % s as i64 != 0) {
                    return Err(H1Error::Incompatible(
                        "fixed point mod s has a coboundary outside sZ^d".into(),
                    ));
                }
                let y: Vec<i64> = c.iter().map(|v| v / s as i64).collect();
                *fibers.entry(h1.coordinates(&y)?).or_default() += 1;
            }
            let mut kc = kernel_coords.clone();
            kc.sort();
            let image: Vec<Vec<i64>> = fibers.keys().cloned().collect();
            (
                Some(fibers.values().all(|&n| n == fixed_index)),
                Some(image == kc),
            )
        }
        None => (None, None),
    };

    let rows = action.coboundary_matrix()?.to_rows();
    let delta = (d - rank_mod_prime(&rows, p)) as u32;
    let kernel_size = kernel.len() as u128;
    Ok(CountingReport {
        prime: p,
        level,
        quotient_fixed,
        fixed_index,
        kernel_size,
        delta,
        fibers_uniform,
        image_is_kernel,
        identity_holds: kernel_size * fixed_index == quotient_fixed,
        power_law_holds: Some(quotient_fixed == (p as u128).pow((level - 1) * delta)),
    })
}
