//! Standard families of small scenarios: coprime actions on finite
//! `p`-groups, congruence kernels of `SL_2` with their involutions, and
//! abelian towers. Shared by the command-line suites and the test targets.

use std::sync::Arc;

use crate::cohomology::{
    h1_finite, verify_counting_finite, CountingReport, H1Error, LatticeAction,
};
use crate::groups::{
    congruence_kernel, fixed_subgroup, frattini, lower_p_series, p_group_prime, quotient,
    AbelianRule, ClassicalFamily, FiniteGroup, GroupError, GroupRule, MatrixRule, ThetaAction,
};
use crate::linalg::{IntMat, MatZpk, PrimePower};
use crate::smith::{finite_scenario, lattice_scales, lattice_scenario, Scenario, SmithError};

/// `H¹(Θ, G)` for one finite `p`-group with a cyclic action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Case {
    pub label: String,
    pub p: u64,
    pub group_order: usize,
    pub theta_order: u64,
    pub classes: usize,
    pub cocycles: usize,
}

fn h1_case<R: GroupRule>(
    label: String,
    g: &FiniteGroup<R>,
    action: &ThetaAction<R>,
) -> Result<H1Case, H1Error> {
    action.validate_on(g)?;
    let h = h1_finite(g, action)?;
    Ok(H1Case {
        label,
        p: p_group_prime(g)?.unwrap_or(1),
        group_order: g.order(),
        theta_order: action.order(),
        classes: h.len(),
        cocycles: h.total_cocycles(),
    })
}

fn abelian(
    moduli: &[u64],
    cap: usize,
) -> Result<(Arc<AbelianRule>, FiniteGroup<AbelianRule>), GroupError> {
    let rule = Arc::new(AbelianRule::new(moduli.to_vec())?);
    let g = FiniteGroup::closure(rule.clone(), rule.basis(), cap)?;
    Ok((rule, g))
}

fn int(rows: &[&[i64]]) -> IntMat {
    IntMat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("rectangular")
}

/// An element of order 4 in `(Z/p^k)^×`, for `p ≡ 1 mod 4`.
fn fourth_root_of_unity(pp: PrimePower) -> Option<i64> {
    let m = pp.modulus() as i64;
    (2..m).find(|&a| (a * a).rem_euclid(m) == m - 1)
}

/// Actions of order 2, 3 and 4 on kernels of `SL_2(Z/p^k)`, all coprime to `p`.
pub fn sl2_kernel_actions(pp: PrimePower) -> Result<Vec<ThetaAction<MatrixRule>>, GroupError> {
    let p = pp.p();
    let mut out = vec![
        ThetaAction::transpose_inverse(),
        ThetaAction::conjugation(MatZpk::new(pp, 2, &[-1, 0, 0, 1])?, 2, "conj diag(-1,1)")?,
    ];
    if p != 3 {
        out.push(ThetaAction::conjugation(
            MatZpk::new(pp, 2, &[0, -1, 1, -1])?,
            3,
            "conj order-3 rotation",
        )?);
    }
    if let Some(a) = fourth_root_of_unity(pp).filter(|_| p % 4 == 1) {
        out.push(ThetaAction::conjugation(
            MatZpk::new(pp, 2, &[a, 0, 0, 1])?,
            4,
            format!("conj diag({a},1)"),
        )?);
    }
    Ok(out)
}

/// At least fifty coprime actions on `p`-groups of order at most `3^6` or
/// `5^4`: abelian groups, congruence kernels of `SL_2` and their quotients.
pub fn coprime_h1_cases(cap: usize) -> Result<Vec<H1Case>, H1Error> {
    let mut out = Vec::new();
    let abelian_3: &[&[u64]] = &[
        &[3],
        &[9],
        &[27],
        &[81],
        &[243],
        &[729],
        &[3, 3],
        &[9, 3],
        &[9, 9],
        &[27, 3],
        &[27, 9],
        &[27, 27],
        &[3, 3, 3],
        &[9, 3, 3],
        &[9, 9, 3],
        &[9, 9, 9],
        &[3, 3, 3, 3],
    ];
    let abelian_5: &[&[u64]] = &[
        &[5],
        &[25],
        &[125],
        &[625],
        &[5, 5],
        &[25, 5],
        &[25, 25],
        &[125, 5],
        &[5, 5, 5],
        &[25, 5, 5],
        &[5, 5, 5, 5],
    ];
    for moduli in abelian_3.iter().chain(abelian_5) {
        let (rule, g) = abelian(moduli, cap)?;
        out.push(h1_case(
            format!("Z{moduli:?} inversion"),
            &g,
            &ThetaAction::inversion(rule.clone()),
        )?);
        let equal = moduli.windows(2).all(|w| w[0] == w[1]);
        if equal && moduli.len() == 2 {
            let swap = ThetaAction::linear(rule.clone(), &int(&[&[0, 1], &[1, 0]]), 2, "swap")?;
            out.push(h1_case(format!("Z{moduli:?} swap"), &g, &swap)?);
            let flip =
                ThetaAction::linear(rule.clone(), &int(&[&[1, 0], &[0, -1]]), 2, "diag(1,-1)")?;
            out.push(h1_case(format!("Z{moduli:?} diag(1,-1)"), &g, &flip)?);
            if moduli[0] % 3 != 0 {
                let rot = ThetaAction::linear(
                    rule.clone(),
                    &int(&[&[0, -1], &[1, -1]]),
                    3,
                    "order-3 rotation",
                )?;
                out.push(h1_case(format!("Z{moduli:?} rotation"), &g, &rot)?);
            }
        }
        if equal && moduli.len() == 3 && moduli[0] % 3 != 0 {
            let cyc = ThetaAction::linear(
                rule.clone(),
                &int(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
                3,
                "3-cycle",
            )?;
            out.push(h1_case(format!("Z{moduli:?} 3-cycle"), &g, &cyc)?);
        }
    }
    for (p, k, level) in [
        (3u64, 2u32, 1u32),
        (3, 3, 1),
        (3, 3, 2),
        (5, 2, 1),
        (5, 3, 2),
    ] {
        let pp = PrimePower::new(p, k)?;
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, level, cap)?;
        let phi = frattini(&g, cap)?;
        for action in sl2_kernel_actions(pp)? {
            out.push(h1_case(
                format!("SL2 mod {p}^{k} level {level}, {}", action.label()),
                &g,
                &action,
            )?);
            if !phi.is_trivial() {
                let (q, _) = quotient(&g, &phi)?;
                let qa = action.on_quotient(q.rule().clone());
                out.push(h1_case(
                    format!(
                        "SL2 mod {p}^{k} level {level} mod Frattini, {}",
                        action.label()
                    ),
                    &q,
                    &qa,
                )?);
            }
        }
    }
    Ok(out)
}

/// Lower `p`-series of a kernel of `SL_2(Z/p^k)` and of its fixed group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformCase {
    pub label: String,
    pub p: u64,
    pub k: u32,
    pub level: u32,
    pub series_orders: Vec<usize>,
    pub fixed_series_orders: Vec<usize>,
    /// `P_i(G^Θ) = P_i(G)^Θ` as element sets, per `i`.
    pub series_match: Vec<bool>,
    /// `dim_{F_p} (G/Φ(G))^Θ`
    pub frattini_quotient_fixed_dim: u32,
    /// `dim_{F_p} G^Θ/Φ(G^Θ)`
    pub fixed_frattini_dim: u32,
}

fn log_p(mut n: usize, p: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        n /= p as usize;
        e += 1;
    }
    e
}

/// Kernels of `SL_2(Z/p^k)` for `p ∈ {3, 5}`, `k ≤ 3`, every level, with the
/// transpose-inverse and diagonal conjugation actions.
pub fn uniform_cases(cap: usize) -> Result<Vec<UniformCase>, H1Error> {
    let mut out = Vec::new();
    for p in [3u64, 5] {
        for k in 2..=3u32 {
            let pp = PrimePower::new(p, k)?;
            for level in 1..k {
                let g = congruence_kernel(ClassicalFamily::SL, 2, pp, level, cap)?;
                let series = lower_p_series(&g, cap)?;
                let mut actions = vec![
                    ThetaAction::transpose_inverse(),
                    ThetaAction::conjugation(
                        MatZpk::new(pp, 2, &[-1, 0, 0, 1])?,
                        2,
                        "conj diag(-1,1)",
                    )?,
                ];
                if let Some(a) = fourth_root_of_unity(pp).filter(|_| p % 4 == 1) {
                    actions.push(ThetaAction::conjugation(
                        MatZpk::new(pp, 2, &[a, 0, 0, 1])?,
                        4,
                        format!("conj diag({a},1)"),
                    )?);
                }
                for action in actions {
                    let fixed = fixed_subgroup(&g, &action)?;
                    let fixed_series = lower_p_series(&fixed, cap)?;
                    let len = series.terms().len().max(fixed_series.terms().len()) + 1;
                    let series_match = (1..=len)
                        .map(|i| {
                            Ok(fixed_subgroup(series.term(i), &action)?
                                .same_elements(fixed_series.term(i)))
                        })
                        .collect::<Result<Vec<_>, GroupError>>()?;
                    let phi = frattini(&g, cap)?;
                    let (q, _) = quotient(&g, &phi)?;
                    let q_fixed = fixed_subgroup(&q, &action.on_quotient(q.rule().clone()))?;
                    let fixed_phi = frattini(&fixed, cap)?;
                    out.push(UniformCase {
                        label: format!("SL2 mod {p}^{k} level {level}, {}", action.label()),
                        p,
                        k,
                        level,
                        series_orders: series.orders(),
                        fixed_series_orders: fixed_series.orders(),
                        series_match,
                        frattini_quotient_fixed_dim: log_p(q_fixed.order(), p),
                        fixed_frattini_dim: log_p(fixed.order() / fixed_phi.order(), p),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Lattice actions used for abelian towers: inversion on `Z^d`, `d ≤ 3`, and
/// coordinate swaps on `Z^2`, `Z^3`.
pub fn small_lattice_actions() -> Vec<(String, LatticeAction)> {
    let mut out: Vec<(String, LatticeAction)> = (1..=3)
        .map(|d| (format!("Z^{d} inversion"), LatticeAction::inversion(d)))
        .collect();
    out.extend((2..=3).map(|d| (format!("Z^{d} swap"), LatticeAction::swap(d))));
    out
}

/// Counting identities on finite towers: kernels of `SL_2(Z/p^k)` by level,
/// and `(Z/p^k)^d` with inversion filtered by `p^{n−1}`.
pub fn finite_counting_reports(cap: usize) -> Result<Vec<(String, CountingReport)>, H1Error> {
    let mut out = Vec::new();
    for (p, k) in [(3u64, 3u32), (3, 4), (5, 3)] {
        let pp = PrimePower::new(p, k)?;
        let g1 = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, cap)?;
        for action in sl2_kernel_actions(pp)?.into_iter().take(2) {
            for n in 1..=k {
                let gn = congruence_kernel(ClassicalFamily::SL, 2, pp, n, cap)?;
                let rep = verify_counting_finite(&g1, &gn, n, &action, cap)?;
                out.push((format!("SL2 mod {p}^{k}, {}, n = {n}", action.label()), rep));
            }
        }
    }
    for (p, k, d) in [(3u64, 3u32, 2usize), (3, 4, 1), (5, 2, 2), (3, 2, 3)] {
        let (rule, g1) = abelian(&vec![p.pow(k); d], cap)?;
        let action = ThetaAction::inversion(rule.clone());
        for n in 1..=k {
            let s = p.pow(n - 1);
            let gens: Vec<Vec<u64>> = rule
                .basis()
                .into_iter()
                .map(|b| b.into_iter().map(|x| x * s % p.pow(k)).collect())
                .collect();
            let gn = if n == k {
                FiniteGroup::trivial(rule.clone())
            } else {
                FiniteGroup::closure(rule.clone(), gens, cap)?
            };
            let rep = verify_counting_finite(&g1, &gn, n, &action, cap)?;
            out.push((format!("(Z/{p}^{k})^{d} inversion, n = {n}"), rep));
        }
    }
    Ok(out)
}

/// Scenarios for the fixed-point inequalities: lattice towers with `ℓ = 2`
/// and `p ∈ {3, 5}`, plus towers of finite `p`-groups given by lower
/// `p`-series of `SL_2` kernels.
pub fn adem_scenarios(cap: usize, depth: u32) -> Result<Vec<Scenario>, SmithError> {
    let mut out = Vec::new();
    for (label, action) in small_lattice_actions() {
        for p in [3u64, 5] {
            out.push(lattice_scenario(
                &format!("{label}, p = {p}"),
                &action,
                p,
                2,
                &lattice_scales(p, depth),
            )?);
        }
    }
    let trivial = LatticeAction::trivial(2, 1);
    out.push(lattice_scenario(
        "Z^2 trivial, p = 3",
        &trivial,
        3,
        2,
        &lattice_scales(3, depth),
    )?);
    for (p, k) in [(3u64, 3u32), (5, 3)] {
        let pp = PrimePower::new(p, k).map_err(GroupError::from)?;
        let g = congruence_kernel(ClassicalFamily::SL, 2, pp, 1, cap)?;
        let tower = lower_p_series(&g, cap)?.terms().to_vec();
        for action in sl2_kernel_actions(pp)? {
            let ell = if action.order() % 3 == 0 { 3 } else { 2 };
            out.push(finite_scenario(
                &format!("SL2 mod {p}^{k} p-series, {}", action.label()),
                &tower,
                &action,
                ell,
            )?);
        }
    }
    Ok(out)
}
