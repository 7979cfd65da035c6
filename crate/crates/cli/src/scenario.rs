//! Checks driven by a single scenario config.

use std::sync::Arc;

use num::Rational64;
use ptower_core::arith::{
    basechange_exponent, sl2n_example_report, split_groups_exponent, theorem1_exponent,
};
use ptower_core::cohomology::{
    h1_finite, h1_lattice, h1_lattice_brute_force, representatives_reduce_injectively,
    verify_counting_finite, verify_counting_lattice, LatticeAction,
};
use ptower_core::groups::{
    congruence_kernel, fixed_subgroup, frattini, lower_p_series, p_group_prime, quotient,
    AbelianRule, FiniteGroup, GroupRule, MatrixRule, ThetaAction,
};
use ptower_core::lefschetz::qmat::QMat;
use ptower_core::lefschetz::{
    derived_center_split, euler_sign, fixed_subalgebra, killing_form, q_from_dim_sign, signature,
    sl, so, sp, su, MatrixLieAlgebra,
};
use ptower_core::linalg::{IntMat, MatZpk, PrimePower};
use ptower_core::smith::{chain_check, finite_scenario, lattice_scales, lattice_scenario};
use serde_json::json;

use crate::config::{
    ActionSpec, AlgebraFamily, AlgebraSpec, ConfigError, Expected, ExponentRow, GroupSpec,
    ScenarioConfig,
};
use crate::report::{Record, Status};

pub const ANCHOR_H1: &str = "coprime actions on finite p-groups have trivial H1";
pub const ANCHOR_SERIES: &str = "lower p-series by iterated Frattini subgroups";
pub const ANCHOR_UNIFORM: &str = "fixed points commute with the lower p-series of a uniform group";
pub const ANCHOR_COUNTING: &str = "counting identity along the pointed exact sequence";
pub const ANCHOR_ADEM: &str = "Smith-Floyd and Adem fixed-point inequalities";
pub const ANCHOR_LATTICE: &str = "H1 of a lattice as ker N / im(A - I)";
pub const ANCHOR_EXPONENT: &str = "growth exponent d = (dim G^Θ - λ)/dim G times α";
pub const ANCHOR_KILLING: &str = "Killing form signature gives 2q = dim + sign";

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn int_mat(rows: &[Vec<i64>]) -> Result<IntMat, ConfigError> {
    IntMat::from_rows(rows).map_err(|e| invalid(e.to_string()))
}

/// A materialized finite group with its action, for either element type.
pub enum BuiltGroup {
    Abelian(FiniteGroup<AbelianRule>, ThetaAction<AbelianRule>),
    Matrix(FiniteGroup<MatrixRule>, ThetaAction<MatrixRule>),
}

pub fn build_group(
    group: &GroupSpec,
    action: &ActionSpec,
    cap: usize,
) -> anyhow::Result<BuiltGroup> {
    match group {
        GroupSpec::Abelian { moduli } => {
            let rule = Arc::new(AbelianRule::new(moduli.clone())?);
            let g = FiniteGroup::closure(rule.clone(), rule.basis(), cap)?;
            let a = match action {
                ActionSpec::Trivial { order } => ThetaAction::trivial(*order),
                ActionSpec::Inversion => ThetaAction::inversion(rule.clone()),
                ActionSpec::Linear { matrix, order } => {
                    if matrix.len() != moduli.len() {
                        return Err(invalid(
                            "linear action size differs from the number of moduli",
                        )
                        .into());
                    }
                    ThetaAction::linear(rule.clone(), &int_mat(matrix)?, *order, "linear")
                        .map_err(|e| invalid(e.to_string()))?
                }
                _ => {
                    return Err(
                        invalid("abelian groups take trivial, inversion or linear actions").into(),
                    )
                }
            };
            a.validate_on(&g).map_err(|e| invalid(e.to_string()))?;
            Ok(BuiltGroup::Abelian(g, a))
        }
        GroupSpec::CongruenceKernel {
            family,
            n,
            p,
            k,
            level,
        } => {
            let pp = PrimePower::new(*p, *k)?;
            let g = congruence_kernel(*family, *n, pp, *level, cap)?;
            Ok(BuiltGroup::Matrix(
                g.clone(),
                matrix_action(action, pp, &g)?,
            ))
        }
        GroupSpec::MatrixGenerators { p, k, generators } => {
            let pp = PrimePower::new(*p, *k)?;
            let n = generators.first().map_or(0, Vec::len);
            let rule = Arc::new(MatrixRule::new(pp, n));
            let gens = generators
                .iter()
                .map(|m| MatZpk::from_rows(pp, m).map_err(|e| invalid(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let g = FiniteGroup::closure(rule, gens, cap).map_err(|e| invalid(e.to_string()))?;
            if p_group_prime(&g)? != Some(*p) && g.order() > 1 {
                return Err(invalid(format!(
                    "the generated group of order {} is not a {p}-group",
                    g.order()
                ))
                .into());
            }
            Ok(BuiltGroup::Matrix(
                g.clone(),
                matrix_action(action, pp, &g)?,
            ))
        }
    }
}

fn matrix_action(
    action: &ActionSpec,
    pp: PrimePower,
    g: &FiniteGroup<MatrixRule>,
) -> anyhow::Result<ThetaAction<MatrixRule>> {
    let a = match action {
        ActionSpec::Trivial { order } => ThetaAction::trivial(*order),
        ActionSpec::TransposeInverse => ThetaAction::transpose_inverse(),
        ActionSpec::Conjugation { matrix, order } => {
            let c = MatZpk::from_rows(pp, matrix).map_err(|e| invalid(e.to_string()))?;
            ThetaAction::conjugation(c, *order, "conjugation")
                .map_err(|e| invalid(e.to_string()))?
        }
        _ => {
            return Err(invalid(
                "matrix groups take trivial, transpose-inverse or conjugation actions",
            )
            .into())
        }
    };
    a.validate_on(g).map_err(|e| invalid(e.to_string()))?;
    Ok(a)
}

fn log_p(mut n: usize, p: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        n /= p as usize;
        e += 1;
    }
    e
}

fn finite_verify<R: GroupRule + 'static>(
    g: &FiniteGroup<R>,
    action: &ThetaAction<R>,
    ell: Option<u64>,
    expected: &Expected,
    cap: usize,
) -> anyhow::Result<Vec<Record>> {
    let mut out = Vec::new();
    let p = p_group_prime(g)?.unwrap_or(1);
    let coprime = gcd(action.order(), p) == 1;
    let classes = h1_finite(g, action)?.len() as u128;
    let h1_expected = expected.h1_classes.map(u128::from).or(coprime.then_some(1));
    out.push(Record::optional(
        "H1 classes",
        ANCHOR_H1,
        classes,
        h1_expected,
    ));

    let series = lower_p_series(g, cap)?;
    out.push(Record::check(
        "series quotients elementary abelian",
        ANCHOR_SERIES,
        series.orders(),
        series.verify().is_ok(),
    ));
    if let Some(e) = &expected.series_orders {
        out.push(Record::compare(
            "series orders",
            ANCHOR_SERIES,
            series.orders(),
            e,
        ));
    }

    let fixed = fixed_subgroup(g, action)?;
    let fixed_series = lower_p_series(&fixed, cap)?;
    let len = series.terms().len().max(fixed_series.terms().len()) + 1;
    let matches = (1..=len)
        .map(|i| Ok(fixed_subgroup(series.term(i), action)?.same_elements(fixed_series.term(i))))
        .collect::<anyhow::Result<Vec<bool>>>()?;
    let all = matches.iter().all(|&b| b);
    out.push(Record::optional(
        "fixed series match",
        ANCHOR_UNIFORM,
        all,
        expected.fixed_series_match,
    ));
    if p > 1 {
        let phi = frattini(g, cap)?;
        let (q, _) = quotient(g, &phi)?;
        let q_fixed = fixed_subgroup(&q, &action.on_quotient(q.rule().clone()))?;
        let dims = [
            log_p(q_fixed.order(), p),
            log_p(fixed.order() / frattini(&fixed, cap)?.order(), p),
        ];
        let ok = expected
            .fixed_series_match
            .map(|b| b == (dims[0] == dims[1]));
        out.push(match ok {
            Some(ok) => Record::check(
                "Frattini quotient fixed dimensions",
                ANCHOR_UNIFORM,
                dims,
                ok,
            ),
            None => Record::optional(
                "Frattini quotient fixed dimensions",
                ANCHOR_UNIFORM,
                dims,
                None,
            ),
        });
    }

    for (i, term) in series.terms().iter().enumerate() {
        let n = i as u32 + 1;
        let name = format!("counting identity, n = {n}");
        if !coprime {
            out.push(Record::optional(
                name,
                ANCHOR_COUNTING,
                "|Θ| not coprime to p",
                None,
            ));
            continue;
        }
        let r = verify_counting_finite(g, term, n, action, cap)?;
        out.push(Record::check(name, ANCHOR_COUNTING, &r, r.passed()));
    }

    if let Some(ell) = ell {
        match finite_scenario("config", series.terms(), action, ell) {
            Ok(sc) => {
                for lv in &sc.levels {
                    for r in 0..=2 {
                        let c = chain_check(&sc, lv.level, r)?;
                        out.push(Record::check(
                            format!("chain, n = {}, r = {r}", lv.level),
                            ANCHOR_ADEM,
                            &c,
                            c.holds,
                        ));
                    }
                }
            }
            Err(e) => out.push(Record::error("fixed-point scenario", ANCHOR_ADEM, e)),
        }
    }
    Ok(out)
}

fn lattice_action(matrix: &[Vec<i64>], order: Option<u64>) -> Result<LatticeAction, ConfigError> {
    let a = int_mat(matrix)?;
    let order = match order {
        Some(m) => m,
        None => a
            .order(24)
            .ok_or_else(|| invalid("matrix has no finite order up to 24; give `order`"))?
            as u64,
    };
    LatticeAction::new(a, order).map_err(|e| invalid(e.to_string()))
}

fn lattice_verify(
    action: &LatticeAction,
    p: Option<u64>,
    ell: Option<u64>,
    depth: u32,
    expected: &Expected,
) -> anyhow::Result<Vec<Record>> {
    let mut out = Vec::new();
    let h = h1_lattice(action)?;
    let bf = h1_lattice_brute_force(action)?;
    out.push(Record::compare(
        "H1 order: SNF against fixed-point count",
        ANCHOR_LATTICE,
        h.order(),
        Some(bf.order),
    ));
    out.push(Record::check(
        "representatives reduce injectively",
        ANCHOR_LATTICE,
        h.torsion(),
        representatives_reduce_injectively(action, &h)?,
    ));
    if let Some(e) = expected.h1_classes {
        out.push(Record::compare(
            "H1 classes",
            ANCHOR_LATTICE,
            h.order(),
            Some(u128::from(e)),
        ));
    }
    if let Some(p) = p {
        if action.order().is_multiple_of(p) {
            out.push(Record::optional(
                "counting identity",
                ANCHOR_COUNTING,
                "p divides |Θ|",
                None,
            ));
        } else {
            for n in 1..=depth {
                let r = verify_counting_lattice(action, p, n)?;
                out.push(Record::check(
                    format!("counting identity, n = {n}"),
                    ANCHOR_COUNTING,
                    &r,
                    r.passed(),
                ));
            }
            if let Some(ell) = ell {
                match lattice_scenario("config", action, p, ell, &lattice_scales(p, depth)) {
                    Ok(sc) => {
                        for lv in &sc.levels {
                            for r in 0..=action.dim() {
                                let c = chain_check(&sc, lv.level, r)?;
                                out.push(Record::check(
                                    format!("chain, n = {}, r = {r}", lv.level),
                                    ANCHOR_ADEM,
                                    &c,
                                    c.holds,
                                ));
                            }
                        }
                    }
                    Err(e) => out.push(Record::error("fixed-point scenario", ANCHOR_ADEM, e)),
                }
            }
        }
    }
    Ok(out)
}

fn build_algebra(spec: &AlgebraSpec) -> anyhow::Result<MatrixLieAlgebra> {
    let r = match spec.family {
        AlgebraFamily::Sl => sl(spec.n),
        AlgebraFamily::So => so(spec.n),
        AlgebraFamily::Sp => sp(spec.n),
        AlgebraFamily::Su => su(spec.n),
    };
    r.map_err(|e| invalid(e.to_string()).into())
}

fn lie_verify(
    spec: &AlgebraSpec,
    adjoint: Option<&[Vec<i64>]>,
    max_order: u32,
    expected: &Expected,
) -> anyhow::Result<Vec<Record>> {
    let mut out = Vec::new();
    let g = build_algebra(spec)?;
    let b = killing_form(g.algebra());
    let s = signature(&b);
    out.push(Record::optional(
        "Killing signature",
        ANCHOR_KILLING,
        [s.n_plus, s.n_minus],
        expected.signature,
    ));
    if s.n_zero == 0 {
        let q = q_from_dim_sign(g.algebra().dim() as u32, s.sign())?;
        out.push(Record::optional("q", ANCHOR_KILLING, q, expected.q));
        out.push(Record::check(
            "Euler characteristic sign",
            ANCHOR_KILLING,
            euler_sign(q).value(),
            true,
        ));
    }
    if let Some(m) = adjoint {
        let n = m.len();
        let entries: Vec<i64> = m.iter().flatten().copied().collect();
        let tau = g.adjoint(&QMat::from_i64(n, n, &entries), max_order)?;
        out.push(Record::check(
            "automorphism preserves the Killing form",
            ANCHOR_KILLING,
            tau.order(),
            tau.preserves(&b),
        ));
        let fixed = fixed_subalgebra(g.algebra(), &tau)?;
        out.push(Record::optional(
            "fixed dimension",
            ANCHOR_KILLING,
            fixed.len(),
            expected.fixed_dim,
        ));
        match derived_center_split(g.algebra(), &fixed) {
            Ok(split) => {
                let sd = signature(&b.restrict(&split.derived));
                let qf = q_from_dim_sign(split.derived.len() as u32, sd.sign())?;
                let computed = json!({ "center": split.center.len(), "derived": split.derived.len(), "q": qf });
                out.push(Record::check(
                    "fixed reductive split",
                    ANCHOR_KILLING,
                    computed,
                    true,
                ));
            }
            Err(e) => out.push(Record::error("fixed reductive split", ANCHOR_KILLING, e)),
        }
    }
    Ok(out)
}

fn ratio_string(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_ratio(s: &str) -> Result<Rational64, ConfigError> {
    s.trim()
        .parse::<Rational64>()
        .map_err(|_| invalid(format!("`{s}` is not a rational number")))
}

/// One record per row; a failing precondition fails only its row.
pub fn exponent_records(rows: &[ExponentRow]) -> Result<Vec<Record>, ConfigError> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| exponent_record(i, row))
        .collect()
}

fn exponent_record(i: usize, row: &ExponentRow) -> Result<Record, ConfigError> {
    let (name, computed, expected) = match row {
        ExponentRow::Theorem1 {
            dim_fixed,
            lambda,
            dim_g,
            alpha,
            expected,
        } => {
            let alpha = parse_ratio(alpha)?;
            let v = theorem1_exponent(*dim_fixed, *lambda, *dim_g, alpha)
                .map(|d| json!({ "exponent": ratio_string(d) }));
            (
                format!(
                    "row {i}: d·α for ({dim_fixed}, {lambda}, {dim_g}, {})",
                    ratio_string(alpha)
                ),
                v,
                expected,
            )
        }
        ExponentRow::Basechange {
            group,
            field,
            extension_degree,
            expected,
        } => {
            let v = group.resolve().and_then(|g| basechange_exponent(&g, field, *extension_degree)).map(|r| {
                json!({ "exponent": ratio_string(r.exponent), "m": r.m, "start_degree": r.start_degree })
            });
            (
                format!("row {i}: base change of degree {extension_degree}"),
                v,
                expected,
            )
        }
        ExponentRow::Sl2n {
            n,
            m,
            base,
            ext,
            expected,
        } => {
            let v = sl2n_example_report(*n, *m, base, ext).map(|r| {
                json!({ "exponent": ratio_string(r.exponent), "start_degree": r.start_degree, "vcd": r.vcd })
            });
            (format!("row {i}: SL_2n, n = {n}, m = {m}"), v, expected)
        }
        ExponentRow::Split {
            group,
            field,
            places,
            ell,
            expected,
        } => {
            let v = group.resolve().and_then(|g| split_groups_exponent(&g, field, *places, *ell)).map(|r| {
                json!({ "exponent": ratio_string(r.alpha), "start_degree": r.start_degree, "lambda": r.lambda })
            });
            (format!("row {i}: split group, |S| = {places}"), v, expected)
        }
    };
    let expected = expected.as_deref().map(parse_ratio).transpose()?;
    Ok(match computed {
        Err(e) => Record::error(name, ANCHOR_EXPONENT, e),
        Ok(v) => {
            let ok = match expected {
                Some(e) => v["exponent"] == json!(ratio_string(e)),
                None => true,
            };
            Record {
                name,
                anchor: ANCHOR_EXPONENT.into(),
                computed: v,
                expected: expected.map(|e| json!({ "exponent": ratio_string(e) })),
                status: if ok { Status::Pass } else { Status::Fail },
            }
        }
    })
}

/// All checks that apply to a config.
pub fn verify(cfg: &ScenarioConfig, cap: usize) -> anyhow::Result<Vec<Record>> {
    match cfg {
        ScenarioConfig::FiniteGroup {
            group,
            action,
            ell,
            expected,
            ..
        } => match build_group(group, action, cap)? {
            BuiltGroup::Abelian(g, a) => finite_verify(&g, &a, *ell, expected, cap),
            BuiltGroup::Matrix(g, a) => finite_verify(&g, &a, *ell, expected, cap),
        },
        ScenarioConfig::Lattice {
            matrix,
            order,
            p,
            ell,
            depth,
            expected,
            ..
        } => lattice_verify(&lattice_action(matrix, *order)?, *p, *ell, *depth, expected),
        ScenarioConfig::Exponent { rows } => Ok(exponent_records(rows)?),
        ScenarioConfig::LieAlgebra {
            algebra,
            adjoint,
            max_order,
            expected,
            ..
        } => lie_verify(algebra, adjoint.as_deref(), *max_order, expected),
    }
}

fn finite_h1<R: GroupRule>(
    g: &FiniteGroup<R>,
    action: &ThetaAction<R>,
    expected: &Expected,
) -> anyhow::Result<Vec<Record>> {
    let h = h1_finite(g, action)?;
    let reps: Vec<String> = h
        .representatives()
        .iter()
        .map(|c| format!("{:?}", c.at_generator()))
        .collect();
    let computed = json!({
        "classes": h.len(),
        "cocycles": h.total_cocycles(),
        "class_sizes": h.sizes(),
        "representatives": reps,
    });
    let mut out = vec![Record::check("H1", ANCHOR_H1, computed, true)];
    if let Some(e) = expected.h1_classes {
        out.push(Record::compare("H1 classes", ANCHOR_H1, h.len() as u64, e));
    }
    Ok(out)
}

/// `H¹(Θ, G)` with class representatives.
pub fn h1(cfg: &ScenarioConfig, cap: usize) -> anyhow::Result<Vec<Record>> {
    match cfg {
        ScenarioConfig::FiniteGroup {
            group,
            action,
            expected,
            ..
        } => match build_group(group, action, cap)? {
            BuiltGroup::Abelian(g, a) => finite_h1(&g, &a, expected),
            BuiltGroup::Matrix(g, a) => finite_h1(&g, &a, expected),
        },
        ScenarioConfig::Lattice {
            matrix,
            order,
            expected,
            ..
        } => {
            let action = lattice_action(matrix, *order)?;
            let h = h1_lattice(&action)?;
            let computed = json!({
                "classes": h.order(),
                "torsion": h.torsion(),
                "free_rank": h.free_rank(),
                "representatives": h.class_representatives(),
            });
            let mut out = vec![Record::check("H1", ANCHOR_LATTICE, computed, true)];
            if let Some(e) = expected.h1_classes {
                out.push(Record::compare(
                    "H1 classes",
                    ANCHOR_LATTICE,
                    h.order(),
                    Some(u128::from(e)),
                ));
            }
            Ok(out)
        }
        other => Err(invalid(format!(
            "h1 needs a finite-group or lattice config, got {}",
            other.kind()
        ))
        .into()),
    }
}

fn finite_series<R: GroupRule>(
    g: &FiniteGroup<R>,
    expected: &Expected,
    cap: usize,
) -> anyhow::Result<Vec<Record>> {
    let s = lower_p_series(g, cap)?;
    let computed = json!({
        "prime": s.prime(),
        "orders": s.orders(),
        "quotient_ranks": s.quotient_ranks(),
    });
    let mut out = vec![Record::check(
        "lower p-series",
        ANCHOR_SERIES,
        computed,
        s.verify().is_ok(),
    )];
    if let Some(e) = &expected.series_orders {
        out.push(Record::compare(
            "series orders",
            ANCHOR_SERIES,
            s.orders(),
            e,
        ));
    }
    Ok(out)
}

/// Lower `p`-series orders of the group in a finite-group config.
pub fn series(cfg: &ScenarioConfig, cap: usize) -> anyhow::Result<Vec<Record>> {
    match cfg {
        ScenarioConfig::FiniteGroup {
            group,
            action,
            expected,
            ..
        } => match build_group(group, action, cap)? {
            BuiltGroup::Abelian(g, _) => finite_series(&g, expected, cap),
            BuiltGroup::Matrix(g, _) => finite_series(&g, expected, cap),
        },
        other => Err(invalid(format!(
            "series needs a finite-group config, got {}",
            other.kind()
        ))
        .into()),
    }
}
