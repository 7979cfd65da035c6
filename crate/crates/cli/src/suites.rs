//! Built-in verification suites, one per acceptance criterion.

use clap::ValueEnum;
use num::rational::Ratio;
use num::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use ptower_core::arith::{NumberFieldData, SplitGroupData};
use ptower_core::betti::{chi_finite_index, euler_char, FlModule, GroupDescriptor};
use ptower_core::catalog::{
    adem_scenarios, coprime_h1_cases, finite_counting_reports, small_lattice_actions, uniform_cases,
};
use ptower_core::cohomology::{
    h1_lattice, h1_lattice_brute_force, representatives_reduce_injectively,
    verify_counting_lattice, LatticeAction,
};
use ptower_core::lefschetz::qmat::{q, QMat};
use ptower_core::lefschetz::{
    derived_center_split, euler_sign, fixed_subalgebra, killing_form, q_from_dim_sign, signature,
    sl, so, su,
};
use ptower_core::linalg::IntMat;
use ptower_core::smith::{chain_check, lattice_scales, lattice_scenario};

use crate::config::{ExponentRow, GroupRef};
use crate::report::Record;
use crate::scenario::{
    exponent_records, ANCHOR_ADEM, ANCHOR_COUNTING, ANCHOR_EXPONENT, ANCHOR_H1, ANCHOR_KILLING,
    ANCHOR_LATTICE, ANCHOR_UNIFORM,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LemmaH1,
    PropUniform,
    Adem,
    Counting,
    Counterexample,
    ExponentsPaper,
    LefschetzSigns,
    Oracle,
}

impl Suite {
    pub fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

pub fn run(suite: Suite, cap: usize) -> anyhow::Result<Vec<Record>> {
    match suite {
        Suite::LemmaH1 => lemma_h1(cap),
        Suite::PropUniform => prop_uniform(cap),
        Suite::Adem => adem(cap),
        Suite::Counting => counting(cap),
        Suite::Counterexample => counterexample(),
        Suite::ExponentsPaper => Ok(exponent_records(&reference_exponent_rows())?),
        Suite::LefschetzSigns => lefschetz_signs(),
        Suite::Oracle => oracle(),
    }
}

fn lemma_h1(cap: usize) -> anyhow::Result<Vec<Record>> {
    Ok(coprime_h1_cases(cap)?
        .into_iter()
        .map(|c| {
            let computed =
                json!({ "classes": c.classes, "order": c.group_order, "theta": c.theta_order });
            let expected = json!({ "classes": 1, "order": c.group_order, "theta": c.theta_order });
            Record::compare(c.label, ANCHOR_H1, computed, expected)
        })
        .collect())
}

fn prop_uniform(cap: usize) -> anyhow::Result<Vec<Record>> {
    let mut out = Vec::new();
    for c in uniform_cases(cap)? {
        let series = json!({ "orders": c.series_orders, "fixed_orders": c.fixed_series_orders, "match": c.series_match });
        let ok = c.series_match.iter().all(|&b| b);
        out.push(Record::check(
            format!("{}: series", c.label),
            ANCHOR_UNIFORM,
            series,
            ok,
        ));
        out.push(Record::compare(
            format!("{}: Frattini dimensions", c.label),
            ANCHOR_UNIFORM,
            c.frattini_quotient_fixed_dim,
            c.fixed_frattini_dim,
        ));
    }
    Ok(out)
}

fn adem(cap: usize) -> anyhow::Result<Vec<Record>> {
    let mut out = Vec::new();
    for sc in adem_scenarios(cap, 4)? {
        let mut checks = Vec::new();
        for lv in &sc.levels {
            for r in 0..=3 {
                checks.push(chain_check(&sc, lv.level, r)?);
            }
        }
        let ok = checks.iter().all(|c| c.holds);
        let worst = checks.iter().find(|c| !c.holds).or(checks.first());
        let computed = json!({ "checks": checks.len(), "first_failure_or_sample": worst });
        out.push(Record::check(sc.label.clone(), ANCHOR_ADEM, computed, ok));
    }
    for d in 1..=3usize {
        let sc = lattice_scenario(
            "inversion",
            &LatticeAction::inversion(d),
            3,
            2,
            &lattice_scales(3, 3),
        )?;
        let sides = sc
            .levels
            .iter()
            .map(|lv| chain_check(&sc, lv.level, 0).map(|c| (c.tail, c.adem)))
            .collect::<Result<Vec<_>, _>>()?;
        let want: Vec<(Option<u128>, u128)> = vec![(Some(1 << d), 1 << d); sides.len()];
        out.push(Record::compare(
            format!("Z^{d} inversion, ℓ = 2, r = 0: equality"),
            ANCHOR_ADEM,
            sides,
            want,
        ));
    }
    Ok(out)
}

fn counting(cap: usize) -> anyhow::Result<Vec<Record>> {
    let mut out = Vec::new();
    for (label, action) in small_lattice_actions() {
        let f = action.fixed_rank()? as u32;
        for p in [3u64, 5] {
            for n in 1..=4 {
                let r = verify_counting_lattice(&action, p, n)?;
                let ok =
                    r.passed() && r.delta == f && r.quotient_fixed == (p as u128).pow((n - 1) * f);
                out.push(Record::check(
                    format!("{label}, p = {p}, n = {n}"),
                    ANCHOR_COUNTING,
                    &r,
                    ok,
                ));
            }
        }
    }
    for (label, r) in finite_counting_reports(cap)? {
        let ok = r.passed();
        out.push(Record::check(label, ANCHOR_COUNTING, r, ok));
    }
    Ok(out)
}

fn counterexample() -> anyhow::Result<Vec<Record>> {
    let m = FlModule::cyclic_shift_sum_zero(2, 3)?;
    Ok(vec![
        Record::compare(
            "H0(Z, M), H1(Z, M) for the cyclic shift on sum-zero F_2^3",
            ANCHOR_ADEM,
            m.cohomology_of_z(),
            (0, 0),
        ),
        Record::compare("H0(trivial group, M)", ANCHOR_ADEM, m.h0_trivial_group(), 2),
        Record::check(
            "fixed-point inequality fails without a finite quotient",
            ANCHOR_ADEM,
            json!({ "lhs": 0, "rhs": m.h0_trivial_group() }),
            m.cohomology_of_z().0 + m.cohomology_of_z().1 < m.h0_trivial_group(),
        ),
    ])
}

fn field(degree: u32, real: u32, complex: u32) -> NumberFieldData {
    NumberFieldData::new(degree, real, complex).expect("consistent field")
}

fn ratio(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rows with known closed-form values.
pub fn reference_exponent_rows() -> Vec<ExponentRow> {
    let mut rows = vec![
        ExponentRow::Theorem1 {
            dim_fixed: 4,
            lambda: 0,
            dim_g: 8,
            alpha: "1".into(),
            expected: Some("1/2".into()),
        },
        ExponentRow::Theorem1 {
            dim_fixed: 8,
            lambda: 0,
            dim_g: 8,
            alpha: "1".into(),
            expected: Some("1".into()),
        },
        ExponentRow::Theorem1 {
            dim_fixed: 3,
            lambda: 3,
            dim_g: 8,
            alpha: "1".into(),
            expected: Some("0".into()),
        },
        ExponentRow::Basechange {
            group: GroupRef::Sl { n: 2 },
            field: NumberFieldData::rationals(),
            extension_degree: 1,
            expected: Some("1".into()),
        },
        ExponentRow::Basechange {
            group: GroupRef::Sp { n: 2 },
            field: NumberFieldData::rationals(),
            extension_degree: 2,
            expected: Some("1/2".into()),
        },
    ];
    for n in 1..=5u32 {
        for m in 0..=3u32 {
            // n(2n+1)/(2^m(4n²−1)) as the composition with α = 2^{−m}
            let d = Ratio::new((n * (2 * n + 1)) as i64, (4 * n * n - 1) as i64)
                * Ratio::new(1, 1i64 << m);
            rows.push(ExponentRow::Sl2n {
                n,
                m,
                base: NumberFieldData::rationals(),
                ext: field(1 << m, 1 << m, 0),
                expected: Some(ratio(d)),
            });
        }
    }
    for (g, deg, s) in [
        (GroupRef::Sl { n: 2 }, 2, 1),
        (GroupRef::Sl { n: 3 }, 2, 1),
        (GroupRef::Sp { n: 2 }, 4, 2),
    ] {
        let imaginary = deg % 2 == 0;
        let f = if imaginary {
            field(deg, 0, deg / 2)
        } else {
            field(deg, deg, 0)
        };
        let data = g.resolve().expect("built-in group");
        let alpha = Ratio::new((data.rank * (deg - s + 1)) as i64, (data.dim * deg) as i64);
        rows.push(ExponentRow::Split {
            group: g,
            field: f,
            places: s,
            ell: 2,
            expected: Some(ratio(alpha)),
        });
    }
    rows
}

fn lefschetz_signs() -> anyhow::Result<Vec<Record>> {
    let mut out = Vec::new();
    let g = sl(2)?;
    let s = signature(&killing_form(g.algebra()));
    out.push(Record::compare(
        "sl2 Killing signature",
        ANCHOR_KILLING,
        [s.n_plus, s.n_minus],
        [2, 1],
    ));
    out.push(Record::compare(
        "sl2: q from 2q = dim + sign",
        ANCHOR_KILLING,
        q_from_dim_sign(3, s.sign())?,
        2,
    ));
    for c in [so(3)?, so(4)?, so(5)?, su(2)?, su(3)?] {
        let s = signature(&killing_form(c.algebra()));
        let q = q_from_dim_sign(c.algebra().dim() as u32, s.sign())?;
        out.push(Record::compare(
            format!("{}: compact form", c.algebra().label()),
            ANCHOR_KILLING,
            q,
            0,
        ));
    }
    let g3 = sl(3)?;
    let mut d = QMat::identity(3);
    d.set(0, 0, q(-1));
    d.set(1, 1, q(-1));
    let tau = g3.adjoint(&d, 8)?;
    let fixed = fixed_subalgebra(g3.algebra(), &tau)?;
    out.push(Record::compare(
        "sl3, Ad(diag(-1,-1,1)): fixed dimension",
        ANCHOR_KILLING,
        fixed.len(),
        4,
    ));
    let split = derived_center_split(g3.algebra(), &fixed)?;
    let sd = signature(&killing_form(g3.algebra()).restrict(&split.derived));
    out.push(Record::compare(
        "sl3, Ad(diag(-1,-1,1)): q of the fixed derived algebra",
        ANCHOR_KILLING,
        q_from_dim_sign(split.derived.len() as u32, sd.sign())?,
        2,
    ));
    out.push(Record::compare(
        "euler_sign(2)",
        ANCHOR_KILLING,
        euler_sign(2).value(),
        -1,
    ));
    let chi = chi_finite_index(Ratio::new(-1, 6), 12)?;
    let free = euler_char(&GroupDescriptor::Free { rank: 3 });
    out.push(Record::compare(
        "χ(Γ(3)) from χ(SL2(Z)) = -1/6 and index 12",
        ANCHOR_KILLING,
        ratio(chi),
        free.to_string(),
    ));
    out.push(Record::check(
        "sign of χ(Γ(3)) matches (-1)^q",
        ANCHOR_KILLING,
        free,
        euler_sign(2).admits(free),
    ));
    let sp4 = SplitGroupData::sp(2)?;
    out.push(Record::compare(
        "Sp4: q from the compact dimension",
        ANCHOR_EXPONENT,
        sp4.q(),
        Some(3),
    ));
    Ok(out)
}

fn oracle() -> anyhow::Result<Vec<Record>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    while out.len() < 100 {
        let d = rng.gen_range(1..=3usize);
        let data: Vec<i64> = (0..d * d).map(|_| rng.gen_range(-2..=2)).collect();
        let a = IntMat::new(d, d, data)?;
        let Some(m) = a.order(6) else { continue };
        let action = LatticeAction::new(a.clone(), m as u64)?;
        let h = h1_lattice(&action)?;
        let bf = h1_lattice_brute_force(&action)?;
        let injective = representatives_reduce_injectively(&action, &h)?;
        let computed = json!({ "snf": h.order(), "enumeration": bf.order, "injective": injective });
        out.push(Record::check(
            format!("{:?}, order {m}", a.to_rows()),
            ANCHOR_LATTICE,
            computed,
            h.order() == Some(bf.order) && injective,
        ));
    }
    Ok(out)
}
