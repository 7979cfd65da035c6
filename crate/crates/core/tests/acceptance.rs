//! One PASS/FAIL line per acceptance criterion. Runs with its own harness so
//! the lines always print; any failure makes the target exit non-zero.

use std::time::{Duration, Instant};

use num::rational::Ratio;
use num::{BigRational, One, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptower_core::arith::{
    basechange_exponent, sl2n_example_report, split_groups_exponent, theorem1_exponent,
    NumberFieldData, SplitGroupData,
};
use ptower_core::betti::{
    betti_mod_l, chi_finite_index, euler_char, tail_sum, FlModule, GroupDescriptor,
};
use ptower_core::catalog::{
    adem_scenarios, coprime_h1_cases, finite_counting_reports, small_lattice_actions, uniform_cases,
};
use ptower_core::cohomology::{
    h1_lattice, h1_lattice_brute_force, representatives_reduce_injectively,
    verify_counting_lattice, LatticeAction,
};
use ptower_core::groups::default_cap;
use ptower_core::lefschetz::qmat::QMat;
use ptower_core::lefschetz::{
    derived_center_split, euler_sign, fixed_subalgebra, killing_form, q_from_dim_sign, signature,
    sl, so, su, EulerSign,
};
use ptower_core::linalg::IntMat;
use ptower_core::smith::chain_check;

type Outcome = Result<String, String>;

/// Name, check and optional time budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn coprime_h1() -> Outcome {
    let cases = coprime_h1_cases(default_cap()).map_err(err)?;
    let eligible: Vec<_> = cases
        .iter()
        .filter(|c| matches!(c.theta_order, 2 | 3))
        .collect();
    ensure(eligible.len() >= 50, || {
        format!("only {} cases with |Θ| ∈ {{2, 3}}", eligible.len())
    })?;
    for c in &cases {
        let bound = if c.p == 3 { 729 } else { 625 };
        ensure(c.group_order <= bound, || {
            format!("{}: order {} too large", c.label, c.group_order)
        })?;
        ensure(c.theta_order % c.p != 0, || {
            format!("{}: |Θ| not coprime to p", c.label)
        })?;
        ensure(c.classes == 1, || {
            format!("{}: {} classes", c.label, c.classes)
        })?;
    }
    Ok(format!(
        "{} cases ({} with |Θ| ∈ {{2, 3}}), all |H¹| = 1",
        cases.len(),
        eligible.len()
    ))
}

fn uniform_series() -> Outcome {
    let cases = uniform_cases(default_cap()).map_err(err)?;
    ensure(!cases.is_empty(), || "no cases".into())?;
    for c in &cases {
        ensure(c.series_match.iter().all(|&b| b), || {
            format!("{}: series mismatch {:?}", c.label, c.series_match)
        })?;
        ensure(
            c.frattini_quotient_fixed_dim == c.fixed_frattini_dim,
            || {
                format!(
                    "{}: {} vs {}",
                    c.label, c.frattini_quotient_fixed_dim, c.fixed_frattini_dim
                )
            },
        )?;
    }
    Ok(format!("{} kernels with actions", cases.len()))
}

fn counting() -> Outcome {
    let mut checked = 0;
    for (label, action) in small_lattice_actions() {
        let f = action.fixed_rank().map_err(err)? as u32;
        for p in [3u64, 5] {
            for n in 1..=4 {
                let r = verify_counting_lattice(&action, p, n).map_err(err)?;
                ensure(r.passed(), || format!("{label}, p = {p}, n = {n}: {r:?}"))?;
                ensure(r.delta == f, || {
                    format!("{label}: δ = {} but fixed rank {f}", r.delta)
                })?;
                ensure(r.quotient_fixed == (p as u128).pow((n - 1) * f), || {
                    format!(
                        "{label}, p = {p}, n = {n}: |(U/P_n)^Θ| = {}",
                        r.quotient_fixed
                    )
                })?;
                checked += 1;
            }
        }
    }
    let finite = finite_counting_reports(default_cap()).map_err(err)?;
    for (label, r) in &finite {
        ensure(r.passed(), || format!("{label}: {r:?}"))?;
    }
    Ok(format!(
        "{checked} lattice levels, {} finite levels",
        finite.len()
    ))
}

fn adem() -> Outcome {
    let mut checked = 0;
    for sc in adem_scenarios(default_cap(), 4).map_err(err)? {
        for lv in &sc.levels {
            for r in 0..=3 {
                let c = chain_check(&sc, lv.level, r).map_err(err)?;
                ensure(c.holds, || format!("{}: {c:?}", sc.label))?;
                checked += 1;
            }
        }
    }
    for d in 1..=3usize {
        let sc = ptower_core::smith::lattice_scenario(
            "inversion",
            &LatticeAction::inversion(d),
            3,
            2,
            &ptower_core::smith::lattice_scales(3, 3),
        )
        .map_err(err)?;
        let torus =
            betti_mod_l(&GroupDescriptor::FreeAbelian { rank: d as u32 }, 2).map_err(err)?;
        let expected = 1u128 << d;
        ensure(tail_sum(&torus, 0, None).map_err(err)? == expected, || {
            "tail of the torus".into()
        })?;
        for lv in &sc.levels {
            let c = chain_check(&sc, lv.level, 0).map_err(err)?;
            ensure(c.tail == Some(expected) && c.adem == expected, || {
                format!("Z^{d}: {c:?}")
            })?;
        }
    }
    Ok(format!(
        "{checked} chain checks, inversion equality for d ≤ 3"
    ))
}

fn counterexample() -> Outcome {
    let m = FlModule::cyclic_shift_sum_zero(2, 3).map_err(err)?;
    ensure(m.cohomology_of_z() == (0, 0), || {
        format!("H*(Z, M) = {:?}", m.cohomology_of_z())
    })?;
    ensure(m.h0_trivial_group() == 2, || {
        format!("dim M = {}", m.h0_trivial_group())
    })?;
    Ok("H⁰ = H¹ = 0 over Z, dim H⁰ = 2 over the trivial group".into())
}

fn exponents() -> Outcome {
    let q = NumberFieldData::rationals();
    for n in 1..=5u32 {
        for m in 0..=3u32 {
            let e = NumberFieldData::new(1 << m, 1 << m, 0).map_err(err)?;
            let rep = sl2n_example_report(n, m, &q, &e).map_err(err)?;
            let composed = theorem1_exponent(
                n * (2 * n + 1),
                0,
                4 * n * n - 1,
                Rational64::new(1, 1 << m),
            )
            .map_err(err)?;
            ensure(rep.exponent == composed, || {
                format!("n = {n}, m = {m}: {} vs {composed}", rep.exponent)
            })?;
        }
    }
    let mut sweep = 0;
    let groups = [
        SplitGroupData::sl(2),
        SplitGroupData::sl(3),
        SplitGroupData::sp(2),
        SplitGroupData::so(5),
    ];
    for g in groups.into_iter().map(|g| g.map_err(err)) {
        let g = g?;
        for deg in 1..=4u32 {
            let field = NumberFieldData::new(deg, deg, 0).map_err(err)?;
            {
                let s = deg;
                let rep = split_groups_exponent(&g, &field, s, 2).map_err(err)?;
                let composed = theorem1_exponent(
                    g.rank * deg,
                    g.rank * (s - 1),
                    g.dim * deg,
                    Rational64::one(),
                )
                .map_err(err)?;
                ensure(rep.alpha == composed, || {
                    format!("{} deg {deg} |S| {s}", g.label)
                })?;
                sweep += 1;
            }
        }
        for s in 1..=3u32 {
            let field = NumberFieldData::new(4, 0, 2)
                .map_err(err)?
                .with_roots_of_unity(&[3])
                .map_err(err)?;
            if s < field.archimedean_places() {
                continue;
            }
            let rep = split_groups_exponent(&g, &field, s, 3).map_err(err)?;
            let closed = Rational64::new((g.rank * (4 - s + 1)) as i64, (g.dim * 4) as i64);
            ensure(rep.alpha == closed, || {
                format!("{}: α = {}", g.label, rep.alpha)
            })?;
            sweep += 1;
        }
    }
    ensure(
        theorem1_exponent(4, 0, 8, Rational64::one()).map_err(err)? == Rational64::new(1, 2),
        || "d".into(),
    )?;
    let e = NumberFieldData::new(2, 2, 0).map_err(err)?;
    let rep = sl2n_example_report(1, 1, &q, &e).map_err(err)?;
    ensure(rep.vcd == 3, || format!("vcd = {}", rep.vcd))?;
    ensure(rep.exponent == Rational64::new(1, 2), || {
        format!("exponent {}", rep.exponent)
    })?;
    let sp4 = basechange_exponent(&SplitGroupData::sp(2).map_err(err)?, &q, 2).map_err(err)?;
    ensure(sp4.start_degree == 3, || {
        format!("Sp4 start degree {}", sp4.start_degree)
    })?;
    Ok(format!(
        "20 closed forms, {sweep} split-group points, d = 1/2, vcd = 3"
    ))
}

fn lefschetz() -> Outcome {
    let g = sl(2).map_err(err)?;
    let s = signature(&killing_form(g.algebra()));
    ensure((s.n_plus, s.n_minus) == (2, 1), || {
        format!("sl2 signature {s:?}")
    })?;
    let q = q_from_dim_sign(3, s.sign()).map_err(err)?;
    ensure(q == 2, || format!("q = {q}"))?;
    for c in [so(3), so(4), so(5), su(2), su(3)] {
        let c = c.map_err(err)?;
        let s = signature(&killing_form(c.algebra()));
        ensure(
            q_from_dim_sign(c.algebra().dim() as u32, s.sign()).map_err(err)? == 0,
            || format!("{} is not compact", c.algebra().label()),
        )?;
    }
    let g3 = sl(3).map_err(err)?;
    let mut d = QMat::identity(3);
    d.set(0, 0, BigRational::from_integer((-1).into()));
    d.set(1, 1, BigRational::from_integer((-1).into()));
    let tau = g3.adjoint(&d, 8).map_err(err)?;
    let fixed = fixed_subalgebra(g3.algebra(), &tau).map_err(err)?;
    ensure(fixed.len() == 4, || format!("fixed dim {}", fixed.len()))?;
    let split = derived_center_split(g3.algebra(), &fixed).map_err(err)?;
    let sd = signature(&killing_form(g3.algebra()).restrict(&split.derived));
    ensure(
        q_from_dim_sign(split.derived.len() as u32, sd.sign()).map_err(err)? == 2,
        || "fixed q".into(),
    )?;
    ensure(
        euler_sign(2) == EulerSign::Minus && euler_sign(2).value() == -1,
        || "euler_sign(2)".into(),
    )?;
    let chi = chi_finite_index(Ratio::new(-1, 6), 12).map_err(err)?;
    let free = euler_char(&GroupDescriptor::Free { rank: 3 });
    ensure(chi == Ratio::from_integer(free) && free == -2, || {
        format!("χ = {chi}, free rank 3 gives {free}")
    })?;
    ensure(euler_sign(2).admits(free), || "sign mismatch".into())?;
    Ok("sl2 (2,1), q = 2, compact q = 0, fixed dim 4, χ(Γ(3)) = −2".into())
}

fn random_action(rng: &mut ChaCha8Rng) -> Option<LatticeAction> {
    let d = rng.gen_range(1..=3usize);
    let data: Vec<i64> = (0..d * d).map(|_| rng.gen_range(-2..=2)).collect();
    let a = IntMat::new(d, d, data).ok()?;
    let m = a.order(6)?;
    LatticeAction::new(a, m as u64).ok()
}

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut sampled = 0;
    let mut draws = 0u64;
    while sampled < 100 {
        draws += 1;
        ensure(draws < 50_000_000, || {
            format!("only {sampled} actions found")
        })?;
        let Some(action) = random_action(&mut rng) else {
            continue;
        };
        let snf = h1_lattice(&action).map_err(err)?;
        let bf = h1_lattice_brute_force(&action).map_err(err)?;
        ensure(snf.order() == Some(bf.order), || {
            format!(
                "{:?}: SNF {:?} vs enumeration {}",
                action.matrix(),
                snf.order(),
                bf.order
            )
        })?;
        ensure(
            representatives_reduce_injectively(&action, &snf).map_err(err)?,
            || format!("{:?}: reduction not injective", action.matrix()),
        )?;
        sampled += 1;
    }
    Ok(format!("100 sampled actions agree ({draws} draws)"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("coprime H1 is trivial", coprime_h1, Some(60)),
        ("fixed groups of uniform kernels", uniform_series, Some(120)),
        ("pointed-set counting identity", counting, None),
        ("fixed-point inequalities", adem, None),
        ("H*(Z, M) = 0 counterexample", counterexample, None),
        ("closed-form exponents", exponents, None),
        (
            "Killing-form signatures and Euler signs",
            lefschetz,
            Some(10),
        ),
        ("SNF H1 against enumeration", oracle, None),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(b)) = (&outcome, budget) {
            if elapsed > Duration::from_secs(*b) {
                outcome = Err(format!("took {elapsed:.1?}, budget {b} s"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
