//! Randomized invariants shared by the property tests and the acceptance runner.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

use voa::exactalg::rat;
use voa::fock::{parity_pattern, CreationOp, Half, ModuleKind, Monomial, State};
use voa::twisted::{c_coeffs, twisted_n_product};
use voa::vertex::{apply_mode, eval_commutator, n_product};
use voa::PolyQ;

pub const RANK: usize = 3;
pub const CASES: u32 = 256;

fn creation(max_deg: u16) -> impl Strategy<Value = CreationOp> {
    (1..=RANK as u16, 1..=max_deg).prop_map(|(gen, d)| CreationOp { gen, deg2: 2 * d })
}

fn twisted_creation(max_deg2: u16) -> impl Strategy<Value = CreationOp> {
    (1..=RANK as u16, 0..max_deg2.div_ceil(2)).prop_map(|(gen, k)| CreationOp { gen, deg2: 2 * k + 1 })
}

/// Monomials of the vacuum module with at most `len` factors of degree at most `max_deg`.
pub fn monomial(len: usize, max_deg: u16) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(creation(max_deg), 0..=len).prop_map(Monomial::new)
}

pub fn twisted_monomial(len: usize, max_deg2: u16) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(twisted_creation(max_deg2), 0..=len).prop_map(Monomial::new)
}

fn coeff() -> impl Strategy<Value = (i64, i64)> {
    (-5i64..=5, 1i64..=4).prop_filter("nonzero", |(n, _)| *n != 0)
}

pub fn vac_state(m: Monomial, (n, d): (i64, i64)) -> State {
    State::monomial(ModuleKind::Vacuum { rank: RANK }, m, PolyQ::constant(rat(n, d)))
}

/// Sums of up to three monomials with small rational coefficients.
pub fn element(len: usize, max_deg: u16) -> impl Strategy<Value = State> {
    prop::collection::vec((monomial(len, max_deg), coeff()), 1..=3).prop_map(|terms| {
        let mut s = State::zero(ModuleKind::Vacuum { rank: RANK });
        for (m, c) in terms {
            s = s.add(&vac_state(m, c));
        }
        s
    })
}

fn err(e: voa::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

pub fn theta_is_an_automorphism(a: &State, n: i64, b: &State) -> Result<(), TestCaseError> {
    let lhs = n_product(a, n, b).map_err(err)?.theta().map_err(err)?;
    let rhs = n_product(&a.theta().map_err(err)?, n, &b.theta().map_err(err)?).map_err(err)?;
    prop_assert_eq!(lhs, rhs);
    prop_assert_eq!(a.theta().map_err(err)?.theta().map_err(err)?, a.clone());
    Ok(())
}

pub fn grading_is_additive(a: &Monomial, n: i64, b: &Monomial) -> Result<(), TestCaseError> {
    let (sa, sb) = (vac_state(a.clone(), (1, 1)), vac_state(b.clone(), (1, 1)));
    let r = n_product(&sa, n, &sb).map_err(err)?;
    let want = (a.degree2() + b.degree2()) / 2 - n - 1;
    for d2 in r.degrees2() {
        prop_assert_eq!(d2, 2 * want);
    }
    // weights of creation parts add under concatenation
    prop_assert_eq!(a.concat(b).degree2(), a.degree2() + b.degree2());
    Ok(())
}

pub fn creation_axioms(a: &State, n: i64) -> Result<(), TestCaseError> {
    let vac = State::vac(RANK);
    prop_assert_eq!(n_product(a, -1, &vac).map_err(err)?, a.clone());
    prop_assert!(n_product(a, n.abs(), &vac).map_err(err)?.is_zero());
    prop_assert_eq!(n_product(&vac, -1, a).map_err(err)?, a.clone());
    Ok(())
}

pub fn parity_rule(a: &Monomial, b: &Monomial) -> Result<(), TestCaseError> {
    let pa = parity_pattern(a);
    let pb = parity_pattern(b);
    let sym: std::collections::BTreeSet<u16> = pa.symmetric_difference(&pb).copied().collect();
    prop_assert_eq!(parity_pattern(&a.concat(b)), sym);
    // the pattern only depends on the normal form
    let mut ops = a.ops().to_vec();
    ops.reverse();
    prop_assert_eq!(parity_pattern(&Monomial::new(ops)), pa);
    Ok(())
}

pub fn cmn_symmetric_and_stable(n: u32) -> Result<(), TestCaseError> {
    let t = c_coeffs(n);
    let t2 = c_coeffs(n + 2);
    prop_assert_eq!(t.get(0, 0), rat(0, 1));
    for m in 0..=n {
        for k in 0..=n - m {
            prop_assert_eq!(t.get(m, k), t.get(k, m));
            prop_assert_eq!(t.get(m, k), t2.get(m, k));
        }
    }
    Ok(())
}

pub fn twisted_theta_equivariance(u: &Monomial, k: i64, s: &Monomial) -> Result<(), TestCaseError> {
    let u = vac_state(u.clone(), (1, 1));
    let s = State::monomial(ModuleKind::Twisted { rank: RANK }, s.clone(), PolyQ::one());
    // twisted modes of a word of length l live in l/2 + Z
    let len = u.terms().next().map_or(0, |(m, _)| m.len() as i64);
    let n = Half(2 * k + len.rem_euclid(2));
    let lhs = twisted_n_product(&u, n, &s).map_err(err)?.theta().map_err(err)?;
    let rhs = twisted_n_product(&u.theta().map_err(err)?, n, &s.theta().map_err(err)?).map_err(err)?;
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn commutator_matches_composition(a: &Monomial, i: i64, b: &Monomial, j: i64, s: &Monomial) -> Result<(), TestCaseError> {
    let (a, b) = (vac_state(a.clone(), (1, 1)), vac_state(b.clone(), (1, 1)));
    let s = State::monomial(ModuleKind::exp_symbolic(RANK), s.clone(), PolyQ::one());
    let direct = apply_mode(&a, Half::int(i), &apply_mode(&b, Half::int(j), &s).map_err(err)?)
        .map_err(err)?
        .sub(&apply_mode(&b, Half::int(j), &apply_mode(&a, Half::int(i), &s).map_err(err)?).map_err(err)?);
    prop_assert_eq!(eval_commutator(&a, i, &b, j, &s).map_err(err)?, direct);
    Ok(())
}

/// Runs `f` on `cases` random inputs; the error carries the minimal failing input.
pub fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    f: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, f).map_err(|e| match e {
        TestError::Fail(why, input) => format!("{why} on {input:?}"),
        TestError::Abort(why) => format!("aborted: {why}"),
    })
}

/// Every property by name, each over `cases` random inputs.
pub fn all(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    vec![
        (
            "theta automorphism",
            check(cases, (element(3, 3), -3i64..=5, element(3, 3)), |(a, n, b)| theta_is_an_automorphism(&a, n, &b)),
        ),
        (
            "grading additivity",
            check(cases, (monomial(3, 3), -3i64..=6, monomial(3, 3)), |(a, n, b)| grading_is_additive(&a, n, &b)),
        ),
        ("creation axioms", check(cases, (element(3, 4), 0i64..=8), |(a, n)| creation_axioms(&a, n))),
        ("parity rule", check(cases, (monomial(6, 5), monomial(6, 5)), |(a, b)| parity_rule(&a, &b))),
        ("c_mn symmetry and truncation stability", check(cases, 0u32..=10, cmn_symmetric_and_stable)),
        (
            "twisted theta equivariance",
            check(cases, (monomial(3, 2), -2i64..=3, twisted_monomial(2, 3)), |(u, k, s)| {
                twisted_theta_equivariance(&u, k, &s)
            }),
        ),
        (
            "commutator consistency",
            check(cases, (monomial(2, 2), -2i64..=4, monomial(2, 2), -2i64..=4, monomial(2, 2)), |(a, i, b, j, s)| {
                commutator_matches_composition(&a, i, &b, j, &s)
            }),
        ),
    ]
}
