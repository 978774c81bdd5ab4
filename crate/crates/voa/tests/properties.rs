mod props;

use props::*;

fn ok(r: Result<(), String>) {
    if let Err(e) = r {
        panic!("{e}");
    }
}

#[test]
fn theta_commutes_with_products() {
    ok(check(CASES, (element(3, 3), -3i64..=5, element(3, 3)), |(a, n, b)| theta_is_an_automorphism(&a, n, &b)));
}

#[test]
fn products_are_graded() {
    ok(check(CASES, (monomial(3, 3), -3i64..=6, monomial(3, 3)), |(a, n, b)| grading_is_additive(&a, n, &b)));
}

#[test]
fn vacuum_is_a_unit() {
    ok(check(CASES, (element(3, 4), 0i64..=8), |(a, n)| creation_axioms(&a, n)));
}

#[test]
fn parity_patterns_combine_by_symmetric_difference() {
    ok(check(CASES, (monomial(6, 5), monomial(6, 5)), |(a, b)| parity_rule(&a, &b)));
}

#[test]
fn cmn_table_is_symmetric_and_stable() {
    ok(check(CASES, 0u32..=10, cmn_symmetric_and_stable));
}

#[test]
fn twisted_products_are_theta_equivariant() {
    ok(check(CASES, (monomial(3, 2), -2i64..=3, twisted_monomial(2, 3)), |(u, k, s)| twisted_theta_equivariance(&u, k, &s)));
}

#[test]
fn commutator_formula_matches_composition() {
    ok(check(CASES, (monomial(2, 2), -2i64..=4, monomial(2, 2), -2i64..=4, monomial(2, 2)), |(a, i, b, j, s)| {
        commutator_matches_composition(&a, i, &b, j, &s)
    }));
}

#[test]
fn every_property_runs_in_the_shared_list() {
    let names: Vec<&str> = all(1).into_iter().map(|(n, r)| {
        assert!(r.is_ok(), "{n}: {r:?}");
        n
    }).collect();
    assert_eq!(names.len(), 7);
}
