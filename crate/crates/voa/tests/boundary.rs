use num_traits::{One, Zero};
use voa::boundary::*;
use voa::exactalg::{g_poly, rat, PolyQ, Rat, UniPoly, Var};
use voa::fock::{generator, GenName, State};
use voa::vertex::n_product;

fn p(s: &str) -> PolyQ {
    PolyQ::parse(s).unwrap()
}

fn expected() -> Vec<Vec<PolyQ>> {
    vec![
        vec![
            p("-eps*(eps+1)^2 + 4*eps*zeta_i - 4*zeta_j"),
            p("-(eps+2)*(3*eps+1) + 4*zeta_i - 4*zeta_j"),
            p("-2*(3*eps+1)"),
        ],
        vec![
            p("-eps*(eps+1)*(3*eps^2+27*eps+22) + 8*eps*(3*eps+11)*zeta_i + 8*(3*eps-13)*zeta_j - 8*xi_i + 8*xi_j"),
            p("-2*(3*eps^3+39*eps^2+82*eps+24) + 8*(3*eps-13)*zeta_j + 8*(3*eps+11)*zeta_i"),
            p("-48*(3*eps+1)"),
        ],
        vec![
            p("3*eps*(eps+1)^2*(eps+4) - 12*eps*(eps+4)*zeta_i - 8*(3*eps-7)*zeta_j - 8*xi_j"),
            p("2*(3*eps^3+21*eps^2+42*eps+14) - 8*(3*eps-7)*zeta_j - 36*zeta_i"),
            p("4*(18*eps+7) + 24*zeta_i"),
        ],
        vec![p("-5*zeta_j + 2*xi_j"), p("-1 - 11*zeta_j"), p("-1 - 6*zeta_j")],
    ]
}

fn printed_eliminant() -> PolyQ {
    p("-(eps-1)*((18*zeta_i+3)*eps^5 + (-54*zeta_i+6)*eps^4 \
       + (1-36*zeta_j-78*zeta_i-216*zeta_j*zeta_i+216*zeta_i^2)*eps^3 \
       + (-2+4*zeta_j+22*zeta_i+744*zeta_j*zeta_i+24*zeta_i^2)*eps^2 \
       + (12*zeta_i-192*zeta_j*zeta_i-48*zeta_i^2-1152*zeta_j*zeta_i^2)*eps \
       + 384*zeta_j*zeta_i^2-16*zeta_j*zeta_i) \
       + 8*(9*eps^4+12*eps^3+(-18*zeta_i-36*zeta_j)*eps^2+(-24*zeta_i-1)*eps-4*zeta_j-6*zeta_i-24*zeta_j*zeta_i+24*zeta_i^2)*xi_i \
       - 8*((18*zeta_i+3)*eps^2+(-24*zeta_i+1)*eps+24*zeta_i^2+(-24*zeta_j-6)*zeta_i-4*zeta_j)*xi_j")
}

fn swap_ij(q: &PolyQ) -> PolyQ {
    let v = |s: &str| Var::new(s);
    q.subs(&[
        (v("zeta_i"), p("zeta_j")),
        (v("zeta_j"), p("zeta_i")),
        (v("xi_i"), p("xi_j")),
        (v("xi_j"), p("xi_i")),
    ])
}

fn constraints() -> ConstraintSet {
    derive_constraints(&standard_relations(), &GenericVectorSpec::symbolic()).unwrap()
}

#[test]
fn derived_constraints_match_up_to_scalar() {
    let set = constraints();
    assert_eq!(set.equations.len(), 4);
    for (eq, want) in set.equations.iter().zip(expected()) {
        assert!(vector_ratio(&eq.coeffs, &want).is_some(), "{}: {:?}", eq.name, eq.coeffs);
    }
}

#[test]
fn eliminant_is_printed_form_with_corrected_xi_term() {
    let set = constraints();
    let corrected = &printed_eliminant() + &p("32*xi_i*(zeta_i+zeta_j)");
    let e = eliminate(&set, [0, 1, 2]).unwrap();
    assert!(e.poly.associate_eq(&corrected));
    assert!(!e.poly.associate_eq(&printed_eliminant()));
    // the explicit ideal combination
    let mut combo = PolyQ::zero();
    for (m, k) in e.multipliers.iter().zip([0, 1, 2]) {
        combo += &(m * &set.equations[k].coeffs[0]);
    }
    assert_eq!(combo, e.poly);
}

#[test]
fn swapped_elimination_gives_the_mirror_polynomial() {
    let set = constraints();
    let corrected = &printed_eliminant() + &p("32*xi_i*(zeta_i+zeta_j)");
    let e = eliminate(&set, [0, 1, 3]).unwrap();
    assert!(e.poly.associate_eq(&swap_ij(&corrected)));
}

fn eliminant() -> PolyQ {
    eliminate(&constraints(), [0, 1, 2]).unwrap().poly
}

fn assign(pairs: &[(&str, Rat)]) -> Vec<(Var, PolyQ)> {
    pairs.iter().map(|(n, v)| (Var::new(n), PolyQ::constant(v.clone()))).collect()
}

#[test]
fn specializations_match_printed_factorizations() {
    let z = eliminant();
    let zero = Rat::zero();
    let all_zero = assign(&[("zeta_i", zero.clone()), ("zeta_j", zero.clone()), ("xi_i", zero.clone()), ("xi_j", zero.clone())]);
    assert!(specialize_constraint(&z, &all_zero).associate_eq(&p("eps^2*(eps-1)*(eps+1)*(3*eps^2+3*eps-2)")));
    let one = Rat::one();
    let mixed = assign(&[("zeta_i", zero.clone()), ("xi_i", zero.clone()), ("zeta_j", one.clone()), ("xi_j", one)]);
    assert!(specialize_constraint(&z, &mixed)
        .associate_eq(&p("(eps-2)*(eps-1)*(3*eps^4+12*eps^3-11*eps^2-20*eps-16)")));
    let tw = assign(&[("zeta_i", rat(1, 16)), ("zeta_j", rat(1, 16)), ("xi_i", rat(-1, 128)), ("xi_j", rat(-1, 128))]);
    assert!(specialize_constraint(&z, &tw).associate_eq(&p("eps*(11*eps^2-15*eps+6)*(6*eps^3+6*eps^2-7*eps+1)")));
}

#[test]
fn zeta_pair_and_euclidean_reduction() {
    let z = eliminant();
    let zv = |name: &str| vec![(Var::new(name), p("z"))];
    let mut a = assign(&[("zeta_i", Rat::zero()), ("xi_i", Rat::zero()), ("xi_j", Rat::zero())]);
    a.extend(zv("zeta_j"));
    let k11 = specialize_constraint(&z, &a);
    let mut b = assign(&[("zeta_j", Rat::zero()), ("xi_i", Rat::zero()), ("xi_j", Rat::zero())]);
    b.extend(zv("zeta_i"));
    let k2 = specialize_constraint(&z, &b);
    assert!(k11.associate_eq(&p("eps^2*(eps-1)*(4*(-9*eps+1)*z + (eps+1)*(3*eps^2+3*eps-2))")));
    assert!(k2.associate_eq(&p(
        "eps*(eps-1)*((216*eps^2+24*eps-48)*z^2 + (18*eps^4-54*eps^3-78*eps^2+22*eps+12)*z + 3*eps^4+6*eps^3+eps^2-2*eps)"
    )));
    let x = Var::new("z");
    let g = g_poly(&UniPoly::from_poly(&k2, x), &UniPoly::from_poly(&k11, x)).unwrap();
    let want = p("eps^5*(eps-1)^4*(eps+1)*(2*eps+1)*(3*eps-2)*(3*eps+1)^2*(3*eps^2+3*eps-2)");
    assert!(g.to_poly().associate_eq(&want), "{}", g.to_poly());
}

fn all_forms() -> Vec<Form> {
    let gens = [
        DiagGen { kind: DiagKind::Omega, side: Side::I },
        DiagGen { kind: DiagKind::Omega, side: Side::J },
        DiagGen { kind: DiagKind::H, side: Side::I },
        DiagGen { kind: DiagKind::H, side: Side::J },
    ];
    let mut out = Vec::new();
    for lm1 in 0..=2 {
        for r in 0..=3 {
            if r > 0 {
                out.push(Form { lm1, left: None, r });
            }
            for a in gens {
                for q in 1..=3 {
                    out.push(Form { lm1, left: Some((a, q)), r });
                }
            }
        }
    }
    out
}

/// At eps = 1 the vector e^lam of M(1, lam) satisfies every bound, so top actions can be
/// computed directly in the Fock space.
#[test]
fn top_actions_agree_with_fock_on_exp_vectors() {
    let rank = 2;
    let u = State::exp_lam(rank);
    let base = |s: &State| s.coeff(&voa::fock::Monomial::vacuum());
    let g = |n: GenName| generator(&n, rank).unwrap();
    let mut spec = GenericVectorSpec::symbolic().with_eps(PolyQ::one());
    spec.zeta_i = p("lam_1^2").scale(&rat(1, 2));
    spec.zeta_j = p("lam_2^2").scale(&rat(1, 2));
    spec.xi_i = base(&n_product(&g(GenName::H(1)), 3, &u).unwrap());
    spec.xi_j = base(&n_product(&g(GenName::H(2)), 3, &u).unwrap());
    let words: Vec<PolyQ> = (1..=3)
        .map(|r| base(&n_product(&g(GenName::S { i: 1, j: 2, r: 1, s: r }), r as i64, &u).unwrap()))
        .collect();
    let mut ev = BoundaryEvaluator::new(spec);
    for f in all_forms() {
        let expr = BoundaryExpr::new(vec![(f, Rat::one())]).unwrap();
        let direct = n_product(&expr.realize(1, 2, rank).unwrap(), f.weight() - 1, &u).unwrap();
        let mut via = PolyQ::zero();
        for t in ev.action(&expr).unwrap() {
            let w = match t.word {
                Word::U => PolyQ::one(),
                Word::S(r) => words[r as usize - 1].clone(),
            };
            via += &(&t.coeff * &w);
        }
        assert_eq!(base(&direct), via, "{f}");
        assert!(direct.len() <= 1);
    }
}

#[test]
fn integer_eps_agrees_with_symbolic_specialization() {
    let rels = standard_relations();
    let sym = derive_constraints(&rels, &GenericVectorSpec::symbolic()).unwrap();
    for k in -1..=4 {
        let spec = GenericVectorSpec::symbolic().with_eps(PolyQ::int(k));
        let num = derive_constraints(&rels, &spec).unwrap();
        let a = [(Var::new(EPS), PolyQ::int(k))];
        for (s, n) in sym.equations.iter().zip(&num.equations) {
            let subbed: Vec<PolyQ> = s.coeffs.iter().map(|c| c.subs(&a)).collect();
            assert_eq!(subbed, n.coeffs);
        }
    }
}

#[test]
fn product_table_matches_fock_products() {
    for (i, j, rank) in [(1, 2, 2), (3, 1, 3)] {
        for ((a, l, r), expr) in product_table() {
            let name = match (a.kind, a.side) {
                (DiagKind::Omega, Side::I) => GenName::Omega(i),
                (DiagKind::Omega, Side::J) => GenName::Omega(j),
                (DiagKind::H, Side::I) => GenName::H(i),
                (DiagKind::H, Side::J) => GenName::H(j),
            };
            let s = generator(&GenName::S { i, j, r: 1, s: r }, rank).unwrap();
            let lhs = n_product(&generator(&name, rank).unwrap(), l as i64, &s).unwrap();
            assert_eq!(lhs, expr.realize(i, j, rank).unwrap(), "{a:?} {l} S{r}");
        }
    }
}

#[test]
fn relations_vanish_in_the_vacuum_module() {
    for (name, rel) in standard_relations() {
        for (i, j, rank) in [(1, 2, 2), (2, 1, 2), (2, 3, 3)] {
            assert!(rel.realize(i, j, rank).unwrap().is_zero(), "{name}");
        }
    }
}

#[test]
fn delta_bounds_of_relations() {
    let e = PolyQ::var(EPS);
    let w: Vec<i64> = standard_relations().iter().map(|(_, r)| r.weight().unwrap()).collect();
    assert_eq!(w, vec![5, 6, 6, 6]);
    assert_eq!(standard_delta(&e, 5), &e + &PolyQ::int(3));
    assert_eq!(standard_delta(&PolyQ::int(2), 6), PolyQ::int(6));
}

#[test]
fn verma_block_identities() {
    for (rank, i, j, k) in [(3, 1, 2, 3), (4, 3, 1, 4)] {
        let checks = verma_suite(rank, i, j, k).unwrap();
        assert_eq!(checks.len(), 22);
        for c in &checks {
            assert!(c.passed, "{}: {} vs {}", c.id, c.lhs, c.rhs);
        }
    }
    assert_eq!(verma_spanning_rank(3).unwrap(), 9);
    assert!(verma_suite(2, 1, 2, 3).is_err());
}

#[test]
fn bad_shapes_are_rejected() {
    assert!(BoundaryExpr::parse("S4").is_err());
    assert!(BoundaryExpr::parse("S1 + S2").is_err());
    assert!(BoundaryExpr::parse("wi(-0) S1").is_err());
}
