use voa::exactalg::rat;
use voa::fock::generator_named;
use voa::zhu::{o_span_with, replay_certificate, star, SpanFamily};
use voa::State;

fn lin(terms: &[(&State, (i64, i64))]) -> State {
    let mut out = State::vac(1).scale_rat(&rat(0, 1));
    for (s, (n, d)) in terms {
        out = out.add(&s.scale_rat(&rat(*n, *d)));
    }
    out
}

#[test]
fn rank_one_relations_at_weight_ten() {
    let w = generator_named("omega", 1).unwrap();
    let h = generator_named("H_1", 1).unwrap();
    let v = State::vac(1);
    let span = o_span_with(1, 10, None, 10, SpanFamily::default()).unwrap();
    let c = star(&w, &h).unwrap().sub(&star(&h, &w).unwrap());
    assert!(span.member(&c).unwrap().member);
    let f1 = lin(&[(&w, (1, 1)), (&v, (-1, 1))]);
    let f2 = lin(&[(&w, (1, 1)), (&v, (-1, 16))]);
    let f3 = lin(&[(&w, (1, 1)), (&v, (-9, 16))]);
    let p = star(&f1, &star(&f2, &star(&f3, &h).unwrap()).unwrap()).unwrap();
    assert!(span.member(&p).unwrap().member);
    let ww = star(&w, &w).unwrap();
    let q = lin(&[(&ww, (132, 1)), (&w, (-65, 1)), (&h, (-70, 1)), (&v, (3, 1))]);
    let r = star(&q, &h).unwrap();
    assert!(span.member(&r).unwrap().member);
    assert!(!span.member(&h).unwrap().member);
}

#[test]
fn rank_one_quartic_at_weight_sixteen() {
    let h = generator_named("H_1", 1).unwrap();
    let v = State::vac(1);
    let span = o_span_with(1, 16, None, 16, SpanFamily::default()).unwrap();
    let g1 = lin(&[(&h, (1, 1)), (&v, (-1, 1))]);
    let g2 = lin(&[(&h, (1, 1)), (&v, (1, 128))]);
    let g3 = lin(&[(&h, (1, 1)), (&v, (-15, 128))]);
    let p = star(&h, &star(&g1, &star(&g2, &g3).unwrap()).unwrap()).unwrap();
    let m = span.member(&p).unwrap();
    assert!(m.member);
    assert_eq!(replay_certificate(&m.certificate, 1), p);
    // the cubic factor alone is not in O(V) at this bound
    let cubic = star(&g1, &star(&g2, &g3).unwrap()).unwrap();
    assert!(!span.member(&cubic).unwrap().member);
}
