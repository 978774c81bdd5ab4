"""Smoke test for the voa_py extension module.

Build and run from the repository root:

    PYO3_BUILD_EXTENSION_MODULE=1 cargo build --release -p voa-py
    cp target/release/libvoa_py.so python/voa_py.so
    python3 python/smoke_test.py

or install with `maturin develop -m crates/voa-py/Cargo.toml` and run the script directly.
"""

import voa_py as v


def main():
    vac = v.State.vac(2)
    s11 = v.State.parse("S(1,2;1,1)", 2)
    w2 = v.State.parse("omega(2)", 2)

    # omega^[2]_0 S(1,2;1,1) = S(1,2;1,2)
    assert v.product(w2, 0, s11) == v.State.parse("S(1,2;1,2)", 2)
    # creation axioms
    assert v.product(s11, -1, vac) == s11
    assert v.product(s11, 0, vac).is_zero()
    assert s11.theta() == s11
    assert s11.weight() == "2"

    # S(1,2;1,2)_5 S(1,2;1,2) = -6 vac
    s12 = v.State.parse("S(1,2;1,2)", 2)
    assert v.product(s12, 5, s12) == vac.scale("-6")

    # eigenvalue on e^lam
    e = v.State.exp_lam(2)
    assert str(v.product(s11, 1, e)) == "(lam_1*lam_2)*|lam>"

    # twisted vacuum: omega^[1]_1 and H^[1]_3
    tw = v.State.vac_tw(2)
    assert v.twisted_product(v.State.parse("omega(1)", 2), "1", tw) == tw.scale("1/16")
    assert v.twisted_product(v.State.parse("H(1)", 2), "3", tw) == tw.scale("-1/128")

    # commutator formula against direct composition
    a, b = v.State.parse("omega(1)", 2), v.State.parse("S(1,2;1,1)", 2)
    s = v.State.parse("h(1,-1) h(2,-2) exp(lam)", 2)
    direct = v.mode(a, "2", v.mode(b, "-1", s)) - v.mode(b, "-1", v.mode(a, "2", s))
    assert v.commutator(a, 2, b, -1, s) == direct

    c = v.cmn(4)  # zero entries are omitted
    assert (0, 0) not in c and c[(1, 1)] == "1/16" and c[(1, 2)] == c[(2, 1)]

    assert v.gpoly("x^2-1", "x-1", "x") == "x - 1"

    member, size = v.zhu_member(v.State.parse("star(omega, H(1)) - star(H(1), omega)", 1), 8)
    assert member and size > 0

    words = v.boundary_constraints("s11-3")
    assert len(words) == 3

    report = v.verify("relations", 2)
    assert report["failed"] == 0 and report["passed"] == 9

    try:
        v.State.parse("S(1,1;1,1)", 2)
    except v.VoaError:
        pass
    else:
        raise AssertionError("repeated index should be rejected")

    print("voa_py smoke test passed")


if __name__ == "__main__":
    main()
