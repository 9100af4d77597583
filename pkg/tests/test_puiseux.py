import random
from fractions import Fraction

import pytest

from drintate.errors import AmbiguousMaxRoot, DivisionByIndistinguishableZero
from drintate.fieldtower import FieldElem, get_field
from drintate.puiseux import (
    AdditivePoly,
    NewtonPolygon,
    PuiseuxApprox,
    carlitz_period,
    equal_to_prec,
    newton_polygon,
    solve_additive,
)

F3 = get_field(3, 1, 1)
PREC = Fraction(40)


def theta(prec=PREC, field=F3):
    return PuiseuxApprox.theta(field, prec)


def rand_series(rng, prec=PREC, field=F3, e=1, lo=-4, hi=10):
    terms = {}
    for _ in range(rng.randrange(1, 6)):
        j = rng.randrange(lo * e, hi * e)
        c = rng.randrange(1, field.p)
        terms[j] = FieldElem.from_int(field, c)
    return PuiseuxApprox(field, e, terms, prec)


def test_theta_times_inverse_is_one():
    th = theta()
    prod = th * th.invert()
    assert equal_to_prec(prod, PuiseuxApprox.from_int(F3, 1, prod.prec))


def test_bracket_one():
    # [1] = theta^q - theta for q = 3
    th = theta()
    b1 = th.twist(1) - th
    assert b1.valuation() == -3
    assert b1.coeff_at(-3) == FieldElem.one(F3)
    assert b1.coeff_at(-1) == -FieldElem.one(F3)


def test_hand_multiplication_at_prec_5():
    one = PuiseuxApprox.from_int(F3, 1, 5)
    thinv = PuiseuxApprox.theta_power(F3, -1, 5)
    prod = (one + thinv) * (one - thinv)
    assert prod.prec == 5
    assert sorted(prod.terms) == [0, 2]
    assert prod.coeff_at(2) == -FieldElem.one(F3)


def test_arith_ring_axioms_random():
    rng = random.Random(1)
    for _ in range(20):
        a, b, c = (rand_series(rng) for _ in range(3))
        assert equal_to_prec(a * (b + c), a * b + a * c)
        assert equal_to_prec((a * b) * c, a * (b * c))
        assert equal_to_prec(a * b, b * a)


def test_division_roundtrip():
    rng = random.Random(2)
    for _ in range(10):
        a = rand_series(rng)
        b = rand_series(rng)
        q = a / b
        assert (q * b - a).is_zero_to_prec()


def test_division_by_zero_to_prec():
    z = PuiseuxApprox.zero(F3, PREC)
    with pytest.raises(DivisionByIndistinguishableZero):
        theta() / z


def test_valuation_examples():
    assert theta().valuation() == -1
    assert PuiseuxApprox.zero(F3, PREC).valuation() is None
    assert PuiseuxApprox.theta_power(F3, Fraction(5, 8), PREC).valuation() == Fraction(-5, 8)


def test_valuation_multiplicative():
    rng = random.Random(3)
    for _ in range(20):
        a, b = rand_series(rng), rand_series(rng)
        assert (a * b).valuation() == a.valuation() + b.valuation()


def test_twist_basics():
    th = theta()
    assert equal_to_prec(th.twist(1), th**3)
    a = rand_series(random.Random(4))
    assert equal_to_prec(a.twist(-1).twist(1), a.capped(a.twist(-1).twist(1).prec))


def test_twist_freshman_dream():
    th = theta()
    f = th + th.invert()
    t = f.twist(1)
    assert t.coeff_at(-3) == FieldElem.one(F3)
    assert t.coeff_at(3) == FieldElem.one(F3)
    assert len(t.terms) == 2


def test_twist_is_ring_hom():
    rng = random.Random(5)
    for n in (1, 2, -1):
        a, b = rand_series(rng), rand_series(rng)
        lhs = (a * b).twist(n)
        rhs = a.twist(n) * b.twist(n)
        assert equal_to_prec(lhs, rhs)


def test_precision_propagation_mul():
    a = PuiseuxApprox(F3, 1, {2: FieldElem.one(F3)}, 10)  # ord 2, prec 10
    b = PuiseuxApprox(F3, 1, {3: FieldElem.one(F3)}, 12)  # ord 3, prec 12
    assert (a * b).prec == min(2 + 12, 3 + 10)


def test_nth_root_square():
    rng = random.Random(6)
    for _ in range(5):
        a = rand_series(rng)
        r = (a * a).nth_root(2)
        assert (r * r - a * a).is_zero_to_prec()


def test_nth_root_minus_theta():
    r = (-theta()).nth_root(2)
    assert r.valuation() == Fraction(-1, 2)
    sq = r * r + theta(field=r.field)
    assert sq.is_zero_to_prec()


# -- Newton polygons ---------------------------------------------------------


def test_newton_polygon_torsion_seed():
    # theta X + X^(q^r), q = 3, r = 2: 8 nonzero roots of ord -1/8
    pts = {1: theta(), 9: PuiseuxApprox.from_int(F3, 1, PREC)}
    pg = newton_polygon(pts)
    assert pg.segments == ((Fraction(-1, 8), 8),)


def test_newton_polygon_two_linear_roots():
    # X^2 - theta^2: slope -1, length 2
    pts = {2: PuiseuxApprox.from_int(F3, 1, PREC), 0: -(theta() ** 2)}
    pg = newton_polygon(pts)
    assert pg.segments == ((Fraction(-1), 2),)


def test_newton_polygon_refined_layer():
    # b0^q + theta X + X^(q^r) with ord(b0) = -1/8: lengths 1 and 8,
    # valuations 5/8 and -1/8
    b0q = PuiseuxApprox.theta_power(F3, Fraction(3, 8), PREC)
    pts = {0: b0q, 1: theta(), 9: PuiseuxApprox.from_int(F3, 1, PREC)}
    pg = newton_polygon(pts)
    assert pg.segments == ((Fraction(5, 8), 1), (Fraction(-1, 8), 8))


def test_newton_polygon_matches_constructed_roots():
    # product of X - theta^a over a in {1, 2, 2}: brute-force oracle
    rng = random.Random(8)
    th = theta()
    roots = [th, th * th, th * th]
    coeffs = {0: PuiseuxApprox.from_int(F3, 1, PREC)}
    poly = {0: PuiseuxApprox.from_int(F3, 1, PREC)}
    for r in roots:
        new = {}
        for k, c in poly.items():
            new[k + 1] = new.get(k + 1, PuiseuxApprox.zero(F3, PREC)) + c
            new[k] = new.get(k, PuiseuxApprox.zero(F3, PREC)) - c * r
        poly = new
    pg = newton_polygon({k: v for k, v in poly.items() if v})
    got = sorted([(s, l) for s, l in pg.segments])
    assert sum(l for _, l in got) == 3
    assert got == [(Fraction(-2), 2), (Fraction(-1), 1)]


# -- additive solving ----------------------------------------------------------


def carlitz_torsion_poly(prec=PREC):
    return AdditivePoly({0: theta(prec), 1: PuiseuxApprox.from_int(F3, 1, prec)})


def test_kernel_basis_carlitz():
    basis = solve_additive(carlitz_torsion_poly(), "kernel_basis", prec_target=Fraction(20))
    assert len(basis) == 1
    lam = basis[0]
    assert lam.valuation() == Fraction(-1, 2)
    res = carlitz_torsion_poly().eval(lam)
    assert res.is_zero_to_prec()


def test_kernel_basis_rank_two():
    # theta X + X^9: F_3-basis of size 2, each root of ord -1/8
    poly = AdditivePoly({0: theta(), 2: PuiseuxApprox.from_int(F3, 1, PREC)})
    basis = solve_additive(poly, "kernel_basis", prec_target=Fraction(20))
    assert len(basis) == 2
    for b in basis:
        assert b.valuation() == Fraction(-1, 8)
        assert poly.eval(b).is_zero_to_prec()
    # F_3-independence of the two basis roots via leading coefficients
    l0, l1 = basis[0].leading()[1], basis[1].leading()[1]
    assert all(l0 * k != l1 for k in range(3))


def test_identity_plus_constant():
    c = rand_series(random.Random(9))
    poly = AdditivePoly({0: PuiseuxApprox.from_int(F3, 1, PREC)}, const=c)
    (root,) = solve_additive(poly, "max_valuation_root")
    assert equal_to_prec(root, -c)


def test_max_valuation_root_torsion_layer():
    # theta X + X^9 = -b0^q with ord(b0) = -1/8: unique max root of ord 5/8
    b0q = PuiseuxApprox.theta_power(F3, Fraction(3, 8), PREC)
    poly = AdditivePoly(
        {0: theta(), 2: PuiseuxApprox.from_int(F3, 1, PREC)}, const=b0q
    )
    (root,) = solve_additive(poly, "max_valuation_root", prec_target=Fraction(20))
    assert root.valuation() == Fraction(5, 8)
    assert poly.eval(root).is_zero_to_prec()


def test_max_valuation_root_ambiguous():
    # theta X + X^9 = theta^(17/8): a single long Newton segment, so the
    # maximal valuation is shared by several roots
    poly = AdditivePoly(
        {0: theta(), 2: PuiseuxApprox.from_int(F3, 1, PREC)},
        const=PuiseuxApprox.theta_power(F3, Fraction(17, 8), PREC),
    )
    with pytest.raises(AmbiguousMaxRoot):
        solve_additive(poly, "max_valuation_root")


def test_all_slope_leaders_verifies():
    b0q = PuiseuxApprox.theta_power(F3, Fraction(3, 8), PREC)
    poly = AdditivePoly(
        {0: theta(), 2: PuiseuxApprox.from_int(F3, 1, PREC)}, const=b0q
    )
    roots = solve_additive(poly, "all_slope_leaders", prec_target=Fraction(15))
    assert len(roots) == 2
    vals = sorted(r.valuation() for r in roots)
    assert vals == [Fraction(-1, 8), Fraction(5, 8)]
    for r in roots:
        assert poly.eval(r).is_zero_to_prec()


def test_solver_determinism():
    a = solve_additive(carlitz_torsion_poly(), "kernel_basis", prec_target=Fraction(20))
    b = solve_additive(carlitz_torsion_poly(), "kernel_basis", prec_target=Fraction(20))
    assert a[0].to_record() == b[0].to_record()


# -- Carlitz period -------------------------------------------------------------


def test_carlitz_period_ord():
    pi = carlitz_period(3, 1, Fraction(20))
    assert pi.valuation() == Fraction(-3, 2)


def test_carlitz_period_product_oracle():
    prec = Fraction(20)
    pi = carlitz_period(3, 1, prec)
    fld = pi.field
    lead = PuiseuxApprox.theta(fld, prec + 3) * (-PuiseuxApprox.theta(fld, prec + 3)).nth_root(2)
    prod = pi
    i = 1
    while 3**i - 1 <= prec + 2:
        prod = prod * (1 - PuiseuxApprox.theta_power(fld, 1 - 3**i, prec + 3))
        i += 1
    assert (prod - lead).is_zero_to_prec()


def test_carlitz_period_truncation_stability():
    p20 = carlitz_period(3, 1, Fraction(20))
    p40 = carlitz_period(3, 1, Fraction(40)).capped(Fraction(20))
    assert equal_to_prec(p20, p40)


def test_serialization_roundtrip():
    rng = random.Random(10)
    a = rand_series(rng, e=4)
    rec = a.to_record()
    b = PuiseuxApprox.from_record(rec)
    assert a == b
