import random

import pytest

from drintate.errors import MismatchedBase, NonDivisibleDegree
from drintate.fieldtower import (
    FieldElem,
    embed,
    extract_root,
    get_field,
    inverse_frobenius,
    poly_is_irreducible,
)

F3 = get_field(3, 1, 1)
F9 = get_field(3, 1, 2)
F81 = get_field(3, 1, 4)
F3_8 = get_field(3, 1, 8)


def rand_elem(desc, rng):
    return FieldElem(desc, tuple(rng.randrange(desc.p) for _ in range(desc.n)))


@pytest.mark.parametrize("p,m,d", [(3, 1, 1), (3, 1, 2), (3, 1, 4), (2, 1, 6), (5, 1, 3)])
def test_table_polys_irreducible(p, m, d):
    desc = get_field(p, m, d)
    assert poly_is_irreducible(desc.defining_poly, p)


def test_embed_identity_element():
    one = FieldElem.one(F9)
    assert embed(one, F81) == FieldElem.one(F81)


def test_embed_tower_compatibility():
    rng = random.Random(7)
    for _ in range(25):
        x = rand_elem(F9, rng)
        assert embed(embed(x, F81), F3_8) == embed(x, F3_8)


def test_embed_is_ring_hom():
    rng = random.Random(11)
    for _ in range(25):
        x, y = rand_elem(F9, rng), rand_elem(F9, rng)
        assert embed(x + y, F81) == embed(x, F81) + embed(y, F81)
        assert embed(x * y, F81) == embed(x, F81) * embed(y, F81)


def test_embed_preserves_minimal_polynomial():
    # generator g of F_9 satisfies its defining polynomial after embedding
    g = FieldElem.gen(F9)
    img = embed(g, F81)
    acc = FieldElem.zero(F81)
    xp = FieldElem.one(F81)
    for c in F9.defining_poly:
        acc = acc + xp * c
        xp = xp * img
    assert not acc


def test_embed_errors():
    with pytest.raises(NonDivisibleDegree):
        embed(FieldElem.one(F81), F9)
    with pytest.raises(MismatchedBase):
        embed(FieldElem.one(get_field(2, 1, 2)), F9)


def test_inverse_frobenius_roundtrip():
    rng = random.Random(3)
    assert not inverse_frobenius(FieldElem.zero(F81))
    for c in range(3):
        assert inverse_frobenius(FieldElem.from_int(F81, c)) == FieldElem.from_int(F81, c)
    for _ in range(25):
        x = rand_elem(F3_8, rng)
        y = inverse_frobenius(x)
        assert y**3 == x


def test_inverse_frobenius_generator_f9():
    g = FieldElem.gen(F9)
    y = inverse_frobenius(g)
    assert y == g**3
    assert y**3 == g


def test_extract_root_trivial():
    x = FieldElem.gen(F9)
    r, desc = extract_root(x, 1)
    assert (r, desc) == (x, F9)
    one = FieldElem.one(F3)
    r, desc = extract_root(one, 2)
    assert desc == F3 and r == one
    # 1 stays 1 even when the ambient group must grow
    r, desc = extract_root(FieldElem.one(F3), 8)
    assert r == FieldElem.one(desc)


def test_extract_root_minus_one_needs_f9():
    minus_one = FieldElem.from_int(F3, 2)
    r, desc = extract_root(minus_one, 2)
    assert desc == F9
    assert r * r == embed(minus_one, F9)


def test_extract_root_defining_property():
    rng = random.Random(5)
    for nth in (2, 4, 8):
        for _ in range(10):
            x = rand_elem(F9, rng)
            if not x:
                continue
            r, desc = extract_root(x, nth)
            assert r**nth == embed(x, desc)


def test_extract_root_deterministic():
    x = FieldElem.from_int(F3, 2)
    r1, d1 = extract_root(x, 2)
    r2, d2 = extract_root(x, 2)
    assert r1 == r2 and d1 == d2


def test_serialization_is_bit_identical():
    rng = random.Random(13)
    x = rand_elem(F81, rng)
    assert repr(x) == repr(FieldElem(F81, x.coeffs))
