from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from blochlab.config import Caps, parse_caps
from blochlab.errors import NotAHom, NotPrimePower, ParseError, TooLarge
from blochlab.rings import (SqRingElement, build_hom, crt_factors, galois_field, integers_mod,
                            least_irreducible, parse_ring, units_and_square_classes, wn_set)

from conftest import CORPUS, ring


def brute_units(R):
    return [a for a in R.elements() if any(R.mul(a, b) == R.one for b in R.elements())]


@pytest.mark.parametrize("spec", CORPUS + ("GF(8)", "GF(27)", "Z/2 x Z/3"))
def test_ring_axioms_brute_force(spec):
    R = ring(spec)
    els = list(R.elements())
    for a, b in product(els, els):
        assert R.add(a, b) == R.add(b, a)
        assert R.mul(a, b) == R.mul(b, a)
    for a in els:
        assert R.add(a, R.zero) == a and R.mul(a, R.one) == a
        assert R.add(a, R.neg(a)) == R.zero
    assert sorted(R.units) == sorted(brute_units(R))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16, 25, 27])
def test_galois_fields_are_fields_with_cyclic_units(q):
    F = galois_field(q)
    assert len(F) == q
    assert len(F.units) == q - 1
    orders = []
    for u in F.units:
        k, x = 1, u
        while x != F.one:
            x, k = F.mul(x, u), k + 1
        orders.append(k)
    assert max(orders) == q - 1


def test_least_irreducible_choices():
    assert least_irreducible(3, 2) == [1, 0, 1]        # x^2 + 1
    # coefficients run from the constant term upwards
    assert least_irreducible(3, 3) == [1, 2, 0, 1]     # 1 + 2x + x^3


@given(st.integers(2, 40), st.integers(0, 200), st.integers(0, 200))
def test_integers_mod_matches_python(n, a, b):
    R = integers_mod(n)
    x, y = R.from_int(a), R.from_int(b)
    assert R.label(R.add(x, y)) == str((a + b) % n)
    assert R.label(R.mul(x, y)) == str((a * b) % n)


def test_parse_errors_and_caps():
    with pytest.raises(NotPrimePower):
        parse_ring("GF(12)")
    with pytest.raises(ParseError):
        parse_ring("Q(2)")
    with pytest.raises(ParseError):
        parse_ring("")
    with pytest.raises(TooLarge):
        parse_ring("GF(9) x GF(9) x GF(9) x GF(2)", Caps(parse=1000))
    assert parse_caps("ring=81,cliques=7").cliques == 7
    with pytest.raises(ValueError):
        parse_caps("nonsense=1")


def test_product_and_truncated_sizes():
    assert len(ring("Z/2 x Z/3")) == 6
    assert len(ring("GF(2)[t]/(t^2)")) == 4
    # Z/6 and Z/2 x Z/3 have isomorphic unit groups and square-class counts
    a, b = units_and_square_classes(ring("Z/6")), units_and_square_classes(ring("Z/2 x Z/3"))
    assert a.unit_group.abstract() == b.unit_group.abstract()
    assert a.n_classes == b.n_classes


@pytest.mark.parametrize("spec", CORPUS + ("GF(27)",))
def test_square_classes_brute_force(spec):
    R = ring(spec)
    sq = units_and_square_classes(R)
    squares = {R.mul(u, u) for u in R.units}
    assert sq.n_classes * len(squares) == len(R.units)
    for u, v in product(R.units, R.units):
        same = R.div(u, v) in squares
        assert (sq.class_of[u] == sq.class_of[v]) == same
    assert sq.unit_group.order() == len(R.units)


@pytest.mark.parametrize("spec", CORPUS)
def test_wn_brute_force(spec):
    R = ring(spec)
    want = [x for x in R.elements()
            if R.is_unit(x) and R.is_unit(R.sub(R.one, x))]
    assert wn_set(R) == want


def test_wn_examples():
    assert [ring("GF(5)").label(x) for x in wn_set(ring("GF(5)"))] == ["2", "3", "4"]
    assert [ring("Z/9").label(x) for x in wn_set(ring("Z/9"))] == ["2", "5", "8"]
    assert wn_set(ring("GF(2)")) == [] and wn_set(ring("Z/4")) == []


def test_unit_group_structures():
    assert units_and_square_classes(ring("Z/8")).unit_group.describe() == "Z/2 + Z/2"
    assert units_and_square_classes(ring("GF(9)")).unit_group.describe() == "Z/8"
    assert units_and_square_classes(ring("GF(27)")).unit_group.describe() == "Z/26"
    assert units_and_square_classes(ring("GF(4)")).n_classes == 1


def test_group_ring_arithmetic():
    sq = units_and_square_classes(ring("GF(3)"))
    m1 = ring("GF(3)").minus_one
    pf = SqRingElement.pf(sq, m1)
    assert pf * pf == pf * -2
    assert (SqRingElement.one(sq) + SqRingElement.an(sq, m1)) * pf == SqRingElement.zero(sq)
    assert pf.augmentation() == 0


def test_homomorphisms():
    h = build_hom(ring("GF(3)"), ring("GF(27)"), {g: ring("GF(27)").one for g in ring("GF(3)").ring_generators})
    assert h(ring("GF(3)").minus_one) == ring("GF(27)").minus_one
    with pytest.raises(NotAHom):
        F4, F8 = ring("GF(4)"), ring("GF(8)")
        build_hom(F4, F8, {g: F8.element("a") for g in F4.ring_generators})
    z4, z2 = ring("Z/4"), ring("Z/2")
    r = build_hom(z4, z2, {g: z2.one for g in z4.ring_generators})
    assert [z2.label(r(z4.from_int(k))) for k in range(4)] == ["0", "1", "0", "1"]
    assert crt_factors(72) == [8, 9]
