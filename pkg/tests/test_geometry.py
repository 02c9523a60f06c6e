from itertools import permutations

import pytest

from blochlab.errors import NotAClique
from blochlab.geometry import projective_line, z_set
from blochlab.rings import wn_set

from conftest import CORPUS, ring


def unimodular_rows(R):
    # (u1, u2) is unimodular iff it generates the unit ideal: r u1 + s u2 = 1
    els = list(R.elements())
    return [(a, b) for a in els for b in els
            if any(R.add(R.mul(r, a), R.mul(s, b)) == R.one for r in els for s in els)]


def brute_cliques(line, n):
    pts = range(len(line))
    return [t for t in permutations(pts, n)
            if all(line.is_edge(p, q) for i, p in enumerate(t) for q in t[i + 1:])]


@pytest.mark.parametrize("spec", CORPUS)
def test_points_count_rows_over_units(spec):
    R = ring(spec)
    line = projective_line(R)
    assert len(line) * len(R.units) == len(unimodular_rows(R))


@pytest.mark.parametrize("spec,expected", [
    ("GF(2)", [3, 6, 6, 0]),
    ("GF(3)", [4, 12, 24, 24]),
    ("GF(5)", [6, 30, 120, 360]),
    ("Z/4", [6, 24, 48, 0]),
    ("Z/9", [12, 108, 648, 1944]),
])
def test_clique_counts(spec, expected):
    line = projective_line(ring(spec))
    assert [len(line.cliques(n)) for n in range(1, 5)] == expected


@pytest.mark.parametrize("spec", ["GF(2)", "GF(3)", "GF(4)", "Z/4", "Z/8"])
def test_cliques_match_brute_force(spec):
    line = projective_line(ring(spec))
    for n in range(1, 5):
        assert sorted(line.cliques(n)) == sorted(brute_cliques(line, n))


def test_clique_index_is_lexicographic_position():
    line = projective_line(ring("GF(3)"))
    xs = line.cliques(3)
    assert xs == sorted(xs)
    assert all(line.clique_index(3)[t] == i for i, t in enumerate(xs))


def test_labels():
    F5 = ring("GF(5)")
    line = projective_line(F5)
    assert line.label(line.zero) == "0"
    assert line.label(line.infinity) == "inf"
    assert line.label(line.plus(F5.element("2"))) == "2+"
    Z4 = ring("Z/4")
    l4 = projective_line(Z4)
    assert l4.label(l4.index(Z4.element("1"), Z4.element("2"))) == "2-"


def test_distinct_points_and_non_edges():
    line = projective_line(ring("Z/4"))
    p = line.zero
    assert not line.is_edge(p, p)
    two = line.plus(ring("Z/4").element("2"))
    assert not line.is_edge(line.zero, two)
    assert not line.is_clique((line.zero, two))


@pytest.mark.parametrize("spec", ["GF(5)", "GF(7)", "Z/9"])
def test_z_set_brute_force(spec):
    R = ring(spec)
    wn = set(wn_set(R))
    for n in range(3):
        want = [t for t in permutations(sorted(wn), n)
                if all(R.div(x, y) in wn for x in t for y in t if x != y)]
        assert sorted(z_set(R, n)) == sorted(want)


def test_coordinates_roundtrip_and_count():
    R = ring("GF(5)")
    line = projective_line(R)
    sq = line.square_classes
    reps = sq.class_list
    for t in line.cliques(4):
        c, z = line.xn_to_coords(t)
        assert len(z) == 1
    for a in reps:
        for z in z_set(R, 1):
            t = line.coords_to_xn(a, z)
            assert line.xn_to_coords(t) == (sq.class_of[a], z)
    with pytest.raises(NotAClique):
        line.coords_to_xn(R.one, (R.one,))


def test_cross_ratio_of_standard_clique():
    R = ring("GF(7)")
    line = projective_line(R)
    x = R.element("3")
    t = (line.zero, line.infinity, line.one, line.plus(x))
    cls, z = line.cross_ratio(t)
    assert z == x
