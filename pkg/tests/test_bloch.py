from itertools import product

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from blochlab.bloch import (Sym2, classical_bloch, classical_presentations, compare_alpha_beta,
                            context, extension_recipe, identity_battery, induced_map, ks_submodule,
                            prime_field_hom, push_chain, qrpb, special_chain, sym2_units)
from blochlab.coinv import Mat2, tuple_permutation
from blochlab.errors import DomainError
from blochlab.exactlin import FpAbGroup
from blochlab.rings import SqRingElement, build_hom

from conftest import CORPUS, ring


# -- oracles -------------------------------------------------------------------

def coinvariant_invariants(R, unit_det):
    """Invariant factors of L^tau_3 coinvariants using every matrix of the group and sympy."""
    ctx = context(R)
    lat = ctx.lattice
    els = list(R.elements())
    mats = [m for m in (Mat2(*e) for e in product(els, repeat=4))
            if (R.is_unit(m.det(R)) if unit_det else m.is_sl2(R))]
    rows = []
    for m in mats:
        perm = tuple_permutation(ctx.line, 3, m)
        for i, b in enumerate(lat.basis):
            moved = lat.coordinates({perm[k]: x for k, x in b.items()})
            row = [-x for x in moved]
            row[i] += 1
            if any(row):
                rows.append(row)
    n = lat.rank
    if not rows:
        return [0] * n
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    diag = [abs(snf[i, i]) for i in range(min(snf.shape))]
    diag += [0] * (n - len(diag))
    return sorted(d for d in diag if d != 1)


def group_invariants(g: FpAbGroup):
    return sorted(g.moduli)


def brute_lambda1(R, v):
    """Square-class coefficients of sum c <d(u,v) d(u,w) d(v,w)> over the terms of v."""
    ctx = context(R)
    sq = ctx.sq
    coeffs = [0] * sq.n_classes
    xs = ctx.line.cliques(3)
    for i, c in v.items():
        (a1, a2), (b1, b2), (c1, c2) = (ctx.line.rep(p) for p in xs[i])
        det = lambda x1, x2, y1, y2: R.sub(R.mul(x1, y2), R.mul(x2, y1))
        d = R.mul(R.mul(det(a1, a2, b1, b2), det(a1, a2, c1, c2)), det(b1, b2, c1, c2))
        coeffs[sq.class_of[d]] += c
    return coeffs


# -- groups -------------------------------------------------------------------

@pytest.mark.parametrize("spec", ["GF(2)", "GF(3)", "GF(4)", "Z/4"])
def test_rp_and_p_against_full_group_oracle(spec):
    R = ring(spec)
    ctx = context(R)
    assert group_invariants(ctx.rp.group) == coinvariant_invariants(R, False)
    assert group_invariants(ctx.pb.group) == coinvariant_invariants(R, True)


def test_small_field_groups():
    # RP(F_2) is cyclic of order 3 generated by C, P(F_3) is cyclic of order 4 generated by [-1]
    F2, F3 = ring("GF(2)"), ring("GF(3)")
    c2 = context(F2)
    assert c2.rp.group.describe() == "Z/3"
    assert c2.rp.group.element_order(c2.rp.element(c2.special("C"))) == 3
    c3 = context(F3)
    assert c3.pb.group.describe() == "Z/4"
    assert c3.pb.group.element_order(c3.pb.element(c3.special("gpb", F3.minus_one))) == 4
    assert c3.rp.group.abstract() == ((2,), 1)


def test_rp_f3_module_structure():
    # generated by [-1] subject to 2([-1] + <-1>[-1]) = 0
    F3 = ring("GF(3)")
    ctx = context(F3)
    g = ctx.special("gpb", F3.minus_one)
    s = ctx.combo([(1, g), (SqRingElement.an(ctx.sq, F3.minus_one), g)])
    grp = ctx.rp.group
    assert grp.element_order(ctx.rp.element(s)) == 2
    assert grp.element_order(ctx.rp.element(g)) is None
    bar, inc = ctx.rp_bar
    assert bar.describe() == "Z/2"
    assert grp.equal(inc.apply(bar.canonical_generators()[0]), ctx.rp.element(s))


@pytest.mark.parametrize("spec,rp,p", [
    ("GF(4)", "Z/5", "Z/5"), ("GF(5)", "Z/3 + Z", "Z/6"), ("GF(7)", "Z/4 + Z", "Z/8"),
    ("Z/9", "Z/6 + Z", "Z/12"), ("Z/4", "Z/6 + Z", "Z/2 + Z/6"),
])
def test_regression_groups(spec, rp, p):
    ctx = context(ring(spec))
    assert ctx.rp.group.describe() == rp
    assert ctx.pb.group.describe() == p


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_p_of_finite_field_has_order_q_plus_one(q):
    assert context(ring(f"GF({q})")).pb.group.order() == q + 1


# -- special elements ---------------------------------------------------------------

def test_special_chains_are_cycles_and_validate():
    F5 = ring("GF(5)")
    ctx = context(F5)
    for kind, params in [("C", ()), ("b", ()), ("psi1", (F5.element("2"),)),
                         ("psi2", (F5.element("3"),)), ("gpb", (F5.element("4"),)),
                         ("W", (F5.one, F5.zero, "inf"))]:
        e = special_chain(F5, kind, params)
        assert e.chain in ctx.lattice
    assert special_chain(F5, "W", (F5.one, F5.zero, "inf")).chain == ctx.special("C")
    with pytest.raises(DomainError):
        special_chain(F5, "gpb", (F5.one,))
    with pytest.raises(DomainError):
        special_chain(F5, "psi1", (F5.zero,))
    with pytest.raises(DomainError):
        special_chain(F5, "W", (F5.one, F5.one, "inf"))
    assert special_chain(F5, "gpb", (F5.element("2"),)).name == "[2]"


@pytest.mark.parametrize("spec", ["GF(3)", "GF(5)", "GF(7)", "Z/9", "GF(9)"])
def test_lambda1_formulas(spec):
    R = ring(spec)
    ctx = context(R)
    sq = ctx.sq
    one_plus = SqRingElement.one(sq) + SqRingElement.an(sq, R.minus_one)
    for a in sq.units:
        for kind in ("psi1", "psi2"):
            v = ctx.special(kind, a)
            assert brute_lambda1(R, v) == list((one_plus * SqRingElement.pf(sq, a)).coeffs)
    for a in ctx.wn:
        v = ctx.special("gpb", a)
        want = SqRingElement.pf(sq, a) * SqRingElement.pf(sq, R.sub(R.one, a)) * -1
        assert brute_lambda1(R, v) == list(want.coeffs)
        assert ctx.lambda1_chain(v) == want


# -- Sym^2 -----------------------------------------------------------------------

def test_sym2_structures():
    F27 = ring("GF(27)")
    assert Sym2(F27, "symmetric").group.describe() == "Z/26"
    assert Sym2(F27, "twisted").group.describe() == "Z/2"
    assert Sym2(ring("GF(4)"), "symmetric").group.describe() == "Z/3"
    assert Sym2(ring("Z/8"), "symmetric").group.order() == 8
    with pytest.raises(ValueError):
        Sym2(F27, "other")
    for conv in Sym2.CONVENTIONS:
        s = sym2_units(F27, conv)
        m1 = F27.minus_one
        assert s.group.element_order(s.pair(m1, m1)) == 2


units9 = st.integers(0, 7)


@settings(max_examples=60, deadline=None)
@given(units9, units9, units9)
def test_sym2_bilinear_and_symmetric(i, j, k):
    R = ring("GF(9)")
    us = R.units
    u, v, w = us[i], us[j], us[k]
    for conv, sign in (("symmetric", 1), ("twisted", -1)):
        s = sym2_units(R, conv)
        g = s.group
        lhs = s.pair(R.mul(u, v), w)
        rhs = dict(s.pair(u, w))
        for n, x in s.pair(v, w).items():
            rhs[n] = rhs.get(n, 0) + x
        assert g.equal(lhs, rhs)
        swapped = {n: sign * x for n, x in s.pair(v, u).items()}
        assert g.equal(s.pair(u, v), swapped)


# -- K_i and qRP ---------------------------------------------------------------------

@pytest.mark.parametrize("spec", ["GF(3)", "GF(5)", "GF(7)", "Z/9"])
def test_k_submodules(spec):
    R = ring(spec)
    for i in (1, 2):
        k = ks_submodule(R, i)
        assert k.torsion_is_r_psi_minus1
        assert k.lambda1_image_ok
        assert k.torsion_exponent in (1, 2)
    assert ks_submodule(R, 1).group.is_isomorphic(ks_submodule(R, 2).group)
    with pytest.raises(ValueError):
        ks_submodule(R, 3)


@pytest.mark.parametrize("spec", ["GF(3)", "GF(5)", "Z/4", "Z/9"])
def test_qrp_sequence_exact(spec):
    assert qrpb(ring(spec)).exact


# -- classical comparison -------------------------------------------------------------

def test_classical_presentations_examples():
    F3 = ring("GF(3)")
    cp = classical_presentations(F3)
    # one admissible element and two square classes: <1>[-1], <-1>[-1] with no relations
    assert cp.rp_cl.describe() == "Z^2"
    assert cp.orderings_agree
    cp5 = classical_presentations(ring("GF(5)"))
    assert cp5.p_cl.n_generators == 3
    cp2 = classical_presentations(ring("GF(2)"))
    assert cp2.p_cl.n_generators == 0 and cp2.pairs == []


@pytest.mark.parametrize("spec", ["GF(4)", "GF(5)", "GF(7)", "GF(9)"])
def test_alpha_beta_isomorphisms_for_large_enough_fields(spec):
    ab = compare_alpha_beta(ring(spec))
    assert ab.alpha_iso and ab.beta_iso


def test_alpha_not_injective_for_f3():
    ab = compare_alpha_beta(ring("GF(3)"))
    assert ab.alpha_surjective and not ab.alpha_iso


def test_classical_bloch_twisted():
    got = {q: classical_bloch(ring(f"GF({q})")).b_cl.describe() for q in (4, 5, 7, 9)}
    assert got == {4: "Z/5", 5: "Z/3", 7: "Z/4", 9: "Z/5"}


# -- functoriality ----------------------------------------------------------------------

def test_induced_map_f3_to_f9():
    F3, F9 = ring("GF(3)"), ring("GF(9)")
    h = prime_field_hom(F3, F9)
    f = induced_map(h)
    c3, c9 = context(F3), context(F9)
    g3 = c3.special("gpb", F3.minus_one)
    assert push_chain(h, g3) == c9.special("gpb", F9.minus_one)
    assert c9.rp.group.equal(f.apply(c3.rp.element(g3)), c9.rp.element(c9.special("gpb", F9.minus_one)))
    # psi1(-1) has order 2 in RP(F_3) but dies in RP(F_9), where -1 is a square
    p3 = c3.rp.element(c3.special("psi1", F3.minus_one))
    assert c3.rp.group.element_order(p3) == 2
    assert c9.rp.group.is_zero(f.apply(p3))


@pytest.mark.parametrize("spec,order", [("GF(3)", 2), ("GF(7)", 2), ("GF(5)", 1), ("GF(9)", 1)])
def test_psi1_minus_one_order(spec, order):
    R = ring(spec)
    ctx = context(R)
    assert ctx.rp.group.element_order(ctx.rp.element(ctx.special("psi1", R.minus_one))) == order


def test_identity_hom_induces_identity():
    F5 = ring("GF(5)")
    h = build_hom(F5, F5, {g: g for g in F5.ring_generators})
    f = induced_map(h)
    g = context(F5).rp.group
    for v in g.canonical_generators():
        assert g.equal(f.apply(v), v)


def test_extension_recipe_f3_f27():
    rec = extension_recipe(ring("GF(3)"), ring("GF(27)"))
    assert rec.kernel.describe() == "Z/2"
    assert rec.kernel_in_gpb == [2]


# -- battery ------------------------------------------------------------------------------

@pytest.mark.parametrize("spec", CORPUS)
def test_identity_battery_clean(spec):
    rep = identity_battery(ring(spec))
    assert rep.ok, [c for c in rep.failures]
    assert sum(v["passed"] for v in rep.summary().values()) == len(rep.checks)
