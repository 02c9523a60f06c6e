"""Acceptance criteria as plain functions, shared by ``blochlab suite`` and the test-suite.

Each ``criterion_N`` returns a :class:`Verdict`; nothing here raises on a
failed check, only on genuine errors.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import bloch
from .bloch import (classical_lambda_images, compare_alpha_beta, context, extension_recipe,
                    identity_battery, ks_submodule, qrpb, special_chain, sym2_units)
from .coinv import chain_module_coinvariants, sl2_generators, tuple_permutation
from .complexes import augmented_homology
from .config import Caps, default_caps
from .errors import TooLarge
from .exactlin import element_order, fp_subgroup, same_subgroup
from .geometry import projective_line, z_set
from .rings import FiniteRing, SqRingElement, parse_ring

DEFAULT_CORPUS = ("GF(2)", "GF(3)", "GF(4)", "GF(5)", "GF(7)", "GF(9)",
                  "Z/4", "Z/8", "Z/9", "GF(2)[t]/(t^2)", "Z/6")

LOCAL_ACYCLICITY = ("GF(2)", "GF(3)", "GF(4)", "GF(5)", "Z/4", "Z/9")


@dataclass
class Verdict:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    def line(self) -> str:
        return f"criterion {self.number:2d} [{'PASS' if self.passed else 'FAIL'}] {self.title}"

    def as_dict(self) -> dict:
        return {"title": self.title, "passed": self.passed, "detail": self.detail,
                "skipped": self.skipped}


def residue_field_size(ring: FiniteRing) -> int | None:
    """|A/m| for a local ring, ``None`` if ``ring`` is not local."""
    nonunits = [x for x in ring.elements() if not ring.is_unit(x)]
    ns = set(nonunits)
    if any(ring.add(a, b) not in ns for a in nonunits for b in nonunits):
        return None
    return ring.size // len(nonunits)


# ---------------------------------------------------------------------------
# fixed-ring criteria


def criterion_1() -> Verdict:
    R = parse_ring("GF(2)")
    ctx = context(R)
    w = special_chain(R, "W", (R.one, R.zero, "inf")).chain
    rp, p = ctx.rp.group, ctx.pb.group
    d = {
        "ltau3_rank": ctx.lattice.rank,
        "RP": rp.invariant_factors, "RP_free": rp.free_rank,
        "P": p.invariant_factors, "P_free": p.free_rank,
        "order_W_in_RP": element_order(rp, ctx.rp.element(w)),
        "order_W_in_P": element_order(p, ctx.pb.element(w)),
    }
    ok = (d["ltau3_rank"] == 2 and d["RP"] == [3] and d["P"] == [3] and not d["RP_free"]
          and not d["P_free"] and d["order_W_in_RP"] == 3 and d["order_W_in_P"] == 3)
    return Verdict(1, "RP(F2) = P(F2) = Z/3 generated by W(1,0,inf); L^tau_3(F2) has rank 2", ok, d)


def criterion_2() -> Verdict:
    R = parse_ring("GF(3)")
    ctx = context(R)
    g = ctx.rp.group
    m1 = R.minus_one
    x = ctx.special("gpb", m1)
    e1 = ctx.rp.element(x)
    e2 = ctx.rp.element(ctx.scale(m1, x))
    sub, _ = fp_subgroup(g, [e1, e2])
    whole = same_subgroup(g, [e1, e2], g.canonical_generators())
    s = dict(e1)
    for k, v in e2.items():
        s[k] = s.get(k, 0) + v
    d = {
        "RP": g.describe(),
        "generated_by_[-1]": whole,
        "order_[-1]": element_order(g, e1),
        "order_[-1]+<-1>[-1]": element_order(g, s),
        "relation_module": sub.describe(),
        "(1,1)_is_relation": sub.is_zero({0: 1, 1: 1}),
        "(2,2)_is_relation": sub.is_zero({0: 2, 1: 2}),
    }
    ok = (g.invariant_factors == [2] and g.free_rank == 1 and whole and d["order_[-1]"] is None
          and d["order_[-1]+<-1>[-1]"] == 2 and sub.invariant_factors == [2] and sub.free_rank == 1
          and d["(2,2)_is_relation"] and not d["(1,1)_is_relation"])
    return Verdict(2, "RP(F3) = Z + Z/2, generated over R by [-1] with the single relation 2([-1]+<-1>[-1]) = 0", ok, d)


def criterion_3() -> Verdict:
    R = parse_ring("GF(3)")
    ctx = context(R)
    m1 = R.minus_one
    p = ctx.pb.group
    x = ctx.special("gpb", m1)
    psi = ctx.special("psi1", m1)
    bar, inc = ctx.rp_bar
    lam = ctx.lambda1.apply_canonical(ctx.rp_class(x))
    want = SqRingElement.pf(ctx.sq, m1) * 2
    psi_in_bar = not any(ctx.lambda1.apply_canonical(ctx.rp_class(psi)))
    d = {
        "P": p.describe(), "order_[-1]_in_P": element_order(p, ctx.pb.element(x)),
        "RPbar": bar.describe(), "psi1(-1)_in_RPbar": psi_in_bar,
        "order_psi1(-1)": element_order(ctx.rp.group, ctx.rp.element(psi)),
        "lambda1([-1])": list(lam), "2<<-1>>": list(want.coeffs),
    }
    ok = (p.invariant_factors == [4] and p.free_rank == 0 and d["order_[-1]_in_P"] == 4
          and bar.invariant_factors == [2] and bar.free_rank == 0 and psi_in_bar
          and d["order_psi1(-1)"] == 2 and tuple(lam) == want.coeffs)
    return Verdict(3, "P(F3) = Z/4 on [-1]; RPbar(F3) = Z/2 on psi1(-1); lambda1([-1]) = 2<<-1>>", ok, d)


def criterion_4() -> Verdict:
    A, B = parse_ring("GF(3)"), parse_ring("GF(27)")
    sym = sym2_units(B, "symmetric")
    m1 = B.minus_one
    pair, _ = classical_lambda_images(B, m1, "symmetric")
    order = element_order(sym.group, pair)
    rec = extension_recipe(A, B, convention="symmetric")
    twisted = extension_recipe(A, B, convention="twisted")
    d = {
        "Sym2(F27^x)": sym.group.describe(), "order_lambda([-1])": order,
        "kernel": rec.kernel.describe(), "kernel_as_multiple_of_[-1]": rec.kernel_in_gpb,
        "twisted_kernel": twisted.kernel.describe(),
    }
    ok = (sym.group.invariant_factors == [26] and sym.group.free_rank == 0 and order == 2
          and rec.kernel.invariant_factors == [2] and rec.kernel_in_gpb == [2]
          and twisted.kernel.invariant_factors == [2])
    return Verdict(4, "lambda([-1]) has order 2 in Sym^2(F27^x) = Z/26; kernel on P(F3) is <2[-1]> of order 2", ok, d)


def criterion_6(caps: Caps | None = None) -> Verdict:
    d: dict = {}
    ok = True
    for spec in LOCAL_ACYCLICITY:
        R = parse_ring(spec, caps)
        k = residue_field_size(R)
        top = min(3, k - 1)
        hs = [augmented_homology(R, r) for r in range(top + 1)]
        d[spec] = {"residue_field": k, "checked_up_to": top, "homology": [h.describe() for h in hs]}
        ok &= all(h.is_trivial() for h in hs)
    h2 = augmented_homology(parse_ring("GF(2)"), 2)
    d["H2(GF(2))"] = h2.describe()
    ok &= h2.free_rank == 2 and not h2.invariant_factors
    return Verdict(6, "augmented homology vanishes for r <= min(3, |k|-1) on local rings; H2(L(F2)) = Z^2", ok, d)


def criterion_7() -> Verdict:
    d = {}
    ok = True
    for spec in ("GF(4)", "GF(5)", "GF(7)"):
        ab = compare_alpha_beta(parse_ring(spec))
        d[spec] = ab.as_dict()
        ok &= ab.alpha_iso and ab.beta_iso
    ab = compare_alpha_beta(parse_ring("GF(3)"))
    d["GF(3)"] = ab.as_dict()
    ok &= ab.alpha_surjective and not ab.alpha_iso
    return Verdict(7, "alpha, beta isomorphisms for GF(4), GF(5), GF(7); alpha onto but not injective for GF(3)", ok, d)


def criterion_9() -> Verdict:
    d = {}
    ok = True
    for spec in ("GF(3)", "GF(5)"):
        R = parse_ring(spec)
        s = context(R).sq.n_classes
        row = {}
        for n in range(4):
            g = chain_module_coinvariants(R, n).group
            want = 1 if n < 2 else s * len(z_set(R, n - 2))
            row[f"L{n}"] = {"group": g.describe(), "expected_rank": want}
            ok &= not g.invariant_factors and g.free_rank == want
        d[spec] = row
    return Verdict(9, "(L_0), (L_1) coinvariants are Z and (L_n) = R_A[Z_{n-2}] for n = 2, 3", ok, d)


def _orbits(line, n: int, gens) -> list:
    xs = line.cliques(n)
    parent = list(range(len(xs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in gens:
        for i, j in enumerate(tuple_permutation(line, n, g)):
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(len(xs))]


def criterion_10() -> Verdict:
    R = parse_ring("GF(5)")
    line = projective_line(R)
    sq = context(R).sq
    gens = sl2_generators(R)
    d = {}
    ok = True
    for n in (3, 4, 5):
        orbit = _orbits(line, n, gens)
        index = line.clique_index(n)
        zs = z_set(R, n - 3)
        fwd = all(line.xn_to_coords(line.coords_to_xn(sq.class_list[c], z)) == (c, z)
                  for c in range(sq.n_classes) for z in zs)
        back = True
        for i, t in enumerate(line.cliques(n)):
            c, z = line.xn_to_coords(t)
            u = line.coords_to_xn(sq.class_list[c], z)
            back &= orbit[index[u]] == orbit[i]
        n_orbits = len(set(orbit))
        d[f"X{n}"] = {"cliques": len(orbit), "orbits": n_orbits,
                      "coordinate_pairs": sq.n_classes * len(zs), "coords_roundtrip": fwd,
                      "orbit_roundtrip": back}
        ok &= fwd and back and n_orbits == sq.n_classes * len(zs)
    return Verdict(10, "X_n orbits <-> square classes x Z_{n-3} roundtrip over GF(5), n = 3, 4, 5", ok, d)


# ---------------------------------------------------------------------------
# per-ring criteria (5, 8)


def ring_checks(spec: str, caps: Caps | None = None) -> dict:
    """Battery and K-module checks for one ring, as a JSON-ready dict."""
    R = parse_ring(spec, caps)
    rep = identity_battery(R)
    k1, k2 = ks_submodule(R, 1), ks_submodule(R, 2)
    q = qrpb(R)
    k = residue_field_size(R)
    if k is None:
        acyc = "not local"
    else:
        top = min(3, k - 1)
        try:
            acyc = {f"H{r}": augmented_homology(R, r).describe() for r in range(top + 1)}
        except TooLarge as e:
            acyc = f"skipped: {e}"
    return {
        "acyclicity": acyc,
        "battery_total": len(rep.checks),
        "battery_failures": [f"{c.identity} @ {c.params}" for c in rep.failures],
        "K1": k1.group.describe(), "K2": k2.group.describe(),
        "lambda1(K1) = (1+<-1>)I": k1.lambda1_image_ok,
        "torsion(K1) = R psi1(-1)": k1.torsion_is_r_psi_minus1,
        "torsion exponent divides 2": 2 % k1.torsion_exponent == 0,
        "K1 = K2": k1.group.is_isomorphic(k2.group),
        "qRP sequence exact": q.exact,
    }


def _k_ok(r: dict) -> bool:
    keys = ("lambda1(K1) = (1+<-1>)I", "torsion(K1) = R psi1(-1)", "torsion exponent divides 2",
            "K1 = K2", "qRP sequence exact")
    return all(r[k] for k in keys)


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_suite(corpus: Sequence[str] = DEFAULT_CORPUS, threads: int = 1,
              caps: Caps | None = None) -> dict:
    """Run criteria 1-11; the result is a JSON-ready dict with one verdict per criterion."""
    caps = caps or default_caps()
    if not corpus:
        raise ValueError("empty corpus")

    def one(spec):
        try:
            return spec, ring_checks(spec, caps)
        except TooLarge as e:
            return spec, {"skipped": str(e)}

    per_ring = dict(_map(one, list(corpus), threads))
    done = {s: r for s, r in per_ring.items() if "skipped" not in r}
    skipped = sorted(s for s in per_ring if s not in done)
    v5 = Verdict(5, "identity battery passes on the corpus",
                 all(not r["battery_failures"] for r in done.values()),
                 {s: {"checks": r["battery_total"], "failures": r["battery_failures"]} for s, r in done.items()},
                 skipped)
    v8 = Verdict(8, "K_i structure and the qRP short exact sequence",
                 all(_k_ok(r) for r in done.values()),
                 {s: {k: v for k, v in r.items() if not k.startswith(("battery", "acyclicity"))}
                  for s, r in done.items()},
                 skipped)
    fixed = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_6, criterion_7,
             criterion_9, criterion_10]
    verdicts = {v.number: v for v in _map(lambda f: f(), fixed, threads)}
    verdicts[5], verdicts[8] = v5, v8
    verdicts[11] = criterion_11(corpus, threads, caps)
    out = {str(n): verdicts[n].as_dict() for n in sorted(verdicts)}
    out["acyclicity_by_ring"] = {s: r["acyclicity"] for s, r in done.items()}
    return out


def criterion_11(corpus: Sequence[str], threads: int, caps: Caps | None = None) -> Verdict:
    """Reports rendered sequentially and on a thread pool, each from cold caches, must agree byte for byte."""
    from .cli import render_report

    def render(spec):
        try:
            return render_report(parse_ring(spec, caps), ["rp", "pb", "rpker"])
        except TooLarge:
            return ""

    bloch.clear_caches()
    serial = _map(render, list(corpus), 1)
    bloch.clear_caches()
    pooled = _map(render, list(corpus), max(2, threads))
    ok = serial == pooled
    # the detail must not mention the thread count, or the suite output itself would differ
    return Verdict(11, "byte-identical JSON across thread counts", ok,
                   {"rings": len(serial), "pooled_matches_serial": ok})


def suite_json(result: dict) -> str:
    return json.dumps(result, sort_keys=True, indent=2)
