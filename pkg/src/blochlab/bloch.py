"""Distinguished elements, refined and classical pre-Bloch groups, and the identity battery.

Everything is built on a per-ring :class:`BlochContext`, which caches
the truncated lattice L^tau_3, its SL_2- and GL_2-coinvariants and the
derived maps.  Elements of RP(A) and P(A) are handled in canonical
coordinates of the corresponding :class:`FpAbGroup`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd
from typing import Sequence

from .coinv import (CoinvariantModule, diag, gl2_generators, permute, sl2_generators,
                    tuple_permutation)
from .complexes import boundary, chain, ltau3_lattice
from .config import Caps, default_caps
from .errors import DomainError, IllDefined
from .exactlin import (FpAbGroup, FpMap, element_order, fp_kernel, fp_lift, fp_map,
                       fp_quotient, fp_subgroup, same_subgroup, vadd)
from .geometry import ProjectiveLine, projective_line
from .rings import (FiniteRing, RingHom, SqRingElement, build_hom, parse_ring,
                    units_and_square_classes, wn_set)


# ---------------------------------------------------------------------------
# distinguished chains


KINDS = ("W", "C", "b", "psi1", "psi2", "gpb")


@dataclass(frozen=True)
class SpecialElement:
    """A distinguished chain in L^tau_3(A), optionally scaled by a square class."""

    kind: str
    params: tuple
    chain: dict = field(compare=False, hash=False)
    name: str = ""


def _point(line: ProjectiveLine, p) -> int:
    """Point from a ring element (meaning ``p_+``) or the string ``"inf"``."""
    if isinstance(p, str):
        if p in ("inf", "oo", "∞"):
            return line.infinity
        return line.plus(line.ring.element(p))
    return line.plus(p)


def _w_terms(x: int, y: int, z: int) -> list:
    return [(1, (y, z, x)), (1, (z, y, x)), (-1, (x, y, z)), (-1, (x, z, y))]


def special_chain(ring: FiniteRing, kind: str, params: Sequence = ()) -> SpecialElement:
    """Chain of a distinguished element.

    ``W`` takes three points (ring elements or ``"inf"``), ``psi1``/``psi2``
    a unit, ``gpb`` an element of wn(A); ``C`` and ``b`` take nothing.
    """
    R = ring
    line = projective_line(R)
    params = tuple(params)
    zero, inf, one = line.zero, line.infinity, line.one
    if kind == "W":
        if len(params) != 3:
            raise DomainError("W needs three points")
        pts = [_point(line, p) for p in params]
        if not line.is_clique(pts):
            raise DomainError("W needs a 3-clique")
        terms = _w_terms(*pts)
        name = "W(" + ",".join(line.label(p) for p in pts) + ")"
    elif kind == "C":
        terms = _w_terms(one, zero, inf)
        name = "C"
    elif kind == "b":
        m1 = line.plus(R.minus_one)
        terms = [(1, (one, zero, inf)), (1, (one, inf, zero)), (-1, (zero, inf, m1)), (-1, (inf, zero, m1))]
        name = "b"
    elif kind in ("psi1", "psi2"):
        (x,) = params
        if not R.is_unit(x):
            raise DomainError(f"{kind} needs a unit, got {R.label(x)}")
        xp = line.plus(x)
        if kind == "psi1":
            terms = [(1, (zero, inf, xp)), (1, (inf, zero, xp)), (-1, (zero, inf, one)), (-1, (inf, zero, one))]
        else:
            terms = [(1, (xp, zero, inf)), (1, (xp, inf, zero)), (-1, (one, zero, inf)), (-1, (one, inf, zero))]
        name = f"{kind}({R.label(x)})"
    elif kind == "gpb":
        (x,) = params
        if x not in set(wn_set(R)):
            raise DomainError(f"[x] needs x(1-x) to be a unit, got {R.label(x)}")
        terms = boundary(line, (zero, inf, one, line.plus(x)))
        name = f"[{R.label(x)}]"
    else:
        raise DomainError(f"unknown kind {kind!r}")
    v = chain(line, terms)
    ctx = context(R)
    if v not in ctx.lattice:
        raise IllDefined(f"{name} is not a cycle")
    return SpecialElement(kind, params, v, name)


# ---------------------------------------------------------------------------
# Sym^2 of the unit group


class Sym2:
    """Sym^2_Z(A^x) presented from the elementary-divisor form of A^x.

    Generators are ``e_i o e_j`` for ``i <= j``.  With ``convention =
    "symmetric"`` the pairing satisfies ``u o v = v o u``; with
    ``"twisted"`` it satisfies ``u o v = -(v o u)``, so ``2 (u o u) = 0``.
    Only the twisted pairing kills the five-term relations under
    ``[a] -> a o (1 - a)``, so it is the default.
    """

    CONVENTIONS = ("twisted", "symmetric")

    def __init__(self, ring: FiniteRing, convention: str = "twisted"):
        if convention not in self.CONVENTIONS:
            raise ValueError(f"unknown convention {convention!r}")
        self.ring = ring
        self.convention = convention
        sq = units_and_square_classes(ring)
        self.sq = sq
        mods = sq.unit_group.moduli
        self.moduli = mods
        k = len(mods)
        self.pairs = [(i, j) for i in range(k) for j in range(i, k)]
        self._pos = {p: n for n, p in enumerate(self.pairs)}
        rels = []
        for (i, j), n in self._pos.items():
            d = gcd(mods[i], mods[j])
            if i == j and convention == "twisted":
                d = gcd(d, 2)
            if d:
                rels.append({n: d})
        self.group = FpAbGroup(len(self.pairs), rels)

    def pair(self, u: int, v: int) -> dict:
        """Generator coordinates of ``u o v``."""
        a, b = self.sq.log(u), self.sq.log(v)
        twisted = self.convention == "twisted"
        out: dict = {}
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                n = self._pos[(min(i, j), max(i, j))]
                sign = -1 if twisted and i > j else 1
                out[n] = out.get(n, 0) + sign * x * y
        return {n: x for n, x in out.items() if x}


_SYM2: dict = {}


def sym2_units(ring: FiniteRing, convention: str = "twisted") -> Sym2:
    key = (id(ring), convention)
    hit = _SYM2.get(key)
    if hit is None or hit.ring is not ring:
        hit = Sym2(ring, convention)
        _SYM2[key] = hit
    return hit


# ---------------------------------------------------------------------------
# per-ring context


class BlochContext:
    """Lazily computed groups and maps attached to one ring."""

    def __init__(self, ring: FiniteRing):
        self.ring = ring
        self.line = projective_line(ring)
        self.sq = units_and_square_classes(ring)
        self.wn = wn_set(ring)
        self._chains: dict = {}

    # -- groups ----------------------------------------------------------------

    @cached_property
    def lattice(self):
        return ltau3_lattice(self.ring)

    @cached_property
    def rp(self) -> CoinvariantModule:
        return CoinvariantModule(self.line, 3, self.lattice, sl2_generators(self.ring), "SL2")

    @cached_property
    def pb(self) -> CoinvariantModule:
        return CoinvariantModule(self.line, 3, self.lattice, gl2_generators(self.ring), "GL2")

    @cached_property
    def rp_to_p(self) -> FpMap:
        """The natural surjection RP(A) -> P(A) (same generators)."""
        n = self.lattice.rank
        return fp_map(self.rp.group, self.pb.group, [{i: 1} for i in range(n)])

    @cached_property
    def class_perms(self) -> list:
        """Permutation of X_3 by diag(c, 1) for each square-class representative c."""
        return [tuple_permutation(self.line, 3, diag(self.ring, c)) for c in self.sq.class_list]

    @cached_property
    def free_classes(self) -> FpAbGroup:
        """Z^s with basis the square classes (underlying group of R_A)."""
        return FpAbGroup(self.sq.n_classes, [])

    # -- chains and classes ----------------------------------------------------------

    def special(self, kind: str, *params) -> dict:
        key = (kind, params)
        if key not in self._chains:
            self._chains[key] = special_chain(self.ring, kind, params).chain
        return self._chains[key]

    def scale(self, r, v: dict) -> dict:
        """``r . v`` for ``r`` in R_A (SqRingElement, unit, or class->coefficient dict)."""
        if isinstance(r, SqRingElement):
            coeffs = dict(enumerate(r.coeffs))
        elif isinstance(r, dict):
            coeffs = r
        else:
            coeffs = {self.sq.class_of[r]: 1}
        out: dict = {}
        for c, x in coeffs.items():
            if x:
                vadd(out, permute(v, self.class_perms[c]), x)
        return out

    def an(self, u: int) -> SqRingElement:
        return SqRingElement.an(self.sq, u)

    def pf(self, u: int) -> SqRingElement:
        return SqRingElement.pf(self.sq, u)

    def rp_class(self, v: dict) -> tuple:
        return self.rp.project(v)

    def p_class(self, v: dict) -> tuple:
        return self.pb.project(v)

    def combo(self, terms) -> dict:
        """Chain ``sum r_i . v_i`` from ``(r_i, v_i)`` pairs, ``r_i`` an int or R_A element."""
        out: dict = {}
        for r, v in terms:
            if isinstance(r, int):
                vadd(out, v, r)
            else:
                vadd(out, self.scale(r, v), 1)
        return out

    # -- lambda_1 ---------------------------------------------------------------

    def d_class(self, t: Sequence[int]) -> int:
        R, d = self.ring, self.line.det
        u, v, w = t
        return self.sq.class_of[R.mul(R.mul(d(u, v), d(u, w)), d(v, w))]

    def lambda1_chain(self, v: dict) -> SqRingElement:
        xs = self.line.cliques(3)
        coeffs = [0] * self.sq.n_classes
        for i, x in v.items():
            coeffs[self.d_class(xs[i])] += x
        return SqRingElement(self.sq, coeffs)

    @cached_property
    def lambda1(self) -> FpMap:
        images = []
        for b in self.lattice.basis:
            r = self.lambda1_chain(b)
            if r.augmentation():
                raise IllDefined("lambda_1 image leaves the augmentation ideal")
            images.append(dict(enumerate(r.coeffs)))
        return fp_map(self.rp.group, self.free_classes, images)

    @cached_property
    def rp_bar(self) -> tuple:
        """``(ker lambda_1, inclusion into RP)``."""
        return fp_kernel(self.lambda1)


_CONTEXTS: dict = {}


def context(ring: FiniteRing) -> BlochContext:
    hit = _CONTEXTS.get(id(ring))
    if hit is None or hit.ring is not ring:
        hit = BlochContext(ring)
        _CONTEXTS[id(ring)] = hit
    return hit


def rpb(ring: FiniteRing) -> CoinvariantModule:
    return context(ring).rp


def pb(ring: FiniteRing) -> CoinvariantModule:
    return context(ring).pb


def lambda1(ring: FiniteRing) -> FpMap:
    return context(ring).lambda1


# ---------------------------------------------------------------------------
# K_i and qRP


@dataclass
class KSubmodule:
    index: int
    group: FpAbGroup
    inclusion: FpMap
    generators: list          # RP generator-coordinate vectors <c>psi_i(a)
    torsion_in_rp: list       # torsion generators pushed into RP
    torsion_is_r_psi_minus1: bool
    torsion_exponent: int
    lambda1_image_ok: bool


def _r_span(ctx: BlochContext, v: dict) -> list:
    """RP generator coordinates of ``<c> v`` for every square class ``c``."""
    return [ctx.rp.element(ctx.scale({c: 1}, v)) for c in range(ctx.sq.n_classes)]


def ks_submodule(ring: FiniteRing, i: int) -> KSubmodule:
    if i not in (1, 2):
        raise ValueError("i must be 1 or 2")
    ctx = context(ring)
    kind = f"psi{i}"
    gens = []
    for a in ctx.sq.units:
        gens.extend(_r_span(ctx, ctx.special(kind, a)))
    group, inc = fp_subgroup(ctx.rp.group, gens)
    rpg = ctx.rp.group
    tors = [inc.apply(v) for v, d in zip(group.canonical_generators(), group.moduli) if d]
    r_psi = _r_span(ctx, ctx.special(kind, ring.minus_one))
    same = same_subgroup(rpg, tors, r_psi)
    exponent = group.torsion_exponent()
    # lambda_1(K_i) against (1 + <-1>) I_A
    lam = ctx.lambda1
    img = [lam.apply(g) for g in gens]
    one_plus = ctx.an(ring.one) + ctx.an(ring.minus_one)
    want = []
    for a in ctx.sq.class_list:
        for c in ctx.sq.class_list:
            r = one_plus * ctx.pf(a) * ctx.an(c)
            want.append(dict(enumerate(r.coeffs)))
    ok = same_subgroup(ctx.free_classes, img, want)
    return KSubmodule(i, group, inc, gens, tors, same, exponent, ok)


@dataclass
class QRPReport:
    qrp: FpAbGroup
    projection: FpMap
    qrp_bar: FpAbGroup
    qrp_bar_inclusion: FpMap
    kernel_is_r_psi_minus1: bool
    surjective: bool

    @property
    def exact(self) -> bool:
        return self.kernel_is_r_psi_minus1 and self.surjective


def qrpb(ring: FiniteRing) -> QRPReport:
    """qRP = RP/K_1 with the induced lambda_1 and the three-term sequence check."""
    ctx = context(ring)
    k1 = ks_submodule(ring, 1)
    rpg = ctx.rp.group
    q, proj = fp_quotient(rpg, k1.generators)
    # target I/(1+<-1>)I, realised inside Z^s/(1+<-1>)I
    one_plus = ctx.an(ring.one) + ctx.an(ring.minus_one)
    rels = []
    for a in ctx.sq.class_list:
        for c in ctx.sq.class_list:
            rels.append(dict(enumerate((one_plus * ctx.pf(a) * ctx.an(c)).coeffs)))
    target = FpAbGroup(ctx.sq.n_classes, rels)
    lam = ctx.lambda1
    # q is generated by the canonical generators of RP
    lam_q = fp_map(q, target, [dict(enumerate(lam.apply_canonical(_unit(rpg, j)))) for j in range(q.n_generators)])
    qbar, qbar_inc = fp_kernel(lam_q)
    bar, bar_inc = ctx.rp_bar
    comp = bar_inc.compose(proj)
    ker, ker_inc = fp_kernel(comp)
    ker_in_rp = [bar_inc.apply(ker_inc.apply(g)) for g in ker.canonical_generators()]
    r_psi = _r_span(ctx, ctx.special("psi1", ring.minus_one))
    kernel_ok = same_subgroup(rpg, ker_in_rp, r_psi)
    img_bar = [comp.apply(g) for g in bar.canonical_generators()]
    img_qbar = [qbar_inc.apply(g) for g in qbar.canonical_generators()]
    surj = same_subgroup(q, img_bar, img_qbar)
    return QRPReport(q, proj, qbar, qbar_inc, kernel_ok, surj)


def _unit(g: FpAbGroup, j: int) -> tuple:
    return tuple(int(i == j) for i in range(g.ngens_canonical))


# ---------------------------------------------------------------------------
# classical presentations


def admissible_pairs(ring: FiniteRing, ordering: str = "x/y") -> list:
    """Pairs ``(x, y)`` with ``x, y`` and ``x/y`` (or ``y/x``) in wn(A)."""
    wn = wn_set(ring)
    ws = set(wn)
    out = []
    for x in wn:
        for y in wn:
            r = ring.div(x, y) if ordering == "x/y" else ring.div(y, x)
            if r in ws:
                out.append((x, y))
    return out


def _five_terms(R: FiniteRing, x: int, y: int) -> list:
    """``(sign, weight unit, argument)`` for the refined five-term relation."""
    one = R.one
    xi, yi = R.inverse(x), R.inverse(y)
    return [
        (1, one, x),
        (-1, one, y),
        (1, x, R.div(y, x)),
        (-1, R.sub(xi, one), R.div(R.sub(one, xi), R.sub(one, yi))),
        (1, R.sub(one, x), R.div(R.sub(one, x), R.sub(one, y))),
    ]


@dataclass
class ClassicalPresentations:
    ring: FiniteRing
    wn: list
    n_classes: int
    rp_cl: FpAbGroup      # generator (a, c) at index wn_pos(a) * s + c, meaning <c>[a]
    p_cl: FpAbGroup       # generator a at index wn_pos(a)
    pairs: list
    orderings_agree: bool

    def rp_gen(self, a: int, c: int) -> int:
        return self.wn.index(a) * self.n_classes + c

    def p_gen(self, a: int) -> int:
        return self.wn.index(a)


def classical_presentations(ring: FiniteRing) -> ClassicalPresentations:
    R = ring
    sq = units_and_square_classes(R)
    wn = wn_set(R)
    pos = {a: i for i, a in enumerate(wn)}
    s = sq.n_classes
    pairs_a = admissible_pairs(R, "x/y")
    pairs_b = admissible_pairs(R, "y/x")
    pairs = sorted(set(pairs_a) | set(pairs_b))
    p_rels, rp_rels = [], []
    for x, y in pairs:
        terms = _five_terms(R, x, y)
        r: dict = {}
        for sign, _, arg in terms:
            vadd(r, {pos[arg]: sign})
        p_rels.append(r)
        for c in range(s):
            r = {}
            for sign, w, arg in terms:
                cls = sq.class_mul[c][sq.class_of[w]]
                vadd(r, {pos[arg] * s + cls: sign})
            rp_rels.append(r)
    return ClassicalPresentations(R, wn, s, FpAbGroup(len(wn) * s, rp_rels),
                                  FpAbGroup(len(wn), p_rels), pairs, set(pairs_a) == set(pairs_b))


@dataclass
class AlphaBeta:
    alpha: FpMap
    beta: FpMap
    alpha_surjective: bool
    alpha_iso: bool
    beta_surjective: bool
    beta_iso: bool

    def as_dict(self) -> dict:
        return {"alpha_surjective": self.alpha_surjective, "alpha_iso": self.alpha_iso,
                "beta_surjective": self.beta_surjective, "beta_iso": self.beta_iso}


def alpha_beta_maps(ring: FiniteRing) -> tuple:
    ctx = context(ring)
    cp = classical_presentations(ring)
    a_imgs = []
    for a in cp.wn:
        g = ctx.special("gpb", a)
        for c in range(cp.n_classes):
            a_imgs.append(ctx.rp.element(ctx.scale({c: 1}, g)))
    b_imgs = [ctx.pb.element(ctx.special("gpb", a)) for a in cp.wn]
    alpha = fp_map(cp.rp_cl, ctx.rp.group, a_imgs)
    beta = fp_map(cp.p_cl, ctx.pb.group, b_imgs)
    return cp, alpha, beta


def compare_alpha_beta(ring: FiniteRing) -> AlphaBeta:
    _, alpha, beta = alpha_beta_maps(ring)
    a_s, b_s = alpha.is_surjective(), beta.is_surjective()
    return AlphaBeta(alpha, beta, a_s, a_s and alpha.is_injective(), b_s, b_s and beta.is_injective())


@dataclass
class ClassicalBloch:
    presentations: ClassicalPresentations
    lam: FpMap            # P_cl -> Sym^2
    lam2: FpMap           # RP_cl -> Sym^2
    lam1: FpMap           # RP_cl -> Z^s
    b_cl: FpAbGroup
    b_cl_inclusion: FpMap
    rb_cl: FpAbGroup
    rb_cl_inclusion: FpMap


def classical_lambda_images(ring: FiniteRing, a: int, convention: str = "twisted") -> tuple:
    """``(a o (1-a)`` in Sym^2, ``<<a>><<1-a>>`` in R_A)``."""
    sym = sym2_units(ring, convention)
    sq = units_and_square_classes(ring)
    b = ring.sub(ring.one, a)
    r = SqRingElement.pf(sq, a) * SqRingElement.pf(sq, b)
    return sym.pair(a, b), r


def classical_bloch(ring: FiniteRing, convention: str = "twisted") -> ClassicalBloch:
    cp = classical_presentations(ring)
    sym = sym2_units(ring, convention)
    sq = units_and_square_classes(ring)
    s = cp.n_classes
    lam_imgs, lam2_imgs, lam1_imgs, both_imgs = [], [], [], []
    ns = sym.group.n_generators
    both = FpAbGroup(s + ns, [{s + j: x for j, x in r.items()} for r in sym.group.relations])
    for a in cp.wn:
        pair, r = classical_lambda_images(ring, a, convention)
        lam_imgs.append(pair)
        for c in range(s):
            lam2_imgs.append(pair)
            rc = r * SqRingElement(sq, {c: 1})
            lam1_imgs.append(dict(enumerate(rc.coeffs)))
            v = dict(enumerate(rc.coeffs))
            vadd(v, {s + j: x for j, x in pair.items()})
            both_imgs.append({k: x for k, x in v.items() if x})
    lam = fp_map(cp.p_cl, sym.group, lam_imgs)
    lam2 = fp_map(cp.rp_cl, sym.group, lam2_imgs)
    lam1 = fp_map(cp.rp_cl, FpAbGroup(s, []), lam1_imgs)
    joint = fp_map(cp.rp_cl, both, both_imgs)
    b_cl, b_inc = fp_kernel(lam)
    rb_cl, rb_inc = fp_kernel(joint)
    return ClassicalBloch(cp, lam, lam2, lam1, b_cl, b_inc, rb_cl, rb_inc)


# ---------------------------------------------------------------------------
# functoriality and the extension recipe


def induced_map(h: RingHom) -> FpMap:
    """RP(A) -> RP(B) induced by pushing cliques forward along ``h``."""
    A, B = h.source, h.target
    ca, cb = context(A), context(B)
    la, lb = ca.line, cb.line
    point_map = []
    for p in range(len(la)):
        u1, u2 = la.rep(p)
        point_map.append(lb.index(h(u1), h(u2)))
    index_b = lb.clique_index(3)
    xs = la.cliques(3)
    images = []
    for b in ca.lattice.basis:
        v: dict = {}
        for i, x in b.items():
            t = tuple(point_map[p] for p in xs[i])
            vadd(v, {index_b[t]: x})
        images.append(cb.rp.element(v))
    return fp_map(ca.rp.group, cb.rp.group, images)


def push_chain(h: RingHom, v: dict) -> dict:
    ca, cb = context(h.source), context(h.target)
    la, lb = ca.line, cb.line
    index_b = lb.clique_index(3)
    xs = la.cliques(3)
    out: dict = {}
    for i, x in v.items():
        t = tuple(lb.index(h(la.rep(p)[0]), h(la.rep(p)[1])) for p in xs[i])
        vadd(out, {index_b[t]: x})
    return out


def prime_field_hom(source: FiniteRing, target: FiniteRing) -> RingHom:
    return build_hom(source, target, {g: target.from_int(int(source.label(g))) for g in source.ring_generators})


@dataclass
class ExtensionRecipe:
    """Kernel of P(A) -> Sym^2(B^x), [a] -> h(a) o (1 - h(a)), for an extension B of A."""

    source: str
    target: str
    sym2: FpAbGroup
    images: dict          # label of a -> (canonical coords, order) of lambda([h(a)])
    kernel: FpAbGroup
    kernel_generators: list  # in P(A) canonical coordinates
    kernel_in_gpb: list      # multiples n with the generator equal to n [a0]


def extension_recipe(source: FiniteRing, target: FiniteRing, h: RingHom | None = None,
                     convention: str = "twisted") -> ExtensionRecipe:
    h = h or prime_field_hom(source, target)
    ctx = context(source)
    sym = sym2_units(target, convention)
    cp, _, beta = alpha_beta_maps(source)
    if not beta.is_surjective():
        raise IllDefined("P(A) is not generated by the elements [a]")
    lam_imgs = []
    images = {}
    for a in cp.wn:
        ha = h(a)
        pair = sym.pair(ha, target.sub(target.one, ha))
        lam_imgs.append(pair)
        images[source.label(a)] = (sym.group.canonical(pair), element_order(sym.group, pair))
    lam = fp_map(cp.p_cl, sym.group, lam_imgs)
    # lambda o beta^{-1} on P(A): lift each canonical generator of P(A)
    kb, kb_inc = fp_kernel(beta)
    for g in kb.canonical_generators():
        if any(lam.apply_canonical(cp.p_cl.canonical(kb_inc.apply(g)))):
            raise IllDefined("lambda does not factor through P(A)")
    pg = ctx.pb.group
    lifted = []
    for j in range(pg.ngens_canonical):
        x = fp_lift(beta, _unit(pg, j))
        lifted.append(lam.apply_canonical(x))
    f = FpMap(pg, sym.group, lifted)
    ker, inc = fp_kernel(f)
    gens = [pg.canonical(inc.apply(g)) for g in ker.canonical_generators()]
    multiples = []
    if cp.wn:
        a0 = ctx.p_class(ctx.special("gpb", cp.wn[0]))
        for g in gens:
            order = element_order(pg, pg.from_canonical(a0)) or 0
            hit = None
            for n in range(order or 64):
                if pg.reduce_canonical([n * x for x in a0]) == tuple(g):
                    hit = n
                    break
            multiples.append(hit)
    return ExtensionRecipe(source.spec_string, target.spec_string, sym.group, images, ker, gens, multiples)


# ---------------------------------------------------------------------------
# identity battery


@dataclass
class Check:
    identity: str
    params: str
    passed: bool


@dataclass
class BatteryReport:
    ring: str
    checks: list

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        names: dict = {}
        for c in self.checks:
            n = names.setdefault(c.identity, [0, 0])
            n[0 if c.passed else 1] += 1
        return {k: {"passed": v[0], "failed": v[1]} for k, v in sorted(names.items())}


def identity_battery(ring: FiniteRing) -> BatteryReport:
    R = ring
    ctx = context(R)
    line = ctx.line
    sq = ctx.sq
    units = sq.units
    wn = ctx.wn
    lab = R.label
    m1 = R.minus_one
    checks: list = []

    def rp(v):
        return ctx.rp_class(v)

    def p(v):
        return ctx.p_class(v)

    def record(name, params, ok):
        checks.append(Check(name, params, bool(ok)))

    def zero_rp(v):
        return not any(rp(v))

    def zero_p(v):
        return not any(p(v))

    S = ctx.special
    C, b = S("C"), S("b")
    an, pf = ctx.an, ctx.pf
    combo = ctx.combo

    # key identity and cocycle laws
    for x in units:
        record("key identity", lab(x), zero_rp(combo([(pf(x), C), (-1, S("psi1", x)), (1, S("psi2", x))])))
    for i in (1, 2):
        k = f"psi{i}"
        for x, y in product(units, units):
            v = combo([(1, S(k, R.mul(x, y))), (-1, ctx.scale(x, S(k, y))), (-1, S(k, x))])
            record(f"{k} cocycle", f"{lab(x)},{lab(y)}", zero_rp(v))
        for x in units:
            v = combo([(an(m1), S(k, x)), (-1, S(k, R.inverse(x)))])
            record(f"{k} inversion", lab(x), zero_rp(v))

    # W and C
    c_rp = rp(C)
    c_shifts = {rp(ctx.scale({c: 1}, C)) for c in range(sq.n_classes)}
    c_p = p(C)
    g = ctx.rp.group
    for t in line.cliques(3):
        w = chain(line, _w_terms(*t))
        wc = rp(w)
        name = line.tuple_label(t)
        record("3w = 0", name, not any(g.reduce_canonical([3 * x for x in wc])))
        record("w = <a>C", name, wc in c_shifts)
        record("w = C in P", name, p(w) == c_p)
    record("<-1>C = C", "", rp(ctx.scale(m1, C)) == c_rp)

    # b
    psi_m1 = S("psi1", m1)
    record("6b = 0", "", zero_rp(combo([(6, b)])))
    record("2b = C", "", zero_rp(combo([(2, b), (-1, C)])))
    record("3b = psi1(-1)", "", zero_rp(combo([(3, b), (-1, psi_m1)])))
    record("b + C + psi1(-1) = 0", "", zero_rp(combo([(1, b), (1, C), (1, psi_m1)])))

    # psi_1 relations
    for x in units:
        v = combo([(1, S("psi1", x)), (1, psi_m1), (-1, S("psi1", R.neg(R.inverse(x))))])
        record("psi1(x) + psi1(-1) = psi1(-1/x)", lab(x), zero_rp(v))
    record("2 psi1(-1) = 0", "", zero_rp(combo([(2, psi_m1)])))
    record("psi1(-1) = psi2(-1)", "", zero_rp(combo([(1, psi_m1), (-1, S("psi2", m1))])))
    for x in units:
        record("2 psi1(x) = 0 in P", lab(x), zero_p(combo([(2, S("psi1", x))])))

    # expansions over wn
    for x in wn:
        one_x = R.sub(R.one, x)
        xi = R.inverse(x)
        v = combo([(1, C), (-1, S("gpb", R.sub(R.one, xi))), (-1, ctx.scale(m1, S("gpb", one_x))),
                   (1, S("psi1", x))])
        record("C expansion", lab(x), zero_rp(v))
        v = combo([(1, b), (-1, S("gpb", x)), (-1, ctx.scale(m1, S("gpb", one_x))),
                   (-1, ctx.scale(pf(one_x), S("psi1", x)))])
        record("b expansion", lab(x), zero_rp(v))
        record("b = [x] + [1-x] in P", lab(x), zero_p(combo([(1, b), (-1, S("gpb", x)), (-1, S("gpb", one_x))])))
        v = combo([(1, S("psi2", x)), (-1, ctx.scale(R.sub(xi, R.one), S("gpb", x))),
                   (-1, ctx.scale(one_x, S("gpb", xi)))])
        record("psi2 expansion", lab(x), zero_rp(v))

    # abstract cocycle consequences
    minus_one_square = sq.class_of[m1] == sq.identity_class
    for i in (1, 2):
        k = f"psi{i}"
        for a, c in product(units, units):
            v = combo([(pf(a), S(k, c)), (-1, ctx.scale(pf(c), S(k, a)))])
            record(f"<<a>>{k}(b) = <<b>>{k}(a)", f"{lab(a)},{lab(c)}", zero_rp(v))
        for a in units:
            a2 = R.mul(a, a)
            record(f"{k}(a^2) = <<a>>{k}(-1)", lab(a),
                   zero_rp(combo([(1, S(k, a2)), (-1, ctx.scale(pf(a), S(k, m1)))])))
            record(f"2 {k}(a^2) = 0", lab(a), zero_rp(combo([(2, S(k, a2))])))
            if minus_one_square:
                record(f"{k}(a^2) = 0 when -1 is a square", lab(a), zero_rp(S(k, a2)))
        wset = set(wn)
        for u in R.elements():
            if R.neg(R.mul(u, u)) in wset:
                fix = R.add(R.one, R.mul(u, u))
                v = combo([(1, ctx.scale(fix, S(k, m1))), (-1, S(k, m1))])
                record(f"<1+u^2>{k}(-1) = {k}(-1)", lab(u), zero_rp(v))

    # lambda_1
    lam = ctx.lambda1
    one_plus = an(R.one) + an(m1)
    for i in (1, 2):
        for a in units:
            v = S(f"psi{i}", a)
            want = one_plus * pf(a)
            chain_ok = ctx.lambda1_chain(v) == want
            map_ok = lam.apply_canonical(rp(v)) == tuple(want.coeffs)
            record(f"lambda1(psi{i}(a))", lab(a), chain_ok and map_ok)
    for a in wn:
        v = S("gpb", a)
        want = -(pf(a) * pf(R.sub(R.one, a)))
        record("lambda1([a])", lab(a), ctx.lambda1_chain(v) == want and
               lam.apply_canonical(rp(v)) == tuple(want.coeffs))
    for j, d in enumerate(g.moduli):
        if d:
            record("lambda1(torsion) = 0", f"t{j}", not any(lam.apply_canonical(_unit(g, j))))

    # P as RP / I.RP
    rels = []
    for i, basis_vec in enumerate(ctx.lattice.basis):
        for c in range(sq.n_classes):
            e = ctx.rp.element(ctx.scale({c: 1}, basis_vec))
            vadd(e, {i: -1})
            rels.append(e)
    quot, _ = fp_quotient(g, rels)
    record("P = RP / I RP", "", quot.is_isomorphic(ctx.pb.group))

    # five-term relations
    for x, y in admissible_pairs(R, "x/y"):
        terms = _five_terms(R, x, y)
        v_rp = combo([(1, ctx.scale(w, S("gpb", arg))) if sign > 0 else (-1, ctx.scale(w, S("gpb", arg)))
                      for sign, w, arg in terms])
        v_p = combo([(sign, S("gpb", arg)) for sign, _, arg in terms])
        record("refined five-term relation", f"{lab(x)},{lab(y)}", zero_rp(v_rp))
        record("five-term relation in P", f"{lab(x)},{lab(y)}", zero_p(v_p))
    return BatteryReport(R.spec_string, checks)


# ---------------------------------------------------------------------------
# report


DISTINGUISHED = ("C", "b")


def distinguished_elements(ring: FiniteRing) -> list:
    """``[(name, chain)]`` for W(1,0,inf), C, b, psi_i(u) over units and [x] over wn."""
    ctx = context(ring)
    out = [("W(1,0,inf)", special_chain(ring, "W", (ring.one, ring.zero, "inf")).chain),
           ("C", ctx.special("C")), ("b", ctx.special("b"))]
    for k in ("psi1", "psi2"):
        for u in ctx.sq.units:
            out.append((f"{k}({element_name(ring, u)})", ctx.special(k, u)))
    for x in ctx.wn:
        out.append((f"[{element_name(ring, x)}]", ctx.special("gpb", x)))
    return out


def element_name(ring: FiniteRing, x: int) -> str:
    """Label of ``x``, writing ``-1`` for minus one when it differs from 1."""
    if x == ring.minus_one and x != ring.one:
        return "-1"
    return ring.label(x)


def group_record(g: FpAbGroup) -> dict:
    return {"invariant_factors": list(g.invariant_factors), "free_rank": g.free_rank,
            "description": g.describe()}


def element_record(g: FpAbGroup, coords: Sequence[int], expressed_as: str) -> dict:
    coords = list(g.reduce_canonical(list(coords)))
    order = element_order(g, g.from_canonical(coords))
    return {"coords": coords, "order": order if order is not None else "infinite",
            "expressed_as": expressed_as}


def load_ring(spec: str, caps: Caps | None = None) -> FiniteRing:
    caps = caps or default_caps()
    R = parse_ring(spec, caps)
    return R


# ---------------------------------------------------------------------------
# report assembly


TARGETS = ("rp", "pb", "rpker", "ks", "qrp", "classical", "compare", "bloch-classical", "battery")


def parse_targets(text: str) -> list:
    """Split and validate a comma separated target list (``acyclicity:N`` allowed)."""
    out = []
    for t in filter(None, (p.strip() for p in text.split(","))):
        if t.startswith("acyclicity:"):
            n = t.split(":", 1)[1]
            if not n.isdigit() or not 0 <= int(n) <= 3:
                raise ValueError(f"bad acyclicity target {t!r}")
        elif t not in TARGETS:
            raise ValueError(f"unknown target {t!r}")
        out.append(t)
    if not out:
        raise ValueError("no targets given")
    return out


def _cyclic_generators(g: FpAbGroup, named: list) -> list:
    """Names of elements that generate ``g`` on their own (only for cyclic ``g``)."""
    if g.ngens_canonical != 1:
        return []
    d = g.moduli[0]
    out = []
    for name, c in named:
        x = c[0]
        if (d == 0 and abs(x) == 1) or (d and gcd(x, d) == 1):
            out.append(name)
    return out


def _sq_record(ctx: BlochContext, r: SqRingElement) -> dict:
    return {ctx.sq.class_label(c): x for c, x in enumerate(r.coeffs) if x}


def bloch_report(ring: FiniteRing, targets: Sequence[str]) -> dict:
    """Deterministic, JSON-ready report for the requested targets."""
    from .complexes import augmented_homology

    ctx = context(ring)
    R = ring
    groups: dict = {}
    elements: dict = {}
    maps: dict = {}
    battery: dict = {}
    named = None

    def distinguished():
        nonlocal named
        if named is None:
            named = distinguished_elements(R)
        return named

    for t in targets:
        if t in ("rp", "pb"):
            mod = ctx.rp if t == "rp" else ctx.pb
            key = "RP" if t == "rp" else "P"
            coords = [(n, mod.project(v)) for n, v in distinguished()]
            rec = group_record(mod.group)
            rec["generated_by"] = _cyclic_generators(mod.group, coords)
            groups[key] = rec
            elements[key] = {n: element_record(mod.group, c, n) for n, c in coords}
        elif t == "rpker":
            bar, inc = ctx.rp_bar
            groups["RPbar"] = group_record(bar)
            lam = ctx.lambda1
            maps["lambda1"] = {n: _sq_record(ctx, ctx.lambda1_chain(v)) for n, v in distinguished()}
            maps["lambda1_kernel_members"] = sorted(
                n for n, v in distinguished() if not any(lam.apply_canonical(ctx.rp_class(v))))
        elif t == "ks":
            for i in (1, 2):
                k = ks_submodule(R, i)
                rec = group_record(k.group)
                rec.update({"torsion_exponent": k.torsion_exponent,
                            "torsion_is_R_psi(-1)": k.torsion_is_r_psi_minus1,
                            "lambda1_image_is_(1+<-1>)I": k.lambda1_image_ok})
                groups[f"K{i}"] = rec
        elif t == "qrp":
            q = qrpb(R)
            groups["qRP"] = group_record(q.qrp)
            groups["qRPbar"] = group_record(q.qrp_bar)
            maps["qrp_sequence"] = {"kernel_is_R_psi1(-1)": q.kernel_is_r_psi_minus1,
                                    "surjective": q.surjective, "exact": q.exact}
        elif t == "classical":
            cp = classical_presentations(R)
            groups["RP_cl"] = group_record(cp.rp_cl)
            groups["P_cl"] = group_record(cp.p_cl)
            maps["five_term"] = {"admissible_pairs": len(cp.pairs),
                                 "orderings_agree": cp.orderings_agree}
        elif t == "compare":
            maps["alpha_beta"] = compare_alpha_beta(R).as_dict()
        elif t == "bloch-classical":
            cb = classical_bloch(R)
            sym = sym2_units(R)
            groups["Sym2"] = dict(group_record(sym.group), convention=sym.convention)
            groups["B_cl"] = group_record(cb.b_cl)
            groups["RB_cl"] = group_record(cb.rb_cl)
            elements["Sym2"] = {}
            for a in ctx.wn:
                pair, _ = classical_lambda_images(R, a)
                n = f"lambda([{element_name(R, a)}])"
                elements["Sym2"][n] = element_record(sym.group, sym.group.canonical(pair), n)
        elif t == "battery":
            rep = identity_battery(R)
            battery = {"summary": rep.summary(), "total": len(rep.checks),
                       "failures": [{"identity": c.identity, "params": c.params} for c in rep.failures]}
        elif t.startswith("acyclicity:"):
            n = int(t.split(":")[1])
            hs = {}
            for r in range(n + 1):
                h = augmented_homology(R, r)
                hs[f"H{r}"] = dict(group_record(h), acyclic=h.is_trivial())
            groups["homology"] = hs
    sq = ctx.sq
    ring_rec = {"spec": R.spec_string, "size": R.size, "units": len(sq.units),
                "square_classes": [sq.class_label(c) for c in range(sq.n_classes)],
                "wn": [R.label(x) for x in ctx.wn]}
    return {"ring": ring_rec, "groups": groups, "elements": elements, "maps": maps, "battery": battery}


def clear_caches() -> None:
    """Drop every per-ring cache (contexts, projective lines, square classes, Sym^2)."""
    from . import coinv, geometry, rings
    _CONTEXTS.clear()
    _SYM2.clear()
    geometry._LINES.clear()
    rings._SQ_CACHE.clear()
    coinv._GEN_CACHE.clear()
