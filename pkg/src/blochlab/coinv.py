"""SL_2 / GL_2 actions on cliques and coinvariants of stable lattices."""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .errors import GenerationIncomplete, NotAClique, NotStable
from .exactlin import FpAbGroup, FpMap, IntLattice, fp_map
from .geometry import ProjectiveLine, projective_line
from .rings import FiniteRing, units_and_square_classes


class Mat2(NamedTuple):
    """2x2 matrix [[a, b], [c, d]] over a finite ring (entries are element indices)."""

    a: int
    b: int
    c: int
    d: int

    def det(self, R: FiniteRing) -> int:
        return R.sub(R.mul(self.a, self.d), R.mul(self.b, self.c))

    def mul(self, R: FiniteRing, other: "Mat2") -> "Mat2":
        a, b, c, d = self
        e, f, g, h = other
        return Mat2(R.add(R.mul(a, e), R.mul(b, g)), R.add(R.mul(a, f), R.mul(b, h)),
                    R.add(R.mul(c, e), R.mul(d, g)), R.add(R.mul(c, f), R.mul(d, h)))

    def is_sl2(self, R: FiniteRing) -> bool:
        return self.det(R) == R.one

    def is_gl2(self, R: FiniteRing) -> bool:
        return R.is_unit(self.det(R))


def elementary(R: FiniteRing, a: int, upper: bool = True) -> Mat2:
    return Mat2(R.one, a, R.zero, R.one) if upper else Mat2(R.one, R.zero, a, R.one)


def diag(R: FiniteRing, u: int, v: int | None = None) -> Mat2:
    return Mat2(u, R.zero, R.zero, R.one if v is None else v)


def omega(R: FiniteRing) -> Mat2:
    """[[0, -1], [1, 0]]."""
    return Mat2(R.zero, R.minus_one, R.one, R.zero)


def sl2_order(R: FiniteRing) -> int:
    """|SL_2(A)|: each unimodular first row extends in exactly |A| ways."""
    return R.size * len(projective_rows(R))


def projective_rows(R: FiniteRing) -> list:
    return [(u1, u2) for u1 in R.elements() for u2 in R.elements()
            if any(R.is_unit(R.add(u1, R.mul(c, u2))) for c in R.elements())]


def gl2_order(R: FiniteRing) -> int:
    return sl2_order(R) * len(R.units)


def closure_size(R: FiniteRing, gens: Sequence[Mat2], limit: int | None = None) -> int:
    ident = Mat2(R.one, R.zero, R.zero, R.one)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                h = m.mul(R, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        if limit is not None and len(seen) > limit:
            break
    return len(seen)


_GEN_CACHE: dict = {}


def sl2_generators(R: FiniteRing, verify: bool = True) -> list:
    """Elementary matrices E12(a), E21(a) for ``a`` in an additive generating set."""
    gens = []
    for a in R.additive_generators:
        gens.append(elementary(R, a, True))
        gens.append(elementary(R, a, False))
    if verify:
        key = (id(R), "sl")
        if _GEN_CACHE.get(key, (None,))[0] is not R:
            want = sl2_order(R)
            got = closure_size(R, gens, want)
            if got != want:
                raise GenerationIncomplete(f"elementary matrices generate {got} of {want} elements of SL_2")
            _GEN_CACHE[key] = (R, got)
    return gens


def gl2_generators(R: FiniteRing, verify: bool = True) -> list:
    gens = sl2_generators(R, verify)
    sq = units_and_square_classes(R)
    gens = gens + [diag(R, u) for u in sq.unit_generators]
    if verify:
        key = (id(R), "gl")
        if _GEN_CACHE.get(key, (None,))[0] is not R:
            want = gl2_order(R)
            got = closure_size(R, gens, want)
            if got != want:
                raise GenerationIncomplete(f"generators reach {got} of {want} elements of GL_2")
            _GEN_CACHE[key] = (R, got)
    return gens


def act_on_tuple(line: ProjectiveLine, t: Sequence[int], g: Sequence[int]) -> tuple:
    out = tuple(line.act(p, g) for p in t)
    if not line.is_clique(out):
        raise NotAClique("action produced a non-clique; matrix is not invertible")
    return out


def tuple_permutation(line: ProjectiveLine, n_points: int, g: Sequence[int]) -> list:
    """Permutation of X_n induced by ``g``: entry ``i`` is the index of ``X_n[i] * g``."""
    pts = line.permutation(g)
    index = line.clique_index(n_points)
    return [index[tuple(pts[p] for p in t)] for t in line.cliques(n_points)]


def permute(v: dict, perm: Sequence[int]) -> dict:
    return {perm[k]: x for k, x in v.items()}


class CoinvariantModule:
    """Coinvariants ``M_G`` of a G-stable lattice ``M`` inside ``Z[X_n]``.

    Generators of :attr:`group` are the lattice basis vectors; relations
    are ``b - b.g`` for basis vectors ``b`` and matrix generators ``g``.
    """

    def __init__(self, line: ProjectiveLine, n_points: int, lattice: IntLattice,
                 gens: Sequence[Mat2], group_tag: str):
        self.line = line
        self.n_points = n_points
        self.lattice = lattice
        self.group_tag = group_tag
        self.matrices = list(gens)
        self.perms = [tuple_permutation(line, n_points, g) for g in gens]
        rels = []
        for i, b in enumerate(lattice.basis):
            for perm in self.perms:
                coords = lattice.coordinates(permute(b, perm), strict=False)
                if coords is None:
                    raise NotStable(f"basis vector {i} leaves the lattice")
                row = {j: -x for j, x in enumerate(coords) if x}
                row[i] = row.get(i, 0) + 1
                rels.append(row)
        self.group: FpAbGroup = FpAbGroup(lattice.rank, rels)
        self._actions: dict = {}

    def element(self, v: dict) -> dict:
        """Generator coordinates of a lattice vector (a chain in Z[X_n])."""
        return {j: x for j, x in enumerate(self.lattice.coordinates(v)) if x}

    def project(self, v: dict) -> tuple:
        """Canonical coordinates of the class of the chain ``v``."""
        return self.group.canonical(self.element(v))

    def act_chain(self, v: dict, g: Sequence[int]) -> dict:
        return permute(v, tuple_permutation(self.line, self.n_points, g))

    def square_class_action(self, u: int) -> FpMap:
        """Endomorphism induced by diag(u, 1) (meaningful for SL_2 coinvariants)."""
        R = self.line.ring
        sq = units_and_square_classes(R)
        key = sq.class_of[u]
        if key in self._actions:
            return self._actions[key]
        perm = tuple_permutation(self.line, self.n_points, diag(R, u))
        images = [self.element(permute(b, perm)) for b in self.lattice.basis]
        f = fp_map(self.group, self.group, images)
        self._actions[key] = f
        return f


def coinvariants(lattice: IntLattice, gens: Sequence[Mat2], line: ProjectiveLine,
                 n_points: int, group_tag: str = "SL2") -> CoinvariantModule:
    return CoinvariantModule(line, n_points, lattice, gens, group_tag)


def full_lattice(n: int) -> IntLattice:
    return IntLattice(n, [{i: 1} for i in range(n)], _trusted=True)


def chain_module_coinvariants(R: FiniteRing, n: int, group_tag: str = "SL2") -> CoinvariantModule:
    """``(L_n)_G`` for G = SL_2 or GL_2."""
    line = projective_line(R)
    size = len(line.cliques(n + 1))
    gens = sl2_generators(R) if group_tag == "SL2" else gl2_generators(R)
    return CoinvariantModule(line, n + 1, full_lattice(size), gens, group_tag)


def square_class_action(module: CoinvariantModule, u: int) -> FpMap:
    return module.square_class_action(u)
