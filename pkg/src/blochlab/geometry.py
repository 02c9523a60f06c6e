"""Projective line over a finite ring, the graph Gamma(A) and its cliques.

Points are integers indexing :attr:`ProjectiveLine.points`, which is
sorted by canonical representative: the least unit multiple of a
unimodular row under the ring's element order.  Matrices act on the
right of row vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .config import Caps, default_caps
from .errors import NotAClique, TooLarge
from .rings import FiniteRing, units_and_square_classes, wn_set


@dataclass(frozen=True)
class ProjPoint:
    """Class of a unimodular row, stored through its canonical representative."""

    u1: int
    u2: int

    @property
    def representative(self) -> tuple[int, int]:
        return (self.u1, self.u2)


class ProjectiveLine:
    """X_1(A) with edge predicate and clique enumeration."""

    def __init__(self, ring: FiniteRing, caps: Caps | None = None):
        self.ring = ring
        self.caps = caps or default_caps()
        R = ring
        units = R.units
        rows = []
        for u1 in R.elements():
            for u2 in R.elements():
                if any(R.is_unit(R.add(u1, R.mul(c, u2))) for c in R.elements()):
                    rows.append((u1, u2))
        canon = {}
        for row in rows:
            if row in canon:
                continue
            orbit = {(R.mul(l, row[0]), R.mul(l, row[1])) for l in units}
            rep = min(orbit)
            for r in orbit:
                canon[r] = rep
        reps = sorted(set(canon.values()))
        self.points = [ProjPoint(*r) for r in reps]
        idx = {r: i for i, r in enumerate(reps)}
        self._index = {row: idx[rep] for row, rep in canon.items()}
        n = len(reps)
        self.adjacency = [0] * n
        for i in range(n):
            for j in range(n):
                if i != j and R.is_unit(self.det(i, j)):
                    self.adjacency[i] |= 1 << j
        self._cliques: dict = {1: [(i,) for i in range(n)]}
        self._clique_index: dict = {}

    def __len__(self) -> int:
        return len(self.points)

    # -- points --------------------------------------------------------------

    def index(self, u1: int, u2: int) -> int:
        try:
            return self._index[(u1, u2)]
        except KeyError:
            raise ValueError(f"({self.ring.label(u1)}, {self.ring.label(u2)}) is not unimodular") from None

    def rep(self, p: int) -> tuple[int, int]:
        return self.points[p].representative

    def plus(self, x: int) -> int:
        """The point ``x_+ = (x, 1)``."""
        return self.index(x, self.ring.one)

    def minus(self, x: int) -> int:
        """The point ``x_- = (1, x)``."""
        return self.index(self.ring.one, x)

    @property
    def zero(self) -> int:
        return self.plus(self.ring.zero)

    @property
    def infinity(self) -> int:
        return self.minus(self.ring.zero)

    @property
    def one(self) -> int:
        return self.plus(self.ring.one)

    def det(self, p: int, q: int) -> int:
        """``d(u, v)`` for the canonical representatives of ``p`` and ``q``."""
        R = self.ring
        (a, b), (c, d) = self.rep(p), self.rep(q)
        return R.sub(R.mul(a, d), R.mul(b, c))

    def is_edge(self, p: int, q: int) -> bool:
        return bool(self.adjacency[p] >> q & 1)

    def label(self, p: int) -> str:
        R = self.ring
        u1, u2 = self.rep(p)
        if R.is_unit(u2):
            x = R.div(u1, u2)
            return "0" if x == R.zero else f"{R.label(x)}+"
        if R.is_unit(u1):
            y = R.div(u2, u1)
            return "inf" if y == R.zero else f"{R.label(y)}-"
        return f"({R.label(u1)}:{R.label(u2)})"

    def tuple_label(self, t: Sequence[int]) -> str:
        return "(" + ",".join(self.label(p) for p in t) + ")"

    def act(self, p: int, g: Sequence[int]) -> int:
        """Image of point ``p`` under the matrix ``g = (a, b, c, d)`` acting on the right."""
        R = self.ring
        u1, u2 = self.rep(p)
        a, b, c, d = g
        return self.index(R.add(R.mul(u1, a), R.mul(u2, c)), R.add(R.mul(u1, b), R.mul(u2, d)))

    def permutation(self, g: Sequence[int]) -> list:
        return [self.act(p, g) for p in range(len(self.points))]

    # -- cliques -------------------------------------------------------------

    def is_clique(self, t: Sequence[int]) -> bool:
        if len(set(t)) != len(t):
            return False
        return all(self.is_edge(t[i], t[j]) for i in range(len(t)) for j in range(i + 1, len(t)))

    def cliques(self, n: int) -> list:
        """X_n: ordered n-tuples of distinct, pairwise joined points, lexicographic."""
        if n < 1:
            raise ValueError("n must be positive")
        if n in self._cliques:
            return self._cliques[n]
        prev = self.cliques(n - 1)
        limit = self.caps.cliques
        out = []
        adj = self.adjacency
        for t in prev:
            mask = (1 << len(self.points)) - 1
            for p in t:
                mask &= adj[p]
            while mask:
                low = mask & -mask
                q = low.bit_length() - 1
                out.append(t + (q,))
                mask ^= low
            if len(out) > limit:
                raise TooLarge(f"|X_{n}({self.ring.spec_string})| exceeds the clique cap {limit}")
        out.sort()
        self._cliques[n] = out
        return out

    def clique_index(self, n: int) -> dict:
        if n not in self._clique_index:
            self._clique_index[n] = {t: i for i, t in enumerate(self.cliques(n))}
        return self._clique_index[n]

    # -- coordinates ---------------------------------------------------------

    @cached_property
    def square_classes(self):
        return units_and_square_classes(self.ring)

    def xn_to_coords(self, t: Sequence[int]) -> tuple[int, tuple]:
        """(square class, Z-tuple) coordinates of a clique of length >= 3."""
        if len(t) < 3:
            raise ValueError("need at least three points")
        if not self.is_clique(t):
            raise NotAClique(self.tuple_label(t))
        R = self.ring
        d = self.det
        u1, u2, u3 = t[0], t[1], t[2]
        a = R.div(R.mul(d(u1, u2), d(u2, u3)), d(u1, u3))
        zs = []
        for ui in t[3:]:
            num = R.mul(d(u2, u3), d(u1, ui))
            den = R.mul(d(u1, u3), d(u2, ui))
            zs.append(R.div(num, den))
        return self.square_classes.class_of[a], tuple(zs)

    def coords_to_xn(self, a: int, z: Sequence[int]) -> tuple:
        """``(0, inf, a_+, (a z_1)_+, ...)`` for a unit ``a`` (or a square-class index via ``class_rep``)."""
        R = self.ring
        t = (self.zero, self.infinity, self.plus(a)) + tuple(self.plus(R.mul(a, zi)) for zi in z)
        if not self.is_clique(t):
            raise NotAClique(self.tuple_label(t))
        return t

    def cross_ratio(self, t: Sequence[int]) -> tuple[int, int]:
        """(square class, cross-ratio) of a 4-clique; its class in (L_3)_SL2 is <a>[z]."""
        if len(t) != 4:
            raise ValueError("cross ratio needs four points")
        if not self.is_clique(t):
            raise NotAClique(self.tuple_label(t))
        R = self.ring
        d = self.det
        a1, a2, a3, a4 = t
        cls = R.mul(R.mul(d(a1, a2), d(a1, a3)), d(a2, a3))
        z = R.div(R.mul(d(a1, a4), d(a2, a3)), R.mul(d(a1, a3), d(a2, a4)))
        return self.square_classes.class_of[cls], z


def z_set(ring: FiniteRing, n: int) -> list:
    """Z_n(A): n-tuples from wn(A) whose pairwise ratios also lie in wn(A)."""
    if n == 0:
        return [()]
    wn = wn_set(ring)
    wset = set(wn)
    out = []

    def extend(prefix):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for z in wn:
            if all(ring.div(z, y) in wset and ring.div(y, z) in wset for y in prefix):
                extend(prefix + [z])

    extend([])
    return out


_LINES: dict = {}


def projective_line(ring: FiniteRing, caps: Caps | None = None) -> ProjectiveLine:
    """Cached :class:`ProjectiveLine` for ``ring``."""
    hit = _LINES.get(id(ring))
    if hit is None or hit.ring is not ring:
        hit = ProjectiveLine(ring, caps)
        _LINES[id(ring)] = hit
    elif caps is not None:
        hit.caps = caps
    return hit


def proj_points(ring: FiniteRing) -> list:
    line = projective_line(ring)
    return list(line.points)


def is_edge(ring: FiniteRing, p: ProjPoint, q: ProjPoint) -> bool:
    line = projective_line(ring)
    return line.is_edge(line.index(p.u1, p.u2), line.index(q.u1, q.u2))


def cliques(ring: FiniteRing, n: int) -> list:
    if not 1 <= n <= 5:
        raise ValueError("clique size must be between 1 and 5")
    return projective_line(ring).cliques(n)
