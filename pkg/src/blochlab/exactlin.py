"""Exact integer linear algebra and finitely presented abelian groups.

Everything here works over Python integers; nothing is ever rounded.
Vectors are sparse ``{index: coefficient}`` dictionaries unless a
function says otherwise.

A finitely presented abelian group is stored as generators plus
relation *rows*.  Construction runs a sparse Tietze pass (eliminating a
generator whenever some relation has a unit coefficient) followed by a
dense Smith normal form on whatever is left, which keeps the large
coinvariant presentations of the clique complexes tractable.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

from .errors import IllDefined

Vector = dict
VectorLike = Union[Mapping[int, int], Sequence[int]]

INFINITE = None  # order of a non-torsion element


def as_vector(v: VectorLike) -> dict:
    """Normalise a dense sequence or a mapping to a sparse dict without zeros."""
    if isinstance(v, Mapping):
        return {int(k): int(x) for k, x in v.items() if x}
    return {i: int(x) for i, x in enumerate(v) if x}


def vadd(acc: dict, v: Mapping[int, int], scale: int = 1) -> dict:
    """In-place ``acc += scale * v``, dropping zero entries."""
    if not scale:
        return acc
    for k, x in v.items():
        y = acc.get(k, 0) + scale * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


def vscale(v: Mapping[int, int], scale: int) -> dict:
    if not scale:
        return {}
    return {k: scale * x for k, x in v.items()}


def vcombine(terms: Iterable[tuple[int, Mapping[int, int]]]) -> dict:
    acc: dict = {}
    for c, v in terms:
        vadd(acc, v, c)
    return acc


def dense(v: Mapping[int, int], n: int) -> list:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out


# ---------------------------------------------------------------------------
# Matrices


class IntMatrix:
    """Integer matrix stored as a list of sparse row dictionaries."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Sequence[Mapping[int, int]] | None = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = [dict() for _ in range(rows)]
        else:
            if len(data) != rows:
                raise ValueError("row count mismatch")
            self._data = [as_vector(r) for r in data]
            for r in self._data:
                for j in r:
                    if not 0 <= j < cols:
                        raise IndexError(f"column {j} out of range")

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        entries = [list(r) for r in entries]
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        return cls(len(entries), cols, entries)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return self._data[i].get(j, 0)

    def row(self, i: int) -> dict:
        return self._data[i]

    def row_dicts(self) -> list:
        return self._data

    def to_dense(self) -> list:
        return [dense(r, self.cols) for r in self._data]

    def transpose(self) -> "IntMatrix":
        t = IntMatrix(self.cols, self.rows)
        for i, r in enumerate(self._data):
            for j, x in r.items():
                t._data[j][i] = x
        return t

    def apply(self, v: Mapping[int, int]) -> dict:
        """Matrix times column vector ``v``."""
        out = {}
        for i, r in enumerate(self._data):
            s = 0
            if len(r) < len(v):
                for j, x in r.items():
                    y = v.get(j)
                    if y:
                        s += x * y
            else:
                for j, y in v.items():
                    x = r.get(j)
                    if x:
                        s += x * y
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = IntMatrix(self.rows, other.cols)
        for i, r in enumerate(self._data):
            acc: dict = {}
            for k, x in r.items():
                vadd(acc, other._data[k], x)
            out._data[i] = acc
        return out

    def is_zero(self) -> bool:
        return not any(self._data)

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._data) == (other.rows, other.cols, other._data)

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"IntMatrix({self.to_dense()})"
        return f"IntMatrix<{self.rows}x{self.cols}, nnz={self.nnz()}>"


def _as_dense(m) -> list:
    if isinstance(m, IntMatrix):
        return m.to_dense()
    return [list(map(int, r)) for r in m]


def _identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _snf_dense(a: list, nrows: int, ncols: int, want_u: bool = True):
    """Smith form of a dense matrix (modified in place).

    Returns ``(a, U, V, Vinv)`` with ``U @ a_orig @ V == a`` and
    ``V @ Vinv == I``.  Pivots are always the entry of least absolute
    value (ties broken by position), so the result is deterministic.
    """
    U = _identity(nrows) if want_u else None
    V = _identity(ncols)
    Vinv = _identity(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_sub(i, t, q):  # row_i -= q * row_t
        ri, rt = a[i], a[t]
        for k in range(ncols):
            if rt[k]:
                ri[k] -= q * rt[k]
        if U is not None:
            ui, ut = U[i], U[t]
            for k in range(nrows):
                if ut[k]:
                    ui[k] -= q * ut[k]

    def col_sub(j, t, q):  # col_j -= q * col_t
        for r in a:
            if r[t]:
                r[j] -= q * r[t]
        for r in V:
            if r[t]:
                r[j] -= q * r[t]
        # inverse: row_t(Vinv) += q * row_j(Vinv)
        vt, vj = Vinv[t], Vinv[j]
        for k in range(ncols):
            if vj[k]:
                vt[k] += q * vj[k]

    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            row = a[i]
            for j in range(t, ncols):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    row_sub(i, t, a[i][t] // p)
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    col_sub(j, t, a[t][j] // p)
                    if a[t][j]:
                        clean = False
            if not clean:
                cand = None
                for i in range(t + 1, nrows):
                    x = a[i][t]
                    if x and (cand is None or abs(x) < cand[0]):
                        cand = (abs(x), "r", i)
                for j in range(t + 1, ncols):
                    x = a[t][j]
                    if x and (cand is None or abs(x) < cand[0]):
                        cand = (abs(x), "c", j)
                if cand[1] == "r":
                    swap_rows(cand[2], t)
                else:
                    swap_cols(cand[2], t)
                continue
            bad = None
            for i in range(t + 1, nrows):
                row = a[i]
                for j in range(t + 1, ncols):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_sub(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return a, U, V, Vinv


def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(S, U, V)`` with ``U @ m @ V == S`` and S in Smith form."""
    a = _as_dense(m)
    nrows = len(a)
    ncols = m.cols if isinstance(m, IntMatrix) else (len(a[0]) if a else 0)
    s, u, v, _ = _snf_dense(a, nrows, ncols)
    return (IntMatrix.from_dense(s, ncols), IntMatrix.from_dense(u, nrows),
            IntMatrix.from_dense(v, ncols))


def invariant_factors(m) -> list:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    s, _, _ = smith_normal_form(m)
    return [s[i, i] for i in range(min(s.rows, s.cols)) if s[i, i]]


def determinant(m) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = _as_dense(m)
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Hermite form and lattices


def hermite_rows(vectors: Iterable[VectorLike], ncols: int) -> list:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero rows as sparse dicts: echelon, leading entries
    positive, entries above each pivot reduced into ``[0, pivot)``.
    """
    rows = [as_vector(v) for v in vectors]
    rows = [r for r in rows if r]
    out: list = []
    pivots: list = []
    for col in range(ncols):
        active = [r for r in rows if col in r]
        if not active:
            continue
        rest = [r for r in rows if col not in r]
        while len(active) > 1:
            active.sort(key=lambda r: (abs(r[col]), len(r)))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                vadd(r, piv, -q)
                if col in r:
                    nxt.append(r)
                elif r:
                    rest.append(r)
            active = nxt
        piv = active[0]
        if piv[col] < 0:
            piv = vscale(piv, -1)
        rows = rest
        out.append(piv)
        pivots.append(col)
    # reduce above pivots
    for i in range(len(out)):
        p = pivots[i]
        for k in range(i):
            x = out[k].get(p, 0)
            q = x // out[i][p]
            if q:
                vadd(out[k], out[i], -q)
    return out


class IntLattice:
    """Sublattice of ``Z^ambient_rank`` with a Hermite-reduced row basis.

    If ``equations`` is given the lattice is the full integer kernel of
    that matrix, which makes membership testing a single product.
    """

    __slots__ = ("ambient_rank", "basis", "pivots", "unit_pivots", "equations")

    def __init__(self, ambient_rank: int, basis: Sequence[Mapping[int, int]],
                 equations: IntMatrix | None = None, _trusted: bool = False):
        self.ambient_rank = ambient_rank
        if _trusted:
            self.basis = list(basis)
        else:
            self.basis = hermite_rows(basis, ambient_rank)
        self.pivots = [min(b) for b in self.basis]
        self.unit_pivots = all(b[p] == 1 for b, p in zip(self.basis, self.pivots))
        self.equations = equations

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v: VectorLike) -> bool:
        v = as_vector(v)
        if self.equations is not None:
            return not self.equations.apply(v)
        return self.coordinates(v, strict=False) is not None

    def coordinates(self, v: VectorLike, strict: bool = True, check: bool = True):
        """Coordinates of ``v`` in the basis.

        Raises ``ValueError`` (or returns None when ``strict`` is false)
        if ``v`` is not in the lattice.
        """
        v = as_vector(v)
        if self.unit_pivots:
            coords = [v.get(p, 0) for p in self.pivots]
            if check:
                if self.equations is not None:
                    ok = all(0 <= k < self.ambient_rank for k in v) and not self.equations.apply(v)
                else:
                    rest = dict(v)
                    for c, b in zip(coords, self.basis):
                        vadd(rest, b, -c)
                    ok = not rest
                if not ok:
                    if strict:
                        raise ValueError("vector not in lattice")
                    return None
            return coords
        rest = dict(v)
        coords = []
        for b, p in zip(self.basis, self.pivots):
            x = rest.get(p, 0)
            if x % b[p]:
                if strict:
                    raise ValueError("vector not in lattice")
                return None
            c = x // b[p]
            coords.append(c)
            vadd(rest, b, -c)
        if rest:
            if strict:
                raise ValueError("vector not in lattice")
            return None
        return coords

    def vector(self, coords: Sequence[int]) -> dict:
        return vcombine(zip(coords, self.basis))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntLattice):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.basis == other.basis

    def __repr__(self) -> str:
        return f"IntLattice(rank={self.rank}, ambient={self.ambient_rank})"


def _sparse_rref_reversed(rows: list, ncols: int):
    """Gauss-Jordan over Q, choosing pivot columns from the right.

    Returns ``{pivot_col: row}`` with each row scaled so its pivot is 1.
    Entries stay ints while divisions are exact and fall back to
    ``Fraction`` otherwise.
    """
    live = {i: dict(r) for i, r in enumerate(rows) if r}
    col_rows = defaultdict(set)
    for i, r in live.items():
        for j in r:
            col_rows[j].add(i)
    unused = set(live)
    pivot_of: dict = {}
    for col in range(ncols - 1, -1, -1):
        cands = [i for i in col_rows.get(col, ()) if i in unused]
        if not cands:
            continue
        cands.sort(key=lambda i: (abs(live[i][col]) != 1, len(live[i]), i))
        p = cands[0]
        prow = live[p]
        pv = prow[col]
        if pv != 1:
            new = {}
            for j, x in prow.items():
                y = Fraction(x, pv) if not isinstance(x, Fraction) else x / pv
                if y.denominator == 1:
                    y = int(y)
                new[j] = y
            prow = live[p] = new
        unused.discard(p)
        pivot_of[col] = p
        for i in list(col_rows[col]):
            if i == p:
                continue
            r = live[i]
            a = r[col]
            for j, x in prow.items():
                y = r.get(j, 0) - a * x
                if isinstance(y, Fraction) and y.denominator == 1:
                    y = int(y)
                if y:
                    if j not in r:
                        col_rows[j].add(i)
                    r[j] = y
                else:
                    if j in r:
                        del r[j]
                        col_rows[j].discard(i)
    return {c: live[i] for c, i in pivot_of.items()}


def kernel_lattice(m) -> IntLattice:
    """Saturated lattice ``{v in Z^cols : m v = 0}`` in Hermite form."""
    if not isinstance(m, IntMatrix):
        a = _as_dense(m)
        m = IntMatrix.from_dense(a, len(a[0]) if a else 0)
    ncols = m.cols
    pivot_rows = _sparse_rref_reversed(m.row_dicts(), ncols)
    by_col = defaultdict(list)
    for q, r in pivot_rows.items():
        for j, x in r.items():
            if j != q:
                by_col[j].append((q, x))
    basis = []
    integral = True
    for f in range(ncols):
        if f in pivot_rows:
            continue
        v = {f: 1}
        for q, x in by_col.get(f, ()):
            if isinstance(x, Fraction):
                integral = False
                break
            v[q] = -x
        if not integral:
            break
        basis.append(v)
    if integral:
        return IntLattice(ncols, basis, equations=m, _trusted=True)
    return IntLattice(ncols, _dense_integer_kernel(m), equations=m)


def _dense_integer_kernel(m: IntMatrix) -> list:
    """Integer kernel basis via unimodular column reduction (saturated)."""
    a = m.to_dense()
    s, _, v, _ = _snf_dense(a, m.rows, m.cols, want_u=False)
    r = sum(1 for i in range(min(m.rows, m.cols)) if s[i][i])
    return [{i: v[i][j] for i in range(m.cols) if v[i][j]} for j in range(r, m.cols)]


# ---------------------------------------------------------------------------
# Finitely presented abelian groups


def _tietze(n: int, rows: list):
    """Eliminate generators using relations with a +-1 coefficient.

    Returns ``(eliminations, survivors, remaining_rows)`` where
    ``eliminations`` is an ordered list of ``(generator, expression)``
    meaning ``g = sum(c * h for h, c in expression)`` in terms of
    generators still alive at that moment.
    """
    live = {}
    col_rows = defaultdict(set)
    for i, r in enumerate(rows):
        r = {j: x for j, x in r.items() if x}
        if r:
            live[i] = r
            for j in r:
                col_rows[j].add(i)
    heap = []
    version = {}

    def push(i):
        r = live[i]
        version[i] = version.get(i, 0) + 1
        if any(abs(x) == 1 for x in r.values()):
            heapq.heappush(heap, (len(r), i, version[i]))

    for i in live:
        push(i)
    elim = []
    while heap:
        ln, i, ver = heapq.heappop(heap)
        if i not in live or version[i] != ver:
            continue
        prow = live.pop(i)
        for j in prow:
            col_rows[j].discard(i)
        units = [j for j, x in prow.items() if abs(x) == 1]
        c = min(units, key=lambda j: (len(col_rows[j]), j))
        s = prow[c]
        expr = {j: -s * x for j, x in prow.items() if j != c}
        elim.append((c, expr))
        for k in list(col_rows[c]):
            r = live[k]
            a = r[c] * s
            for j, x in prow.items():
                y = r.get(j, 0) - a * x
                if y:
                    if j not in r:
                        col_rows[j].add(k)
                    r[j] = y
                elif j in r:
                    del r[j]
                    col_rows[j].discard(k)
            if r:
                push(k)
            else:
                del live[k]
        col_rows.pop(c, None)
    gone = {c for c, _ in elim}
    survivors = [g for g in range(n) if g not in gone]
    return elim, survivors, [live[i] for i in sorted(live)]


class FpAbGroup:
    """Finitely presented abelian group ``Z^n / <relations>``.

    Elements are written in *generator coordinates* (vectors of length
    ``n_generators``).  ``canonical`` turns them into coordinates for the
    decomposition ``Z/d_1 + ... + Z/d_k + Z^free_rank``.
    """

    def __init__(self, n_generators: int, relation_rows: Sequence[VectorLike] = (),
                 labels: Sequence[str] | None = None):
        self.n_generators = n_generators
        rels = [as_vector(r) for r in relation_rows]
        rels = [r for r in rels if r]
        for r in rels:
            for j in r:
                if not 0 <= j < n_generators:
                    raise IndexError(f"relation mentions generator {j}")
        self.relations = rels
        self.labels = list(labels) if labels is not None else None
        elim, survivors, rest = _tietze(n_generators, rels)
        self._elim = elim
        self._survivors = survivors
        pos = {g: i for i, g in enumerate(survivors)}
        m = len(survivors)
        a = [[0] * m for _ in rest]
        for i, r in enumerate(rest):
            for j, x in r.items():
                a[i][pos[j]] = x
        if rest:
            s, _, v, vinv = _snf_dense(a, len(rest), m, want_u=False)
            diag = [s[i][i] if i < len(rest) else 0 for i in range(m)]
            self._V, self._Vinv = v, vinv
        else:
            diag = [0] * m
            self._V = self._Vinv = None
        self._diag = diag
        self._torsion_pos = [i for i, d in enumerate(diag) if d > 1]
        self._free_pos = [i for i, d in enumerate(diag) if d == 0]
        self.invariant_factors = [diag[i] for i in self._torsion_pos]
        self.free_rank = len(self._free_pos)
        self._moduli = self.invariant_factors + [0] * self.free_rank

    # -- structure ---------------------------------------------------------

    @property
    def ngens_canonical(self) -> int:
        return len(self._moduli)

    @property
    def moduli(self) -> list:
        """Modulus of each canonical coordinate (0 for free ones)."""
        return list(self._moduli)

    def abstract(self) -> tuple:
        return tuple(self.invariant_factors), self.free_rank

    def is_isomorphic(self, other: "FpAbGroup") -> bool:
        return self.abstract() == other.abstract()

    def is_trivial(self) -> bool:
        return not self._moduli

    def order(self):
        if self.free_rank:
            return INFINITE
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def torsion_exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"FpAbGroup({self.describe()}, n_generators={self.n_generators})"

    # -- coordinates -------------------------------------------------------

    def _reduce(self, y: Sequence[int]) -> tuple:
        return tuple(x % d if d else x for x, d in zip(y, self._moduli))

    def canonical(self, v: VectorLike) -> tuple:
        """Canonical coordinates of an element given in generator coordinates."""
        v = as_vector(v)
        for j in v:
            if not 0 <= j < self.n_generators:
                raise IndexError(f"generator {j} out of range")
        for c, expr in self._elim:
            a = v.pop(c, 0)
            if a:
                vadd(v, expr, a)
        x = [v.get(g, 0) for g in self._survivors]
        if self._V is not None:
            m = len(x)
            y = [0] * m
            for i, xi in enumerate(x):
                if xi:
                    row = self._V[i]
                    for j in range(m):
                        if row[j]:
                            y[j] += xi * row[j]
        else:
            y = x
        full = [y[i] for i in self._torsion_pos] + [y[i] for i in self._free_pos]
        return self._reduce(full)

    def from_canonical(self, c: Sequence[int]) -> dict:
        """An element (in generator coordinates) with the given canonical coordinates."""
        if len(c) != len(self._moduli):
            raise ValueError("wrong number of canonical coordinates")
        positions = self._torsion_pos + self._free_pos
        m = len(self._survivors)
        x = [0] * m
        for ci, p in zip(c, positions):
            if not ci:
                continue
            if self._Vinv is None:
                x[p] += ci
            else:
                row = self._Vinv[p]
                for j in range(m):
                    if row[j]:
                        x[j] += ci * row[j]
        return {self._survivors[j]: xj for j, xj in enumerate(x) if xj}

    def canonical_generators(self) -> list:
        k = len(self._moduli)
        return [self.from_canonical([int(i == j) for j in range(k)]) for i in range(k)]

    def reduce_canonical(self, c: Sequence[int]) -> tuple:
        return self._reduce(c)

    def is_zero(self, v: VectorLike) -> bool:
        return not any(self.canonical(v))

    def equal(self, v: VectorLike, w: VectorLike) -> bool:
        return self.canonical(v) == self.canonical(w)

    def element_order(self, v: VectorLike):
        return element_order(self, v)

    def generator(self, i: int) -> dict:
        return {i: 1}


def fp_group(n_gens: int, relations=None) -> FpAbGroup:
    """Group on ``n_gens`` generators; ``relations`` is ``n_gens x k`` (one column per relation)."""
    if relations is None:
        return FpAbGroup(n_gens, [])
    if isinstance(relations, IntMatrix):
        if relations.rows != n_gens:
            raise ValueError("relation matrix must have one row per generator")
        return FpAbGroup(n_gens, relations.transpose().row_dicts())
    a = _as_dense(relations)
    if len(a) != n_gens:
        raise ValueError("relation matrix must have one row per generator")
    k = len(a[0]) if a else 0
    return FpAbGroup(n_gens, [{i: a[i][j] for i in range(n_gens) if a[i][j]} for j in range(k)])


def free_group(n: int) -> FpAbGroup:
    return FpAbGroup(n, [])


def element_order(g: FpAbGroup, v: VectorLike):
    """Least ``n >= 1`` with ``n v = 0``; ``None`` when ``v`` has infinite order."""
    c = g.canonical(v)
    out = 1
    for x, d in zip(c, g.moduli):
        if not x:
            continue
        if d == 0:
            return INFINITE
        k = d // gcd(d, x)
        out = out * k // gcd(out, k)
    return out


class FpMap:
    """Homomorphism of finitely presented abelian groups.

    Stored as the images of the source's canonical generators in the
    target's canonical coordinates.
    """

    def __init__(self, source: FpAbGroup, target: FpAbGroup, canonical_images: Sequence[Sequence[int]]):
        if len(canonical_images) != source.ngens_canonical:
            raise ValueError("need one image per canonical generator")
        imgs = [target.reduce_canonical(list(c)) for c in canonical_images]
        for d, img in zip(source.moduli, imgs):
            if d and any(target.reduce_canonical([d * x for x in img])):
                raise IllDefined("torsion generator maps to an element of larger order")
        self.source = source
        self.target = target
        self.matrix = imgs

    def apply_canonical(self, c: Sequence[int]) -> tuple:
        acc = [0] * self.target.ngens_canonical
        for ci, img in zip(c, self.matrix):
            if ci:
                for j, x in enumerate(img):
                    acc[j] += ci * x
        return self.target.reduce_canonical(acc)

    def apply(self, v: VectorLike) -> dict:
        """Image of ``v`` (source generator coordinates) in target generator coordinates."""
        return self.target.from_canonical(self.apply_canonical(self.source.canonical(v)))

    def __call__(self, v: VectorLike) -> dict:
        return self.apply(v)

    def compose(self, after: "FpMap") -> "FpMap":
        """``after o self``."""
        if after.source is not self.target:
            raise ValueError("maps are not composable")
        imgs = [after.apply_canonical(c) for c in self.matrix]
        return FpMap(self.source, after.target, imgs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMap):
            return NotImplemented
        return (self.source is other.source and self.target is other.target
                and self.matrix == other.matrix)

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.matrix)

    def is_injective(self) -> bool:
        return fp_kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return fp_cokernel(self)[0].is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self) -> str:
        return f"FpMap({self.source.describe()} -> {self.target.describe()})"


def fp_map(source: FpAbGroup, target: FpAbGroup, images: Sequence[VectorLike]) -> FpMap:
    """Map sending source generator ``j`` to ``images[j]`` (target generator coordinates).

    Raises ``IllDefined`` if some relation of the source is not sent to zero.
    """
    if len(images) != source.n_generators:
        raise ValueError("need one image per source generator")
    canon = [target.canonical(v) for v in images]
    k = target.ngens_canonical
    for rel in source.relations:
        acc = [0] * k
        for j, x in rel.items():
            for t, y in enumerate(canon[j]):
                acc[t] += x * y
        if any(target.reduce_canonical(acc)):
            raise IllDefined(f"relation {rel} has nonzero image")
    cimgs = []
    for gvec in source.canonical_generators():
        acc = [0] * k
        for j, x in gvec.items():
            for t, y in enumerate(canon[j]):
                acc[t] += x * y
        cimgs.append(acc)
    return FpMap(source, target, cimgs)


def identity_map(g: FpAbGroup) -> FpMap:
    k = g.ngens_canonical
    return FpMap(g, g, [[int(i == j) for j in range(k)] for i in range(k)])


def zero_map(source: FpAbGroup, target: FpAbGroup) -> FpMap:
    return FpMap(source, target, [[0] * target.ngens_canonical for _ in range(source.ngens_canonical)])


def _lattice_from_canonical(g: FpAbGroup, elems: Sequence[Sequence[int]]) -> tuple:
    """Solve ``x . elems = 0`` in ``g``: returns the lattice of such integer ``x``."""
    m = len(elems)
    k = g.ngens_canonical
    tors = [j for j, d in enumerate(g.moduli) if d]
    # columns: x_1..x_m, z_t for each torsion coordinate; equations: one per canonical coordinate
    ncols = m + len(tors)
    eqs = []
    for j in range(k):
        row = {i: elems[i][j] for i in range(m) if elems[i][j]}
        eqs.append(row)
    for t, j in enumerate(tors):
        eqs[j][m + t] = g.moduli[j]
    big = kernel_lattice(IntMatrix(k, ncols, eqs))
    proj = [{i: x for i, x in b.items() if i < m} for b in big.basis]
    return IntLattice(m, proj)


def fp_kernel(f: FpMap) -> tuple[FpAbGroup, FpMap]:
    """Kernel of ``f`` with its inclusion into ``f.source``."""
    src = f.source
    lat = _lattice_from_canonical(f.target, f.matrix)
    rels = []
    for i, d in enumerate(src.moduli):
        if d:
            rels.append(as_vector(lat.coordinates({i: d})))
    ker = FpAbGroup(lat.rank, rels)
    inc_imgs = [src.reduce_canonical(dense(b, src.ngens_canonical)) for b in lat.basis]
    # images of kernel generators given in source canonical coordinates
    inc = fp_map(ker, src, [src.from_canonical(c) for c in inc_imgs])
    return ker, inc


def fp_quotient(g: FpAbGroup, sub_generators: Sequence[VectorLike]) -> tuple[FpAbGroup, FpMap]:
    """Quotient of ``g`` by the subgroup generated by ``sub_generators``."""
    k = g.ngens_canonical
    rels = [{i: d} for i, d in enumerate(g.moduli) if d]
    rels += [as_vector(g.canonical(v)) for v in sub_generators]
    q = FpAbGroup(k, rels)
    proj = FpMap(g, q, [q.canonical({i: 1}) for i in range(k)])
    return q, proj


def fp_cokernel(f: FpMap) -> tuple[FpAbGroup, FpMap]:
    return fp_quotient(f.target, [f.target.from_canonical(c) for c in f.matrix])


def fp_subgroup(g: FpAbGroup, elements: Sequence[VectorLike]) -> tuple[FpAbGroup, FpMap]:
    """Subgroup generated by ``elements``; its generator ``i`` is ``elements[i]``."""
    elems = [as_vector(e) for e in elements]
    canon = [g.canonical(e) for e in elems]
    lat = _lattice_from_canonical(g, canon)
    h = FpAbGroup(len(elems), lat.basis)
    inc = fp_map(h, g, elems)
    return h, inc


def fp_image(f: FpMap) -> tuple[FpAbGroup, FpMap]:
    return fp_subgroup(f.target, [f.target.from_canonical(c) for c in f.matrix])


def in_subgroup(g: FpAbGroup, elements: Sequence[VectorLike], v: VectorLike) -> bool:
    q, proj = fp_quotient(g, elements)
    return not any(proj.apply_canonical(g.canonical(v)))


def same_subgroup(g: FpAbGroup, a: Sequence[VectorLike], b: Sequence[VectorLike]) -> bool:
    qa, pa = fp_quotient(g, a)
    qb, pb = fp_quotient(g, b)
    return (all(not any(pa.apply_canonical(g.canonical(v))) for v in b)
            and all(not any(pb.apply_canonical(g.canonical(v))) for v in a))


def torsion_subgroup_generators(g: FpAbGroup) -> list:
    """Generator-coordinate vectors of the canonical torsion generators."""
    gens = g.canonical_generators()
    return [v for v, d in zip(gens, g.moduli) if d]


def fp_lift(f: FpMap, c: Sequence[int]):
    """Source canonical coordinates ``x`` with ``f(x) = c``, or ``None`` if ``c`` is not in the image."""
    src, tgt = f.source, f.target
    m = src.ngens_canonical
    tors = [j for j, d in enumerate(tgt.moduli) if d]
    k = tgt.ngens_canonical
    c = tgt.reduce_canonical(list(c))
    # unknowns: x_1..x_m, z per torsion coordinate, and t multiplying -c
    ncols = m + len(tors) + 1
    eqs = []
    for j in range(k):
        row = {i: f.matrix[i][j] for i in range(m) if f.matrix[i][j]}
        if c[j]:
            row[ncols - 1] = -c[j]
        eqs.append(row)
    for t, j in enumerate(tors):
        eqs[j][m + t] = tgt.moduli[j]
    lat = kernel_lattice(IntMatrix(k, ncols, eqs))
    # combine basis vectors by extended gcd on the t coordinate
    best = None
    for b in lat.basis:
        tb = b.get(ncols - 1, 0)
        if not tb:
            continue
        if best is None:
            best = dict(b)
            continue
        ta = best.get(ncols - 1, 0)
        g, s, r = _xgcd(ta, tb)
        best = vcombine([(s, best), (r, b)])
    if best is None:
        return None
    t = best.get(ncols - 1, 0)
    if abs(t) != 1:
        return None
    return src.reduce_canonical([t * best.get(i, 0) for i in range(m)])


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0
