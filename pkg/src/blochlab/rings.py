"""Finite commutative rings, their units and square classes.

Rings are built from a small grammar::

    atom := "Z/" n | "GF(" q ")" | atom "[t]/(t^" k ")"
    ring := atom ("x" atom)*

Elements are integers ``0..n-1`` indexing a fixed enumeration; the
enumeration order is the total order every canonical choice downstream
is derived from.  ``GF(p^k)`` uses the lexicographically least monic
irreducible of degree ``k`` over ``F_p`` (coefficients compared from the
``x^(k-1)`` term down).
"""

from __future__ import annotations

import itertools
import random
import re
from functools import cached_property
from typing import Callable, Mapping, Sequence

from .config import Caps, default_caps
from .errors import NotAHom, NotPrimePower, ParseError
from .exactlin import FpAbGroup


class FiniteRing:
    """A finite commutative ring given by full addition and multiplication tables."""

    def __init__(self, labels: Sequence[str], add: Sequence[Sequence[int]],
                 mul: Sequence[Sequence[int]], spec_string: str,
                 generators: Sequence[int] = (), check_axioms: int = 64):
        self.labels = list(labels)
        self.size = len(self.labels)
        self.add_table = [list(r) for r in add]
        self.mul_table = [list(r) for r in mul]
        self.spec_string = spec_string
        self.zero = self._find_identity(self.add_table)
        self.one = self._find_identity(self.mul_table)
        self.neg_table = [self.add_table[a].index(self.zero) for a in range(self.size)]
        self.ring_generators = list(generators)
        self._label_index = {s: i for i, s in enumerate(self.labels)}
        self._check_axioms(exhaustive=self.size <= check_axioms)

    def _find_identity(self, table) -> int:
        n = self.size
        for e in range(n):
            if all(table[e][a] == a for a in range(n)):
                return e
        raise ValueError("table has no identity element")

    def _check_axioms(self, exhaustive: bool) -> None:
        n = self.size
        add, mul = self.add_table, self.mul_table
        for a in range(n):
            for b in range(n):
                if add[a][b] != add[b][a] or mul[a][b] != mul[b][a]:
                    raise ValueError("ring is not commutative")
        if exhaustive:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(20000))
        for a, b, c in triples:
            if add[add[a][b]][c] != add[a][add[b][c]]:
                raise ValueError("addition is not associative")
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise ValueError("multiplication is not associative")
            if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                raise ValueError("multiplication does not distribute")

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def from_int(self, k: int) -> int:
        out = self.zero
        step = self.one if k >= 0 else self.neg(self.one)
        for _ in range(abs(k)):
            out = self.add(out, step)
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    @cached_property
    def _inverses(self) -> dict:
        inv = {}
        for a in range(self.size):
            for b in range(self.size):
                if self.mul_table[a][b] == self.one:
                    inv[a] = b
                    break
        return inv

    def is_unit(self, a: int) -> bool:
        return a in self._inverses

    def inverse(self, a: int) -> int:
        try:
            return self._inverses[a]
        except KeyError:
            raise ZeroDivisionError(f"{self.labels[a]} is not a unit in {self.spec_string}") from None

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inverse(b))

    @cached_property
    def units(self) -> list:
        return sorted(self._inverses)

    @property
    def minus_one(self) -> int:
        return self.neg(self.one)

    def element(self, label) -> int:
        """Element index from a label string or an integer (read through ``from_int``)."""
        if isinstance(label, int):
            return self.from_int(label)
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise KeyError(f"no element labelled {label!r} in {self.spec_string}") from None

    def label(self, a: int) -> str:
        return self.labels[a]

    def elements(self) -> range:
        return range(self.size)

    @cached_property
    def additive_generators(self) -> list:
        return _greedy_generators(range(self.size), self.zero, self.add)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"FiniteRing({self.spec_string!r}, size={self.size})"


def _greedy_generators(candidates, identity: int, op: Callable[[int, int], int]) -> list:
    """Generators picked in candidate order, each outside the span of the previous ones."""
    span = {identity}
    gens = []
    for e in candidates:
        if e in span:
            continue
        gens.append(e)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = op(x, g)
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
    return gens


# ---------------------------------------------------------------------------
# constructors


def _table(n: int, f: Callable[[int, int], int]) -> list:
    return [[f(a, b) for b in range(n)] for a in range(n)]


def integers_mod(n: int, check_axioms: int = 64) -> FiniteRing:
    if n < 2:
        raise ParseError("Z/n needs n >= 2")
    return FiniteRing([str(i) for i in range(n)], _table(n, lambda a, b: (a + b) % n),
                      _table(n, lambda a, b: (a * b) % n), f"Z/{n}", (), check_axioms)


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


def _polymulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list:
    """Product of coefficient lists (low degree first) modulo a monic polynomial."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
    return (prod + [0] * k)[:k]


def least_irreducible(p: int, k: int) -> list:
    """Lexicographically least monic irreducible of degree ``k`` over ``F_p``.

    Coefficients are returned low degree first (``[c0, ..., c_{k-1}, 1]``);
    the comparison order reads them from ``c_{k-1}`` down to ``c0``.
    """
    for tail in itertools.product(range(p), repeat=k):
        coeffs = list(reversed(tail)) + [1]
        if _is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("unreachable: irreducibles exist in every degree")


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    k = len(f) - 1
    if k == 1:
        return True
    if f[0] == 0:
        return False
    # no monic factor of degree 1..k//2
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(reversed(tail)) + [1]
            if _poly_rem(f, g, p) == [0] * d:
                return False
    return True


def _poly_rem(f: Sequence[int], g: Sequence[int], p: int) -> list:
    r = list(f)
    d = len(g) - 1
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i]
        if c:
            for j in range(d + 1):
                r[i - d + j] = (r[i - d + j] - c * g[j]) % p
    return r[:d]


def _poly_label(coeffs: Sequence[str], var: str, zero: str) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == zero:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(c)
        elif c == "1":
            terms.append(mono)
        else:
            cc = c if re.fullmatch(r"[\w^]+", c) else f"({c})"
            terms.append(f"{cc}*{mono}")
    return "+".join(terms) if terms else zero


def galois_field(q: int, check_axioms: int = 64) -> FiniteRing:
    pk = _prime_power(q)
    if pk is None:
        raise NotPrimePower(f"GF({q}): {q} is not a prime power")
    p, k = pk
    if k == 1:
        ring = integers_mod(p, check_axioms)
        ring.spec_string = f"GF({p})"
        return ring
    modulus = least_irreducible(p, k)
    elems = [list(reversed(t)) for t in itertools.product(range(p), repeat=k)]
    # enumeration order: integer encoding sum c_i p^i
    elems.sort(key=lambda c: sum(x * p ** i for i, x in enumerate(c)))
    index = {tuple(c): i for i, c in enumerate(elems)}
    n = len(elems)
    add = _table(n, lambda a, b: index[tuple((x + y) % p for x, y in zip(elems[a], elems[b]))])
    mul = _table(n, lambda a, b: index[tuple(_polymulmod(elems[a], elems[b], modulus, p))])
    labels = [_poly_label([str(x) for x in c], "a", "0") for c in elems]
    gen = index[tuple([0, 1] + [0] * (k - 2))]
    ring = FiniteRing(labels, add, mul, f"GF({q})", [gen], check_axioms)
    ring.modulus = modulus
    return ring


def truncated_polynomials(base: FiniteRing, k: int, check_axioms: int = 64) -> FiniteRing:
    """``base[t]/(t^k)``."""
    if k < 1:
        raise ParseError("t^k needs k >= 1")
    elems = [tuple(reversed(c)) for c in itertools.product(range(base.size), repeat=k)]
    elems.sort(key=lambda c: tuple(reversed(c)))
    index = {c: i for i, c in enumerate(elems)}
    n = len(elems)

    def add(a, b):
        return index[tuple(base.add(x, y) for x, y in zip(elems[a], elems[b]))]

    def mul(a, b):
        x, y = elems[a], elems[b]
        out = [base.zero] * k
        for i in range(k):
            if x[i] == base.zero:
                continue
            for j in range(k - i):
                out[i + j] = base.add(out[i + j], base.mul(x[i], y[j]))
        return index[tuple(out)]

    labels = [_poly_label([base.label(x) for x in c], "t", base.label(base.zero)) for c in elems]
    lift = lambda g: index[(g,) + (base.zero,) * (k - 1)]
    gens = [lift(g) for g in base.ring_generators]
    if k > 1:
        gens.append(index[(base.zero, base.one) + (base.zero,) * (k - 2)])
    return FiniteRing(labels, _table(n, add), _table(n, mul),
                      f"{base.spec_string}[t]/(t^{k})", gens, check_axioms)


def product_ring(factors: Sequence[FiniteRing], check_axioms: int = 64) -> FiniteRing:
    if len(factors) == 1:
        return factors[0]
    elems = list(itertools.product(*(range(f.size) for f in factors)))
    index = {c: i for i, c in enumerate(elems)}
    n = len(elems)
    add = _table(n, lambda a, b: index[tuple(f.add(x, y) for f, x, y in zip(factors, elems[a], elems[b]))])
    mul = _table(n, lambda a, b: index[tuple(f.mul(x, y) for f, x, y in zip(factors, elems[a], elems[b]))])
    labels = ["(" + ",".join(f.label(x) for f, x in zip(factors, c)) + ")" for c in elems]
    gens = []
    for i, f in enumerate(factors):
        idem = tuple(f.one if j == i else g.zero for j, g in enumerate(factors))
        gens.append(index[idem])
        for g in f.ring_generators:
            gens.append(index[tuple(g if j == i else h.zero for j, h in enumerate(factors))])
    spec = " x ".join(f.spec_string for f in factors)
    ring = FiniteRing(labels, add, mul, spec, gens, check_axioms)
    ring.factors = list(factors)
    return ring


_ATOM = re.compile(r"(Z/(\d+)|GF\((\d+)\))((?:\[t\]/\(t\^\d+\))*)")
_SUFFIX = re.compile(r"\[t\]/\(t\^(\d+)\)")


def parse_ring(spec: str, caps: Caps | None = None) -> FiniteRing:
    """Build a ring from the DSL.

    Raises ``ParseError``, ``NotPrimePower`` or ``TooLarge``.
    """
    caps = caps or default_caps()
    text = re.sub(r"\s+", "", spec)
    if not text:
        raise ParseError("empty ring description")
    parts = text.split("x")
    plans = []
    for part in parts:
        m = _ATOM.fullmatch(part)
        if not m:
            raise ParseError(f"cannot parse ring atom {part!r}")
        if m.group(2) is not None:
            base = ("Z", int(m.group(2)))
            size = int(m.group(2))
            if size < 2:
                raise ParseError("Z/n needs n >= 2")
        else:
            q = int(m.group(3))
            if _prime_power(q) is None:
                raise NotPrimePower(f"GF({q}): {q} is not a prime power")
            base = ("GF", q)
            size = q
        exps = [int(k) for k in _SUFFIX.findall(m.group(4))]
        for k in exps:
            if k < 1:
                raise ParseError("t^k needs k >= 1")
            size = size ** k
        plans.append((base, exps, size))
    total = 1
    for _, _, s in plans:
        total *= s
    caps.check(f"ring {spec!r}", total, "parse")
    ca = caps.axiom_check
    factors = []
    for (kind, n), exps, _ in plans:
        ring = integers_mod(n, ca) if kind == "Z" else galois_field(n, ca)
        for k in exps:
            ring = truncated_polynomials(ring, k, ca)
        factors.append(ring)
    ring = product_ring(factors, ca)
    ring.spec_string = spec.strip()
    return ring


# ---------------------------------------------------------------------------
# units and square classes


class SquareClassData:
    """Unit group of a ring, its abstract structure and its square classes."""

    def __init__(self, ring: FiniteRing):
        self.ring = ring
        units = ring.units
        self.units = units
        pos = {u: i for i, u in enumerate(units)}
        self.unit_generators = _greedy_generators(units, ring.one, ring.mul)
        rels = [{pos[ring.one]: 1}]
        for u in units:
            for g in self.unit_generators:
                r = {}
                for k, c in ((pos[ring.mul(u, g)], 1), (pos[u], -1), (pos[g], -1)):
                    r[k] = r.get(k, 0) + c
                rels.append(r)
        self.unit_group: FpAbGroup = FpAbGroup(len(units), rels,
                                               labels=[ring.label(u) for u in units])
        self._pos = pos
        self._log = {u: self.unit_group.canonical({pos[u]: 1}) for u in units}
        even = [i for i, d in enumerate(self.unit_group.moduli) if d % 2 == 0]
        reps: list = []
        key_to_class: dict = {}
        self.class_of: dict = {}
        for u in units:
            key = tuple(self._log[u][i] % 2 for i in even)
            if key not in key_to_class:
                key_to_class[key] = len(reps)
                reps.append(u)
            self.class_of[u] = key_to_class[key]
        self.class_list = reps
        s = len(reps)
        self.n_classes = s
        self.class_mul = [[self.class_of[ring.mul(reps[a], reps[b])] for b in range(s)] for a in range(s)]
        self.identity_class = self.class_of[ring.one]

    def log(self, u: int) -> tuple:
        """Canonical coordinates of ``u`` in the abstract unit group."""
        return self._log[u]

    def exp(self, coords) -> int:
        for u, c in self._log.items():
            if c == self.unit_group.reduce_canonical(coords):
                return u
        raise ValueError("no unit with these coordinates")

    def class_label(self, c: int) -> str:
        return f"<{self.ring.label(self.class_list[c])}>"


class SqRingElement:
    """Element of the group ring ``Z[A^x/(A^x)^2]`` (coefficients per square class)."""

    __slots__ = ("sq", "coeffs")

    def __init__(self, sq: SquareClassData, coeffs: Sequence[int] | Mapping[int, int]):
        self.sq = sq
        if isinstance(coeffs, Mapping):
            c = [0] * sq.n_classes
            for k, x in coeffs.items():
                c[k] += x
            coeffs = c
        self.coeffs = tuple(int(x) for x in coeffs)

    @classmethod
    def zero(cls, sq) -> "SqRingElement":
        return cls(sq, [0] * sq.n_classes)

    @classmethod
    def one(cls, sq) -> "SqRingElement":
        return cls(sq, {sq.identity_class: 1})

    @classmethod
    def an(cls, sq, u: int) -> "SqRingElement":
        """The square class of the unit ``u``."""
        return cls(sq, {sq.class_of[u]: 1})

    @classmethod
    def pf(cls, sq, u: int) -> "SqRingElement":
        """``<u> - 1``."""
        return cls.an(sq, u) - cls.one(sq)

    def augmentation(self) -> int:
        return sum(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            other = SqRingElement.one(self.sq) * other
        return SqRingElement(self.sq, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return SqRingElement(self.sq, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return SqRingElement(self.sq, [other * a for a in self.coeffs])
        out = [0] * self.sq.n_classes
        tab = self.sq.class_mul
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[tab[i][j]] += a * b
        return SqRingElement(self.sq, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = SqRingElement.one(self.sq) * other
        if not isinstance(other, SqRingElement):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{a}{self.sq.class_label(i)}" for i, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) if terms else "0"


def units_and_square_classes(ring: FiniteRing) -> SquareClassData:
    return _square_data(ring)


_SQ_CACHE: dict = {}


def _square_data(ring: FiniteRing) -> SquareClassData:
    key = id(ring)
    hit = _SQ_CACHE.get(key)
    if hit is None or hit[0] is not ring:
        hit = (ring, SquareClassData(ring))
        _SQ_CACHE[key] = hit
    return hit[1]


def wn_set(ring: FiniteRing) -> list:
    """Elements ``x`` with ``x(1-x)`` a unit, in element order."""
    out = []
    for x in ring.elements():
        if ring.is_unit(ring.mul(x, ring.sub(ring.one, x))):
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# homomorphisms


class RingHom:
    """A ring homomorphism given by its full element map."""

    def __init__(self, source: FiniteRing, target: FiniteRing, element_map: Sequence[int]):
        self.source = source
        self.target = target
        self.element_map = list(element_map)
        s, t, f = source, target, self.element_map
        if f[s.zero] != t.zero or f[s.one] != t.one:
            raise NotAHom("does not preserve 0 and 1")
        for a in s.elements():
            for b in s.elements():
                if f[s.add(a, b)] != t.add(f[a], f[b]) or f[s.mul(a, b)] != t.mul(f[a], f[b]):
                    raise NotAHom(f"axiom fails on ({s.label(a)}, {s.label(b)})")
        for u in s.units:
            assert t.is_unit(f[u])

    def __call__(self, a: int) -> int:
        return self.element_map[a]

    def __repr__(self):
        return f"RingHom({self.source.spec_string} -> {self.target.spec_string})"


def build_hom(source: FiniteRing, target: FiniteRing,
              images_of_generators: Mapping[int, int] | None = None) -> RingHom:
    """Extend prescribed images of ring generators to a homomorphism.

    Missing generators are an error unless the source is generated by 1.
    Raises ``NotAHom`` when no homomorphism has these values.
    """
    images = dict(images_of_generators or {})
    missing = [g for g in source.ring_generators if g not in images]
    if missing:
        raise NotAHom(f"no image given for generators {[source.label(g) for g in missing]}")
    known = {source.zero: target.zero, source.one: target.one}
    for g, h in images.items():
        if known.get(g, h) != h:
            raise NotAHom("inconsistent images")
        known[g] = h
    frontier = list(known)
    while frontier:
        nxt = []
        current = list(known.items())
        for a in frontier:
            fa = known[a]
            for b, fb in current:
                for c, fc in ((source.add(a, b), target.add(fa, fb)),
                              (source.mul(a, b), target.mul(fa, fb))):
                    if c in known:
                        if known[c] != fc:
                            raise NotAHom(f"{source.label(c)} would map to two different elements")
                    else:
                        known[c] = fc
                        nxt.append(c)
        frontier = nxt
    if len(known) != source.size:
        raise NotAHom("generators do not generate the source ring")
    return RingHom(source, target, [known[a] for a in source.elements()])


def crt_factors(n: int) -> list:
    """Prime-power factors of ``n``."""
    out, m, p = [], n, 2
    while m > 1:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out.append(q)
        p += 1
    return out
