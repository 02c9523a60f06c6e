"""The clique complex L_*(A), its truncation and augmented homology.

``L_n = Z[X_{n+1}]`` with basis the cliques in lexicographic order; a
chain is a sparse ``{clique_index: coefficient}`` dict.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .exactlin import FpAbGroup, IntLattice, IntMatrix, kernel_lattice
from .geometry import ProjectiveLine, projective_line
from .rings import FiniteRing


def chain(line: ProjectiveLine, terms: Iterable[tuple[int, Sequence[int]]]) -> dict:
    """Chain ``sum c * t`` from ``(coefficient, clique)`` pairs (all cliques the same length)."""
    out: dict = {}
    index = None
    for c, t in terms:
        t = tuple(t)
        if index is None:
            index = line.clique_index(len(t))
        i = index[t]
        y = out.get(i, 0) + c
        if y:
            out[i] = y
        else:
            out.pop(i, None)
    return out


def chain_terms(line: ProjectiveLine, n_points: int, v: dict) -> list:
    xs = line.cliques(n_points)
    return [(c, xs[i]) for i, c in sorted(v.items())]


def boundary(line: ProjectiveLine, t: Sequence[int]) -> list:
    """``d(x_0..x_n) = sum (-1)^i (x_0..^x_i..x_n)`` as ``(sign, face)`` pairs."""
    return [((-1) ** i, tuple(t[:i]) + tuple(t[i + 1:])) for i in range(len(t))]


def boundary_matrix_for(line: ProjectiveLine, n: int) -> IntMatrix:
    """Matrix of d_n : L_n -> L_{n-1}; for n = 0 this is the augmentation to Z."""
    cols = line.cliques(n + 1)
    if n == 0:
        return IntMatrix(1, len(cols), [{j: 1 for j in range(len(cols))}])
    rows_index = line.clique_index(n)
    data = [dict() for _ in range(len(rows_index))]
    for j, t in enumerate(cols):
        for s, face in boundary(line, t):
            r = data[rows_index[face]]
            y = r.get(j, 0) + s
            if y:
                r[j] = y
            else:
                del r[j]
    return IntMatrix(len(rows_index), len(cols), data)


def boundary_matrix(ring: FiniteRing, n: int) -> IntMatrix:
    if not 0 <= n <= 4:
        raise ValueError("boundary maps are available for n = 0..4")
    return boundary_matrix_for(projective_line(ring), n)


def ltau3_lattice(ring: FiniteRing) -> IntLattice:
    """L^tau_3(A) = ker(d_2) inside Z[X_3], saturated, Hermite basis."""
    return kernel_lattice(boundary_matrix(ring, 2))


def augmented_homology(ring: FiniteRing, r: int) -> FpAbGroup:
    """Homology at ``L_r`` of ``... -> L_{r+1} -> L_r -> ... -> L_0 -> Z -> 0``.

    Generators of the result are the Hermite basis of ``ker d_r``;
    relations are the boundaries of ``L_{r+1}`` written in that basis.
    """
    if not 0 <= r <= 3:
        raise ValueError("homology is available for r = 0..3")
    line = projective_line(ring)
    ker = kernel_lattice(boundary_matrix_for(line, r))
    image = boundary_matrix_for(line, r + 1)
    rels = [ker.coordinates(col) for col in image.transpose().row_dicts()]
    group = FpAbGroup(ker.rank, rels)
    group.cycles = ker
    return group


def acyclicity_report(ring: FiniteRing, max_r: int) -> list:
    """``[(r, acyclic_at_r)]`` for ``r = 0..max_r``."""
    if not 0 <= max_r <= 3:
        raise ValueError("max_r must be between 0 and 3")
    return [(r, augmented_homology(ring, r).is_trivial()) for r in range(max_r + 1)]
