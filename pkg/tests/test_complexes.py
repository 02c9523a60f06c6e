import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from blochlab.complexes import (acyclicity_report, augmented_homology, boundary_matrix,
                                boundary_matrix_for, chain, ltau3_lattice)
from blochlab.bloch import special_chain
from blochlab.exactlin import IntMatrix
from blochlab.geometry import projective_line

from conftest import ring


def sym(m: IntMatrix) -> Matrix:
    return Matrix(m.rows, m.cols, lambda i, j: m[i, j]) if m.rows and m.cols else Matrix.zeros(m.rows, m.cols)


def oracle_homology(R, r):
    """(free rank, torsion list) of H_r from sympy ranks and Smith form."""
    line = projective_line(R)
    dr, up = sym(boundary_matrix_for(line, r)), sym(boundary_matrix_for(line, r + 1))
    kernel_rank = dr.cols - (dr.rank() if dr.rows and dr.cols else 0)
    image_rank = up.rank() if up.rows and up.cols else 0
    torsion = []
    if up.rows and up.cols:
        snf = smith_normal_form(up, domain=ZZ)
        torsion = [abs(snf[i, i]) for i in range(min(snf.shape)) if abs(snf[i, i]) > 1]
    return kernel_rank - image_rank, torsion


@pytest.mark.parametrize("spec", ["GF(2)", "GF(3)", "GF(4)", "Z/4", "GF(5)"])
def test_d_squared_is_zero(spec):
    R = ring(spec)
    for n in range(1, 4):
        assert (boundary_matrix(R, n) @ boundary_matrix(R, n + 1)).is_zero()


def test_shapes_gf2():
    R = ring("GF(2)")
    assert (boundary_matrix(R, 0).rows, boundary_matrix(R, 0).cols) == (1, 3)
    assert (boundary_matrix(R, 2).rows, boundary_matrix(R, 2).cols) == (6, 6)
    assert (boundary_matrix(R, 3).rows, boundary_matrix(R, 3).cols) == (6, 0)
    with pytest.raises(ValueError):
        boundary_matrix(R, 5)


def test_boundary_of_an_edge():
    line = projective_line(ring("GF(3)"))
    e = (line.zero, line.infinity)
    col = boundary_matrix_for(line, 1).transpose().row(line.clique_index(2)[e])
    assert col == chain(line, [(1, (line.infinity,)), (-1, (line.zero,))])


@pytest.mark.parametrize("spec", ["GF(2)", "GF(3)", "GF(4)", "Z/4", "GF(5)"])
def test_ltau3_rank_and_membership(spec):
    R = ring(spec)
    lat = ltau3_lattice(R)
    d2 = sym(boundary_matrix(R, 2))
    assert lat.rank == d2.cols - d2.rank()
    for v in lat.basis:
        assert not boundary_matrix(R, 2).apply(v)
    w = special_chain(R, "C", ()).chain
    assert w in lat


@pytest.mark.parametrize("spec,r", [("GF(2)", 0), ("GF(2)", 1), ("GF(2)", 2), ("GF(3)", 1),
                                    ("GF(3)", 2), ("Z/4", 1), ("Z/4", 2), ("GF(4)", 2)])
def test_homology_matches_sympy(spec, r):
    R = ring(spec)
    h = augmented_homology(R, r)
    free, torsion = oracle_homology(R, r)
    assert h.abstract() == (tuple(sorted(torsion)), free)


def test_known_homology():
    assert augmented_homology(ring("GF(2)"), 2).describe() == "Z^2"
    assert augmented_homology(ring("Z/4"), 2).describe() == "Z^29"
    assert acyclicity_report(ring("GF(3)"), 2) == [(0, True), (1, True), (2, True)]
    assert acyclicity_report(ring("GF(2)"), 2) == [(0, True), (1, True), (2, False)]


def test_cycles_are_kernel():
    h = augmented_homology(ring("GF(3)"), 2)
    assert h.cycles == ltau3_lattice(ring("GF(3)"))
