import random
from fractions import Fraction

import pytest

from rahman.bispectral import (DEFAULT_ANCHORS, conjugate_operator, discover_commutant,
                               five_point_operator, locality_check, multiplication_diagonal,
                               normalize_gauge, paper_B_named, paper_commutant_named,
                               reproduce_paper_B, reproduce_paper_commutant, seven_point_operators)
from rahman.errors import DegenerateParams, GaugeUnsolvable
from rahman.exact import ExactMatrix, rref
from rahman.kernel import build_kernel
from rahman.params import ChainParams, ParamSet, random_compatible_point, random_generic_params
from rahman.polyeval import build_poly_matrix
from rahman.statespace import adjacency, diagonal_pattern, enumerate_simplex, full_pattern

Q = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7))


def test_multiplication_diagonal(p1234):
    sp = enumerate_simplex(5)
    assert multiplication_diagonal(sp, 0, 0).is_zero()
    D = multiplication_diagonal(sp, p1234.p1 + p1234.p2, -(p1234.p3 + p1234.p4))
    assert D[sp.index((1, 0)), sp.index((1, 0))] == 3
    assert D[sp.index((0, 1)), sp.index((0, 1))] == -7
    assert D[0, 0] == 0


def test_conjugating_a_scalar(rng):
    pm = build_poly_matrix(3, random_generic_params(rng))
    c = Fraction(-5, 3)
    op = conjugate_operator(pm, ExactMatrix.identity(10).scale(c))
    assert op.B == ExactMatrix.identity(10).scale(c)


def test_residual_and_row_sums(rng):
    p = random_generic_params(rng)
    op = five_point_operator(2, p)
    assert op.residual_zero
    assert all(s == 0 for s in op.B.row_sums())


def test_paper_entry_values(p1234):
    named = paper_B_named(p1234)
    assert named["a1"] == Fraction(-225, 2)
    assert named["a21"] == Fraction(5, 3)
    sp = enumerate_simplex(5)
    B = five_point_operator(5, p1234).B
    assert B[sp.index((0, 0)), sp.index((1, 0))] == Fraction(-225, 2)
    assert B[sp.index((0, 5)), sp.index((0, 4))] == Fraction(5, 3)


def test_reproduce_b_at_1234(p1234):
    rep = reproduce_paper_B(p1234)
    assert rep.passed, rep.mismatches[:3]
    # every directed adjacency pair (60) is named, plus 21 diagonal entries
    assert rep.compared == 21 + 60


def test_reproduce_b_degenerate():
    with pytest.raises(DegenerateParams):
        reproduce_paper_B(ParamSet(1, 2, 2, 4))


def test_stencil_constrained_solution_agrees(rng):
    """Solve B P = P D for the entries allowed by the five-point stencil only."""
    for N in (2, 3):
        p = random_generic_params(rng)
        pm = build_poly_matrix(N, p)
        D = multiplication_diagonal(pm.space, p.p1 + p.p2, -(p.p3 + p.p4))
        PD = pm.M @ D
        n = len(pm.space)
        unknowns = adjacency(pm.space, True).sorted_positions()
        rows = []
        for r in range(n):
            for c in range(n):
                coeffs = [pm.M[b, c] if a == r else Fraction(0) for a, b in unknowns]
                rows.append(coeffs + [PD[r, c]])
        reduced, pivots = rref(ExactMatrix(rows))
        assert pivots == list(range(len(unknowns)))  # unique, consistent
        B = ExactMatrix.zeros(n)
        for row, (a, b) in zip(reduced, unknowns):
            B.rows[a][b] = row[-1]
        assert B == five_point_operator(N, p, pm).B


def test_locality_negative_control(rng):
    sp = enumerate_simplex(3)
    dense = ExactMatrix([[Fraction(rng.randint(1, 9)) for _ in range(10)] for _ in range(10)])
    rep = locality_check(dense, adjacency(sp, True))
    assert not rep.conforms
    assert len(rep.violations) == 100 - 34
    assert rep.max_nonzeros == 10


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_five_point_small_n(N, rng):
    op = five_point_operator(N, random_generic_params(rng))
    assert op.stencil.conforms
    assert op.stencil.max_nonzeros == (5 if N >= 3 else 4)  # N=2 has no interior point


def test_gauge_invariance_of_locality(rng):
    op = five_point_operator(3, random_generic_params(rng))
    pat = adjacency(enumerate_simplex(3), True)
    moved = op.B.scale(Fraction(-7, 2)) + ExactMatrix.identity(10).scale(3)
    assert locality_check(moved, pat).conforms == op.stencil.conforms


def test_seven_point(p1234, rng):
    for N, p in ((5, p1234), (3, random_generic_params(rng))):
        res = seven_point_operators(N, p)
        assert res.linear_consistent
        assert res.Bx.stencil.max_nonzeros <= 7
        assert res.By.stencil.max_nonzeros <= 7
        assert res.stencil_offsets("x") == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)}


def test_commutant_diagonal_pattern_is_identity():
    kern = build_kernel(3, ChainParams(*Q, 3))
    found = discover_commutant(kern, diagonal_pattern(kern.space))
    assert found.dimension == 1
    assert found.contains_identity()


def test_commutant_n3_dimension_two():
    kern = build_kernel(3, ChainParams(*Q, 3))
    found = discover_commutant(kern, adjacency(kern.space, True))
    assert found.dimension == 2
    assert found.contains_identity()
    for M in found.basis:
        assert (M @ kern.K - kern.K @ M).is_zero()


def test_full_commutant_matches_eigenbasis(rng):
    p, cp = random_compatible_point(rng, N=2)
    kern = build_kernel(2, cp)
    found = discover_commutant(kern, full_pattern(kern.space))
    assert found.dimension == 6  # simple spectrum: commutant = polynomials in K
    V = build_poly_matrix(2, p).M.transpose()  # columns are eigenvectors
    Vinv = V.inverse()
    for M in found.basis:
        conj = Vinv @ M @ V
        assert all(conj[i, j] == 0 for i in range(6) for j in range(6) if i != j)


def test_x2_value():
    assert paper_commutant_named(*Q)["x2"] == Fraction(14, 5)


def test_constant_entries():
    named = paper_commutant_named(*Q)
    assert (named["x3"], named["x17"], named["x29"], named["x34"]) == (3, 2, 1, 0)


def test_reproduce_commutant_q():
    rep = reproduce_paper_commutant(*Q)
    assert rep.extra["dimension"] == 2
    assert rep.passed, rep.mismatches[:3]
    assert rep.computed[9, 9] == 0 and rep.computed[0, 4] == 3


def test_reproduce_commutant_random():
    r = random.Random(77)
    for _ in range(3):
        b1 = Fraction(r.randint(1, 400), 1000)
        b2 = Fraction(r.randint(1, 400), 1000)
        a1 = Fraction(r.randint(1, 999), 1000)
        a2 = Fraction(r.randint(1, 999), 1000)
        assert reproduce_paper_commutant(a1, a2, b1, b2).passed


def test_gauge_normalization():
    M = ExactMatrix([[1, 2], [3, 4]])
    out = normalize_gauge(M, [((1, 1), 0), ((0, 1), 6)])
    # a = 3, b = -12
    assert out == ExactMatrix([[-9, 6], [9, 0]])
    assert normalize_gauge(out, [((1, 1), 0), ((0, 1), 6)]) == out
    with pytest.raises(GaugeUnsolvable):
        normalize_gauge(M, [((0, 1), 1), ((1, 0), 1)])  # both off-diagonal: shift undetermined
    with pytest.raises(GaugeUnsolvable):
        normalize_gauge(M, [((0, 0), 1)])


def test_default_anchors_on_commutant():
    kern = build_kernel(3, ChainParams(*Q, 3))
    M = discover_commutant(kern, adjacency(kern.space, True)).non_scalar_element()
    out = normalize_gauge(M, DEFAULT_ANCHORS)
    assert out[9, 9] == 0 and out[0, 4] == 3
