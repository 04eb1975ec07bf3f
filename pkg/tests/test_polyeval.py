from fractions import Fraction
from math import factorial

import pytest

from rahman.errors import OutOfSimplex, SingularPolyMatrix
from rahman.params import ParamSet, derive_mapped, random_generic_params
from rahman.polyeval import build_poly_matrix, pochhammer, poly_value_rows, rahman_poly
from rahman.statespace import enumerate_simplex


def oracle_poly(m, n, x, y, mp, N):
    """Quadruple sum in l, k, j, i order; ranges bounded only by m and n.

    Works for any integer (x, y), so it doubles as the polynomial extension.
    """
    total = Fraction(0)
    for l in range(n + 1):
        for k in range(n + 1 - l):
            for j in range(m + 1):
                for i in range(m + 1 - j):
                    num = 1
                    for a, r in ((-m, i + j), (-n, k + l), (-x, i + k), (-y, j + l)):
                        for s in range(r):
                            num *= a + s
                    if num == 0:
                        continue
                    den = factorial(i) * factorial(j) * factorial(k) * factorial(l)
                    for s in range(i + j + k + l):
                        den *= -N + s
                    total += Fraction(num, den) * mp.t ** i * mp.u ** j * mp.v ** k * mp.w ** l
    return total


def test_pochhammer():
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(-3, 2) == 6
    assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)
    for m in range(6):
        for n in range(m + 1, m + 4):
            assert pochhammer(-m, n) == 0


def test_trivial_rows_and_columns(rng):
    p = random_generic_params(rng)
    mp = derive_mapped(p)
    N = 4
    for x, y in enumerate_simplex(N):
        assert rahman_poly(0, 0, x, y, mp, N) == 1
        assert rahman_poly(x, y, 0, 0, mp, N) == 1


def test_double_implementation_n2(p1234):
    mp = derive_mapped(p1234)
    sp = enumerate_simplex(2)
    for m, n in sp:
        for x, y in sp:
            assert rahman_poly(m, n, x, y, mp, 2) == oracle_poly(m, n, x, y, mp, 2)


def test_matrix_path_matches_reference(rng):
    for N in (3, 4):
        p = random_generic_params(rng)
        mp = derive_mapped(p)
        sp = enumerate_simplex(N)
        rows = poly_value_rows(N, mp, sp)
        for a, (m, n) in enumerate(sp):
            for b, (x, y) in enumerate(sp):
                assert rows[a][b] == rahman_poly(m, n, x, y, mp, N)


def test_degree_by_finite_differences(rng):
    p = random_generic_params(rng)
    mp = derive_mapped(p)
    N = 4
    lines = [((0, 0), (1, 0)), ((0, 0), (0, 1)), ((-2, 1), (1, 1)), ((3, -1), (-1, 2))]
    for m, n in enumerate_simplex(N):
        d = m + n
        for (x0, y0), (dx, dy) in lines:
            vals = [oracle_poly(m, n, x0 + s * dx, y0 + s * dy, mp, N) for s in range(d + 2)]
            for _ in range(d + 1):
                vals = [b - a for a, b in zip(vals, vals[1:])]
            assert vals == [0]


def test_out_of_simplex(p1234):
    mp = derive_mapped(p1234)
    with pytest.raises(OutOfSimplex):
        rahman_poly(2, 2, 0, 0, mp, 3)
    with pytest.raises(OutOfSimplex):
        rahman_poly(0, 0, 3, 1, mp, 3)


def test_matrix_n1(rng):
    pm = build_poly_matrix(1, random_generic_params(rng))
    assert pm.M.shape == (3, 3)
    assert pm.M.rows[0] == [1, 1, 1]
    assert pm.column(0, 0) == [1, 1, 1]


def test_matrix_n5_invertible(p1234, rng):
    for p in (p1234, random_generic_params(rng)):
        pm = build_poly_matrix(5, p)
        assert pm.M.determinant() != 0
        assert pm.M @ pm.inverse == pm.M.identity(21)


def test_matrix_n3_invertible_random(rng):
    for _ in range(5):
        pm = build_poly_matrix(3, random_generic_params(rng), check_invertible=False)
        assert pm.M.determinant() != 0


def test_singular_reported():
    # p1 p4 = p2 p3: genericity violated, refused up front
    with pytest.raises(Exception):
        build_poly_matrix(2, ParamSet(1, 2, 2, 4))


def test_singular_poly_matrix_error_type():
    # force two equal rows
    p = ParamSet(1, 2, 3, 4)
    pm = build_poly_matrix(1, p, check_invertible=False)
    pm.M.rows[2] = list(pm.M.rows[1])
    pm._inverse = None
    with pytest.raises(SingularPolyMatrix):
        pm.inverse
