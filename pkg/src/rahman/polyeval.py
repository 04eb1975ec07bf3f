"""Exact evaluation of the two-variable Rahman polynomials.

    P_{m,n}(x, y) = sum_{i,j,k,l} (-m)_{i+j} (-n)_{k+l} (-x)_{i+k} (-y)_{j+l}
                    / (i! j! k! l! (-N)_{i+j+k+l}) * t^i u^j v^k w^l

All four Pochhammer factors in the numerator truncate the sum, so it is
finite: i+j <= m, k+l <= n, i+k <= x, j+l <= y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import OutOfSimplex, SingularPolyMatrix, VanishingDenominator
from .exact import ExactMatrix, SingularMatrix
from .params import MappedParams, ParamSet, derive_mapped
from .statespace import StateSpace, enumerate_simplex


def pochhammer(a, n: int):
    """Rising factorial a (a+1) ... (a+n-1); the empty product is 1."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    out = 1
    for k in range(n):
        out *= a + k
    return out


def _powers(base: Fraction, top: int) -> list[Fraction]:
    out = [Fraction(1)]
    for _ in range(top):
        out.append(out[-1] * base)
    return out


def _check_point(label: str, a: int, b: int, N: int):
    if a < 0 or b < 0 or a + b > N:
        raise OutOfSimplex(f"{label}=({a},{b}) outside the simplex of size {N}")


def rahman_poly(m: int, n: int, x: int, y: int, mp: MappedParams, N: int) -> Fraction:
    _check_point("(m,n)", m, n, N)
    _check_point("(x,y)", x, y, N)
    t, u, v, w = mp.t, mp.u, mp.v, mp.w
    total = Fraction(0)
    for i in range(min(m, x) + 1):
        for j in range(min(m - i, y) + 1):
            for k in range(min(n, x - i) + 1):
                for l in range(min(n - k, y - j) + 1):
                    r = i + j + k + l
                    num = (pochhammer(-m, i + j) * pochhammer(-n, k + l)
                           * pochhammer(-x, i + k) * pochhammer(-y, j + l))
                    den = pochhammer(-N, r)
                    if den == 0:
                        if num == 0:
                            continue
                        raise VanishingDenominator(
                            f"(-N)_{r} = 0 with nonzero numerator at i,j,k,l={i},{j},{k},{l}")
                    den *= factorial(i) * factorial(j) * factorial(k) * factorial(l)
                    total += Fraction(num, den) * t ** i * u ** j * v ** k * w ** l
    return total


def _grouped_coefficients(m: int, n: int, mp: MappedParams, N: int,
                          pw: tuple[list[Fraction], ...]) -> dict[tuple[int, int], Fraction]:
    """Coefficients C[a, b] with P_{m,n}(x, y) = sum C[a,b] (-x)_a (-y)_b."""
    tp, up, vp, wp = pw
    coef: dict[tuple[int, int], Fraction] = {}
    for i in range(m + 1):
        for j in range(m - i + 1):
            left = Fraction(pochhammer(-m, i + j), factorial(i) * factorial(j)) * tp[i] * up[j]
            for k in range(n + 1):
                for l in range(n - k + 1):
                    c = left * Fraction(pochhammer(-n, k + l),
                                        factorial(k) * factorial(l) * pochhammer(-N, i + j + k + l))
                    key = (i + k, j + l)
                    coef[key] = coef.get(key, 0) + c * vp[k] * wp[l]
    return coef


@dataclass
class PolyValueMatrix:
    """Rows: frequency states (m, n); columns: physical states (x, y)."""
    N: int
    p: ParamSet
    space: StateSpace
    M: ExactMatrix
    _inverse: ExactMatrix | None = field(default=None, repr=False)

    @property
    def inverse(self) -> ExactMatrix:
        if self._inverse is None:
            try:
                self._inverse = self.M.inverse()
            except SingularMatrix as exc:
                raise SingularPolyMatrix(
                    f"polynomial value matrix is singular at N={self.N}, p={self.p}") from exc
        return self._inverse

    def column(self, x: int, y: int) -> list[Fraction]:
        """All P_{m,n}(x, y) for fixed (x, y), ordered by (m, n)."""
        j = self.space.index((x, y))
        return [row[j] for row in self.M.rows]

    def row(self, m: int, n: int) -> list[Fraction]:
        """P_{m,n} sampled on the physical states."""
        return list(self.M.rows[self.space.index((m, n))])


def poly_value_rows(N: int, mp: MappedParams, space: StateSpace | None = None) -> list[list[Fraction]]:
    space = space or enumerate_simplex(N)
    pw = tuple(_powers(b, N) for b in (mp.t, mp.u, mp.v, mp.w))
    fx = {(a, x): pochhammer(-x, a) for x in range(N + 1) for a in range(N + 1)}
    rows = []
    for m, n in space.states:
        coef = _grouped_coefficients(m, n, mp, N, pw)
        row = []
        for x, y in space.states:
            acc = Fraction(0)
            for (a, b), c in coef.items():
                if a <= x and b <= y and c:
                    acc += c * (fx[a, x] * fx[b, y])
            row.append(acc)
        rows.append(row)
    return rows


def build_poly_matrix(N: int, p: ParamSet, check_invertible: bool = True) -> PolyValueMatrix:
    p.require_generic()
    space = enumerate_simplex(N)
    pm = PolyValueMatrix(N, p, space, ExactMatrix._wrap(poly_value_rows(N, derive_mapped(p), space)))
    if check_invertible:
        pm.inverse  # raises SingularPolyMatrix
    return pm
