"""Dense matrices over the rationals.

Everything here works on :class:`fractions.Fraction` entries; no floating
point is ever introduced.  The matrices involved are small (a few dozen rows)
but their entries can carry very large numerators, so elimination keeps the
row operations to the minimum and skips zero multipliers.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction


def as_scalar(value) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        return Fraction(text)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(value)


def format_scalar(q: Fraction) -> str:
    """Canonical "num/den" form, lowest terms, positive denominator."""
    q = as_scalar(q)
    return f"{q.numerator}/{q.denominator}"


class SingularMatrix(ArithmeticError):
    pass


class ExactMatrix:
    """Row-major dense rational matrix."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        self.rows = [[as_scalar(v) for v in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def _wrap(cls, rows: list[list[Fraction]]) -> "ExactMatrix":
        m = cls.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = len(rows[0]) if rows else 0
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "ExactMatrix":
        ncols = nrows if ncols is None else ncols
        return cls._wrap([[Fraction(0)] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        m = cls.zeros(n)
        for i in range(n):
            m.rows[i][i] = Fraction(1)
        return m

    @classmethod
    def diagonal(cls, values: Sequence) -> "ExactMatrix":
        m = cls.zeros(len(values))
        for i, v in enumerate(values):
            m.rows[i][i] = as_scalar(v)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __setitem__(self, idx, value):
        i, j = idx
        self.rows[i][j] = as_scalar(value)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols})"

    def copy(self) -> "ExactMatrix":
        return self._wrap([list(r) for r in self.rows])

    def transpose(self) -> "ExactMatrix":
        return self._wrap([list(col) for col in zip(*self.rows)])

    T = property(transpose)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return self._wrap([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same(other)
        return self._wrap([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self._wrap([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "ExactMatrix":
        c = as_scalar(c)
        return self._wrap([[c * a for a in r] for r in self.rows])

    __rmul__ = scale

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other.rows))
            out = []
            for r in self.rows:
                nz = [(k, a) for k, a in enumerate(r) if a]
                out.append([sum((a * col[k] for k, a in nz), Fraction(0)) for col in cols])
            return self._wrap(out)
        vec = [as_scalar(v) for v in other]
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum((a * b for a, b in zip(r, vec) if a), Fraction(0)) for r in self.rows]

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def is_zero(self) -> bool:
        return all(not a for r in self.rows for a in r)

    def row_sums(self) -> list[Fraction]:
        return [sum(r, Fraction(0)) for r in self.rows]

    def nonzero_positions(self) -> set[tuple[int, int]]:
        return {(i, j) for i, r in enumerate(self.rows) for j, a in enumerate(r) if a}

    def to_float(self) -> list[list[float]]:
        return [[float(a) for a in r] for r in self.rows]

    # -- elimination -------------------------------------------------------

    def inverse(self) -> "ExactMatrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        return solve(self, ExactMatrix.identity(self.nrows))

    def determinant(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = self.nrows
        det = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            p = a[c][c]
            det *= p
            for r in range(c + 1, n):
                f = a[r][c]
                if f:
                    f = f / p
                    row_r, row_c = a[r], a[c]
                    for k in range(c + 1, n):
                        if row_c[k]:
                            row_r[k] -= f * row_c[k]
        return det

    def rank(self) -> int:
        return len(rref(self)[1])


def solve(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Return X with a @ X == b.  Raises SingularMatrix if a is singular."""
    n = a.nrows
    if a.ncols != n or b.nrows != n:
        raise ValueError("solve needs square a and matching b")
    aug = [list(ra) + list(rb) for ra, rb in zip(a.rows, b.rows)]
    width = n + b.ncols
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise SingularMatrix(f"zero pivot in column {c}")
        aug[c], aug[piv] = aug[piv], aug[c]
        prow = aug[c]
        inv = 1 / prow[c]
        prow = aug[c] = [v * inv if v else v for v in prow]
        support = [k for k in range(c + 1, width) if prow[k]]
        for r in range(n):
            if r == c:
                continue
            f = aug[r][c]
            if f:
                row = aug[r]
                for k in support:
                    row[k] -= f * prow[k]
                row[c] = Fraction(0)
    return ExactMatrix._wrap([row[n:] for row in aug])


def rref(m: ExactMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in m.rows]
    nr, nc = m.nrows, m.ncols
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv if v else v for v in a[r]]
        prow = a[r]
        support = [k for k in range(c, nc) if prow[k]]
        for i in range(nr):
            if i != r and a[i][c]:
                f = a[i][c]
                row = a[i]
                for k in support:
                    row[k] -= f * prow[k]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(m: ExactMatrix) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}, one vector per free column."""
    reduced, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.ncols
        v[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
