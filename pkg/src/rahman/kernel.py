"""The Hoare-Rahman transition kernel.

K[(i1,i2) -> (j1,j2)] = sum_{k1,k2} b(k1; i1, a1) b(k2; i2, a2)
                         * b2(j1-k1, j2-k2; N-k1-k2, b1, b2)

Rows are source states, columns are target states, both in simplex order,
so K acting on a column vector f gives (K f)(i) = sum_j K[i, j] f(j).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import RangeError, StochasticityViolation
from .exact import ExactMatrix, as_scalar
from .params import ChainParams
from .statespace import StateSpace, enumerate_simplex


def binomial_pmf(k: int, n: int, a) -> Fraction:
    if not 0 <= k <= n:
        raise RangeError(f"binomial_pmf needs 0 <= k <= n, got k={k}, n={n}")
    a = as_scalar(a)
    return comb(n, k) * a ** k * (1 - a) ** (n - k)


def trinomial_pmf(i1: int, i2: int, N: int, b1, b2) -> Fraction:
    if i1 < 0 or i2 < 0 or i1 + i2 > N:
        raise RangeError(f"trinomial_pmf needs i1, i2 >= 0 and i1+i2 <= N, got ({i1},{i2},{N})")
    b1, b2 = as_scalar(b1), as_scalar(b2)
    coef = factorial(N) // (factorial(i1) * factorial(i2) * factorial(N - i1 - i2))
    return coef * b1 ** i1 * b2 ** i2 * (1 - b1 - b2) ** (N - i1 - i2)


def trinomial_weights(space: StateSpace, b1, b2) -> list[Fraction]:
    return [trinomial_pmf(x, y, space.N, b1, b2) for x, y in space.states]


@dataclass
class KernelMatrix:
    N: int
    cp: ChainParams
    space: StateSpace
    K: ExactMatrix

    def row(self, i1: int, i2: int) -> list[Fraction]:
        return list(self.K.rows[self.space.index((i1, i2))])

    def __matmul__(self, other):
        return self.K @ other


def build_kernel(N: int, cp: ChainParams) -> KernelMatrix:
    space = enumerate_simplex(N)
    a1, a2, b1, b2 = cp.alpha1, cp.alpha2, cp.beta1, cp.beta2
    bin1 = {(k, i): binomial_pmf(k, i, a1) for i in range(N + 1) for k in range(i + 1)}
    bin2 = {(k, i): binomial_pmf(k, i, a2) for i in range(N + 1) for k in range(i + 1)}
    tri = {}
    for rest in range(N + 1):
        for x in range(rest + 1):
            for y in range(rest + 1 - x):
                tri[x, y, rest] = trinomial_pmf(x, y, rest, b1, b2)

    rows = []
    for i1, i2 in space.states:
        row = []
        for j1, j2 in space.states:
            acc = Fraction(0)
            for k1 in range(min(i1, j1) + 1):
                for k2 in range(min(i2, j2) + 1):
                    rest = N - k1 - k2
                    if (j1 - k1) + (j2 - k2) > rest:
                        continue
                    acc += bin1[k1, i1] * bin2[k2, i2] * tri[j1 - k1, j2 - k2, rest]
            row.append(acc)
        rows.append(row)

    K = ExactMatrix._wrap(rows)
    for s, total in zip(space.states, K.row_sums()):
        if total != 1:
            raise StochasticityViolation(f"row {s} sums to {total}")
    return KernelMatrix(N, cp.with_N(N) if cp.N != N else cp, space, K)
