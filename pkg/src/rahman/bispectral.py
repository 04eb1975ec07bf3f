"""Difference operators in the frequency variables and local commutants of the kernel.

The operator B acting on the indices (m, n) is obtained by conjugation,
B = P D P^{-1}, where P holds the polynomial values and D is multiplication
by a linear function of (x, y).  Locality of B is then a checked property,
never an assumption.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateParams, GaugeUnsolvable
from .exact import ExactMatrix, as_scalar, nullspace, rref
from .kernel import KernelMatrix, build_kernel
from .params import ChainParams, ParamSet
from .polyeval import PolyValueMatrix, build_poly_matrix
from .statespace import StateSpace, StencilPattern, adjacency, enumerate_simplex


def multiplication_diagonal(space: StateSpace, cx, cy) -> ExactMatrix:
    cx, cy = as_scalar(cx), as_scalar(cy)
    return ExactMatrix.diagonal([cx * x + cy * y for x, y in space.states])


@dataclass
class StencilReport:
    row_nonzeros: list[int]
    violations: list[tuple[int, int, Fraction]]

    @property
    def max_nonzeros(self) -> int:
        return max(self.row_nonzeros, default=0)

    @property
    def conforms(self) -> bool:
        return not self.violations


def locality_check(B: ExactMatrix, pattern: StencilPattern) -> StencilReport:
    n = len(pattern.space)
    if B.shape != (n, n):
        raise ValueError(f"operator shape {B.shape} does not match pattern size {n}")
    counts = []
    violations = []
    for i, row in enumerate(B.rows):
        nz = 0
        for j, v in enumerate(row):
            if v:
                nz += 1
                if (i, j) not in pattern.allowed:
                    violations.append((i, j, v))
        counts.append(nz)
    return StencilReport(counts, violations)


@dataclass
class BispectralOperator:
    N: int
    p: ParamSet
    B: ExactMatrix
    stencil: StencilReport
    residual_zero: bool


def conjugate_operator(P: PolyValueMatrix, D: ExactMatrix) -> BispectralOperator:
    """B with B P = P D, computed as P D P^{-1}."""
    B = (P.M @ D) @ P.inverse
    residual_zero = (B @ P.M - P.M @ D).is_zero()
    pattern = adjacency(P.space, with_diagonal=True)
    return BispectralOperator(P.N, P.p, B, locality_check(B, pattern), residual_zero)


def five_point_operator(N: int, p: ParamSet, P: PolyValueMatrix | None = None) -> BispectralOperator:
    """Operator for multiplication by (p1+p2) x - (p3+p4) y."""
    P = P or build_poly_matrix(N, p)
    D = multiplication_diagonal(P.space, p.p1 + p.p2, -(p.p3 + p.p4))
    return conjugate_operator(P, D)


@dataclass
class SevenPointResult:
    Bx: BispectralOperator
    By: BispectralOperator
    B: BispectralOperator

    @property
    def linear_consistent(self) -> bool:
        p = self.B.p
        combo = self.Bx.B.scale(p.p1 + p.p2) - self.By.B.scale(p.p3 + p.p4)
        return combo == self.B.B

    def stencil_offsets(self, which: str = "x") -> set[tuple[int, int]]:
        """Lattice displacements (dm, dn) that occur in Bx or By."""
        op = self.Bx if which == "x" else self.By
        states = enumerate_simplex(self.B.N).states
        return {(states[j][0] - states[i][0], states[j][1] - states[i][1])
                for i, j in op.B.nonzero_positions()}


def seven_point_operators(N: int, p: ParamSet) -> SevenPointResult:
    P = build_poly_matrix(N, p)
    Bx = conjugate_operator(P, multiplication_diagonal(P.space, 1, 0))
    By = conjugate_operator(P, multiplication_diagonal(P.space, 0, 1))
    return SevenPointResult(Bx, By, five_point_operator(N, p, P))


# -- the explicit N = 5 operator ---------------------------------------------

# Row layouts of the N = 5 operator, one string per frequency state in
# simplex order.  "s" marks the diagonal entry fixed by the zero row sum.
_PAPER_B_ROWS = [
    "s1 a1 0 0 0 0 b1 0 0 0 0 0 0 0 0 0 0 0 0 0 0",
    "a2 s2 c2 0 0 0 0 d2 0 0 0 0 0 0 0 0 0 0 0 0 0",
    "0 a3 s3 c3 0 0 0 0 d3 0 0 0 0 0 0 0 0 0 0 0 0",
    "0 0 a4 s4 c4 0 0 0 0 d4 0 0 0 0 0 0 0 0 0 0 0",
    "0 0 0 a5 s5 c5 0 0 0 0 e5 0 0 0 0 0 0 0 0 0 0",
    "0 0 0 0 a6 s6 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0",
    "d7 0 0 0 0 0 s7 c7 0 0 0 a7 0 0 0 0 0 0 0 0 0",
    "0 a8 0 0 0 0 b8 s8 d8 0 0 0 e8 0 0 0 0 0 0 0 0",
    "0 0 e9 0 0 0 0 c9 s9 a9 0 0 0 d9 0 0 0 0 0 0 0",
    "0 0 0 d10 0 0 0 0 a10 s10 c10 0 0 0 e10 0 0 0 0 0 0",
    "0 0 0 0 b11 0 0 0 0 a11 s11 0 0 0 0 0 0 0 0 0 0",
    "0 0 0 0 0 0 a12 0 0 0 0 s12 d12 0 0 c12 0 0 0 0 0",
    "0 0 0 0 0 0 0 c13 0 0 0 a13 s13 d13 0 0 e13 0 0 0 0",
    "0 0 0 0 0 0 0 0 d14 0 0 0 a14 s14 c14 0 0 e14 0 0 0",
    "0 0 0 0 0 0 0 0 0 a15 0 0 0 c15 s15 0 0 0 0 0 0",
    "0 0 0 0 0 0 0 0 0 0 0 a16 0 0 0 s16 c16 0 d16 0 0",
    "0 0 0 0 0 0 0 0 0 0 0 0 e17 0 0 a17 s17 c17 0 d17 0",
    "0 0 0 0 0 0 0 0 0 0 0 0 0 a18 0 0 c18 s18 0 0 0",
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 c19 0 0 s19 a19 d19",
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 a20 0 c20 s20 0",
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 a21 0 s21",
]

# Each named entry is an integer multiple of one of four building blocks:
#   "L": (p1p4 - p2p3)/(p3+p1)
#   "R": p1 p3 (p4+p2) S / ((p3+p1)(p1p4 - p2p3))
#   "U": -p2 (p3+p1) p4 S / ((p4+p2)(p1p4 - p2p3))
#   "D": -(p1p4 - p2p3)/(p4+p2)
# with S = p1+p2+p3+p4.
_PAPER_B_ENTRIES = {
    "a1": ("R", 5), "b1": ("U", 5),
    "a2": ("L", 1), "c2": ("R", 4), "d2": ("U", 4),
    "a3": ("L", 2), "c3": ("R", 3), "d3": ("U", 3),
    "a4": ("L", 3), "c4": ("R", 2), "d4": ("U", 2),
    "a5": ("L", 4), "c5": ("R", 1), "e5": ("U", 1),
    "a6": ("L", 5),
    "a7": ("U", 4), "c7": ("R", 4), "d7": ("D", 1),
    "a8": ("D", 1), "b8": ("L", 1), "d8": ("R", 3), "e8": ("U", 3),
    "a9": ("R", 2), "c9": ("L", 2), "d9": ("U", 2), "e9": ("D", 1),
    "a10": ("L", 3), "c10": ("R", 1), "d10": ("D", 1), "e10": ("U", 1),
    "a11": ("L", 4), "b11": ("D", 1),
    "a12": ("D", 2), "c12": ("U", 3), "d12": ("R", 3),
    "a13": ("L", 1), "c13": ("D", 2), "d13": ("R", 2), "e13": ("U", 2),
    "a14": ("L", 2), "c14": ("R", 1), "d14": ("D", 2), "e14": ("U", 1),
    "a15": ("D", 2), "c15": ("L", 3),
    "a16": ("D", 3), "c16": ("R", 2), "d16": ("U", 2),
    "a17": ("L", 1), "c17": ("R", 1), "d17": ("U", 1), "e17": ("D", 3),
    "a18": ("D", 3), "c18": ("L", 2),
    "a19": ("R", 1), "c19": ("D", 4), "d19": ("U", 1),
    "a20": ("D", 4), "c20": ("L", 1),
    "a21": ("D", 5),
}


def paper_B_blocks(p: ParamSet) -> dict[str, Fraction]:
    p1, p2, p3, p4 = p.as_tuple()
    s, a = p.total, p.cross
    if a == 0 or p3 + p1 == 0 or p4 + p2 == 0:
        raise DegenerateParams("closed-form N=5 entries need p1p4 != p2p3, p1+p3 != 0, p2+p4 != 0")
    return {
        "L": a / (p3 + p1),
        "R": p1 * p3 * (p4 + p2) * s / ((p3 + p1) * a),
        "U": -p2 * (p3 + p1) * p4 * s / ((p4 + p2) * a),
        "D": -a / (p4 + p2),
    }


def paper_B_named(p: ParamSet) -> dict[str, Fraction]:
    blocks = paper_B_blocks(p)
    return {name: k * blocks[kind] for name, (kind, k) in _PAPER_B_ENTRIES.items()}


def paper_B_matrix(p: ParamSet) -> ExactMatrix:
    """The closed-form N = 5 operator, diagonal completed by zero row sums."""
    named = paper_B_named(p)
    rows = []
    for layout in _PAPER_B_ROWS:
        cells = layout.split()
        row = [named.get(c, Fraction(0)) for c in cells]
        diag = next(j for j, c in enumerate(cells) if c.startswith("s"))
        row[diag] = -sum(row, Fraction(0))
        rows.append(row)
    return ExactMatrix._wrap(rows)


def paper_B_layout() -> list[list[str]]:
    return [layout.split() for layout in _PAPER_B_ROWS]


@dataclass
class ComparisonReport:
    expected: ExactMatrix
    computed: ExactMatrix
    labels: list[list[str]]
    mismatches: list[tuple[int, int, str, Fraction, Fraction]] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    @property
    def compared(self) -> int:
        return sum(1 for row in self.labels for c in row if c != "0")


def _compare(expected: ExactMatrix, computed: ExactMatrix, labels: list[list[str]]) -> list:
    out = []
    for i, (er, cr) in enumerate(zip(expected.rows, computed.rows)):
        for j, (e, c) in enumerate(zip(er, cr)):
            if e != c:
                out.append((i, j, labels[i][j], e, c))
    return out


def reproduce_paper_B(p: ParamSet) -> ComparisonReport:
    p.require_generic()
    op = five_point_operator(5, p)
    expected = paper_B_matrix(p)
    labels = paper_B_layout()
    return ComparisonReport(expected, op.B, labels, _compare(expected, op.B, labels),
                            {"operator": op})


# -- commutant ---------------------------------------------------------------

@dataclass
class CommutantBasis:
    N: int
    cp: ChainParams
    pattern: StencilPattern
    basis: list[ExactMatrix]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains_identity(self) -> bool:
        n = len(self.pattern.space)
        vecs = [[m[i, j] for i in range(n) for j in range(n)] for m in self.basis]
        eye = [Fraction(int(i == j)) for i in range(n) for j in range(n)]
        before = len(rref(ExactMatrix._wrap(vecs))[1]) if vecs else 0
        after = len(rref(ExactMatrix._wrap(vecs + [eye]))[1])
        return before == after

    def non_scalar_element(self) -> ExactMatrix | None:
        n = len(self.pattern.space)
        for m in self.basis:
            c = m[0, 0]
            if any(m[i, j] != (c if i == j else 0) for i in range(n) for j in range(n)):
                return m
        return None


def commutator_system(K: ExactMatrix, pattern: StencilPattern) -> tuple[ExactMatrix, list[tuple[int, int]]]:
    """Linear map from pattern entries of M to the entries of M K - K M."""
    n = K.nrows
    unknowns = pattern.sorted_positions()
    rows = [[Fraction(0)] * len(unknowns) for _ in range(n * n)]
    for col, (a, b) in enumerate(unknowns):
        # M[a,b] enters (M K)[a, c] with K[b, c] and (K M)[r, b] with K[r, a]
        kb = K.rows[b]
        for c in range(n):
            if kb[c]:
                rows[a * n + c][col] += kb[c]
        for r in range(n):
            kra = K.rows[r][a]
            if kra:
                rows[r * n + b][col] -= kra
    return ExactMatrix._wrap(rows), unknowns


def discover_commutant(kern: KernelMatrix, pattern: StencilPattern) -> CommutantBasis:
    system, unknowns = commutator_system(kern.K, pattern)
    n = kern.K.nrows
    basis = []
    for vec in nullspace(system):
        m = ExactMatrix.zeros(n)
        for (a, b), val in zip(unknowns, vec):
            m.rows[a][b] = val
        basis.append(m)
    return CommutantBasis(kern.N, kern.cp, pattern, basis)


def normalize_gauge(M: ExactMatrix, anchors: Sequence[tuple[tuple[int, int], object]]) -> ExactMatrix:
    """Return a M + b I hitting two anchor values; positions are 0-based."""
    if len(anchors) != 2:
        raise GaugeUnsolvable("exactly two anchors are needed to fix scaling and shift")
    (pos1, v1), (pos2, v2) = anchors
    v1, v2 = as_scalar(v1), as_scalar(v2)
    m11, m12 = M[pos1], Fraction(int(pos1[0] == pos1[1]))
    m21, m22 = M[pos2], Fraction(int(pos2[0] == pos2[1]))
    det = m11 * m22 - m12 * m21
    if det == 0:
        raise GaugeUnsolvable(f"anchors {pos1}, {pos2} do not determine scaling and shift")
    a = (v1 * m22 - m12 * v2) / det
    b = (m11 * v2 - m21 * v1) / det
    n = M.nrows
    return ExactMatrix._wrap([[a * M.rows[i][j] + (b if i == j else 0) for j in range(n)]
                              for i in range(n)])


# Last diagonal entry -> 0, entry (state (0,0), state (0,1)) -> 3.
DEFAULT_ANCHORS = (((9, 9), 0), ((0, 4), 3))

_PAPER_COMMUTANT_ROWS = [
    "x1 x2 0 0 x3 0 0 0 0 0",
    "x4 x5 x6 0 0 x7 0 0 0 0",
    "0 x8 x9 x10 0 0 x11 0 0 0",
    "0 0 x12 x13 0 0 0 0 0 0",
    "x14 0 0 0 x15 x16 0 x17 0 0",
    "0 x18 0 0 x19 x20 x21 0 x22 0",
    "0 0 x23 0 0 x24 x25 0 0 0",
    "0 0 0 0 x26 0 0 x27 x28 x29",
    "0 0 0 0 0 x30 0 x31 x32 0",
    "0 0 0 0 0 0 0 x33 0 x34",
]


def paper_commutant_named(a1, a2, b1, b2) -> dict[str, Fraction]:
    a1, a2, b1, b2 = map(as_scalar, (a1, a2, b1, b2))
    if a1 == 0 or b2 == 0:
        raise DegenerateParams("closed-form N=3 commutant needs alpha1 != 0 and beta2 != 0")
    ab = a1 * b2
    g = b2 + b1 - 1
    x = {
        "x1": 3 * (a1 * a2 * b2 - 2 * a1 * b2 + a1 * a2 * b1 - a2 * b1 - a1 * b1 - a1 * a2 + a1) / ab,
        "x2": 3 * a2 * b1 / ab,
        "x3": Fraction(3),
        "x4": (a1 - 1) * a2 * g / ab,
        "x5": (2 * a1 * a2 * b2 + a2 * b2 - 5 * a1 * b2 + 2 * a1 * a2 * b1 - a2 * b1
               - 3 * a1 * b1 - 2 * a1 * a2 - a2 + 3 * a1) / ab,
        "x6": 2 * a2 * b1 / ab,
        "x7": Fraction(2),
        "x8": 2 * (a1 - 1) * a2 * g / ab,
        "x9": (a1 * a2 * b2 + 2 * a2 * b2 - 4 * a1 * b2 + a1 * a2 * b1 + a2 * b1
               - 3 * a1 * b1 - a1 * a2 - 2 * a2 + 3 * a1) / ab,
        "x10": a2 * b1 / ab,
        "x11": Fraction(1),
        "x12": 3 * (a1 - 1) * a2 * g / ab,
        "x13": 3 * (a2 - a1) * g / ab,
        "x14": (a2 - 1) * g / b2,
        "x15": 2 * (a1 * a2 * b2 - 2 * a1 * b2 + a1 * a2 * b1 - a2 * b1 - a1 * b1 - a1 * a2 + a1) / ab,
        "x16": 2 * a2 * b1 / ab,
        "x17": Fraction(2),
        "x18": (a2 - 1) * g / b2,
        "x19": (a1 - 1) * a2 * g / ab,
        "x20": (a1 * a2 * b2 + a2 * b2 - 3 * a1 * b2 + a1 * a2 * b1
                - 2 * a1 * b1 - a1 * a2 - a2 + 2 * a1) / ab,
        "x21": a2 * b1 / ab,
        "x22": Fraction(1),
        "x23": (a2 - 1) * g / b2,
        "x24": 2 * (a1 - 1) * a2 * g / ab,
        "x25": 2 * (a2 - a1) * g / ab,
        "x26": 2 * (a2 - 1) * g / b2,
        "x27": (a1 * a2 * b2 - 2 * a1 * b2 + a1 * a2 * b1 - a2 * b1 - a1 * b1 - a1 * a2 + a1) / ab,
        "x28": a2 * b1 / ab,
        "x29": Fraction(1),
        "x30": 2 * (a2 - 1) * g / b2,
        "x31": (a1 - 1) * a2 * g / ab,
        "x32": (a2 - a1) * g / ab,
        "x33": 3 * (a2 - 1) * g / b2,
        "x34": Fraction(0),
    }
    return x


def paper_commutant_layout() -> list[list[str]]:
    return [layout.split() for layout in _PAPER_COMMUTANT_ROWS]


def paper_commutant_matrix(a1, a2, b1, b2) -> ExactMatrix:
    named = paper_commutant_named(a1, a2, b1, b2)
    return ExactMatrix._wrap([[named.get(c, Fraction(0)) for c in row]
                              for row in paper_commutant_layout()])


def reproduce_paper_commutant(a1, a2, b1, b2, anchors=DEFAULT_ANCHORS) -> ComparisonReport:
    a1, a2, b1, b2 = map(as_scalar, (a1, a2, b1, b2))
    expected = paper_commutant_matrix(a1, a2, b1, b2)
    cp = ChainParams(a1, a2, b1, b2, 3, algebraic=True)
    kern = build_kernel(3, cp)
    found = discover_commutant(kern, adjacency(kern.space, with_diagonal=True))
    labels = paper_commutant_layout()
    extra = {"dimension": found.dimension, "commutant": found}
    M = found.non_scalar_element()
    if M is None:
        return ComparisonReport(expected, ExactMatrix.zeros(10), labels,
                                [(-1, -1, "no non-scalar solution", Fraction(0), Fraction(0))], extra)
    gauged = normalize_gauge(M, anchors)
    report = ComparisonReport(expected, gauged, labels, _compare(expected, gauged, labels), extra)
    if found.dimension != 2:
        report.mismatches.append((-1, -1, f"dimension {found.dimension} != 2", Fraction(2),
                                  Fraction(found.dimension)))
    return report
