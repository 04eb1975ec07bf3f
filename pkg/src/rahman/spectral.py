"""Exact checks of the spectral relations between the kernel and the polynomials."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import ExactMatrix, as_scalar
from .kernel import build_kernel, trinomial_weights
from .params import (ChainParams, MappedParams, ParamSet, WeightParams, compatibility_defect,
                     compatible_alpha2, compatible_beta, derive_mapped, derive_weight)
from .polyeval import build_poly_matrix
from .statespace import State, enumerate_simplex


def eigenvalue(m: int, n: int, mp: MappedParams, b1, b2) -> Fraction:
    b1, b2 = as_scalar(b1), as_scalar(b2)
    return (1 - b1 * mp.t - b2 * mp.u) ** m * (1 - b1 * mp.v - b2 * mp.w) ** n


def eigenvalue_alpha_form(m: int, n: int, mp: MappedParams, wp: WeightParams, a1, a2) -> Fraction:
    """Same eigenvalue written through alpha and the weight parameters."""
    a1, a2 = as_scalar(a1), as_scalar(a2)
    d = 1 - a1 * wp.eta1 - a2 * wp.eta2
    first = (d - wp.eta1 * mp.t * (1 - a1) - wp.eta2 * mp.u * (1 - a2)) / d
    second = (d - wp.eta1 * mp.v * (1 - a1) - wp.eta2 * mp.w * (1 - a2)) / d
    return first ** m * second ** n


def eigenvalue_collisions(N: int, mp: MappedParams, b1, b2) -> list[list[State]]:
    """Groups of frequency states sharing an eigenvalue (empty for a simple spectrum)."""
    groups: dict[Fraction, list[State]] = {}
    for s in enumerate_simplex(N).states:
        groups.setdefault(eigenvalue(*s, mp, b1, b2), []).append(s)
    return [g for g in groups.values() if len(g) > 1]


@dataclass
class EigenEntry:
    state: State
    eigenvalue: Fraction
    exact: bool
    max_residual: Fraction
    witness: State | None = None


@dataclass
class EigenReport:
    N: int
    p: ParamSet
    chain: ChainParams
    compatibility_defect: Fraction
    entries: list[EigenEntry]
    collisions: list[list[State]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.exact for e in self.entries)

    @property
    def failures(self) -> list[EigenEntry]:
        return [e for e in self.entries if not e.exact]


def verify_eigen(N: int, p: ParamSet, alpha1, alpha2=None) -> EigenReport:
    """Check K P_{m,n} = lambda_{m,n} P_{m,n} for every frequency state.

    alpha2 defaults to the compatible value.  An incompatible pair is still
    checked (the betas come from the eigenvalue-matching map) so that the
    report shows where the relation breaks.
    """
    a1 = as_scalar(alpha1)
    a2 = compatible_alpha2(p, a1) if alpha2 is None else as_scalar(alpha2)
    b1, b2 = compatible_beta(p, a1, a2, strict=False)
    cp = ChainParams(a1, a2, b1, b2, N, algebraic=True)
    mp = derive_mapped(p)
    kern = build_kernel(N, cp)
    pm = build_poly_matrix(N, p, check_invertible=False)

    entries = []
    for idx, (m, n) in enumerate(pm.space.states):
        vec = pm.M.rows[idx]
        lam = eigenvalue(m, n, mp, b1, b2)
        image = kern.K @ vec
        residuals = [abs(a - lam * b) for a, b in zip(image, vec)]
        worst = max(range(len(residuals)), key=residuals.__getitem__)
        ok = not residuals[worst]
        entries.append(EigenEntry((m, n), lam, ok, residuals[worst],
                                  None if ok else pm.space.states[worst]))
    return EigenReport(N, p, cp, compatibility_defect(p, a1, a2), entries,
                       eigenvalue_collisions(N, mp, b1, b2))


@dataclass
class GramReport:
    N: int
    p: ParamSet
    weight: WeightParams
    G: ExactMatrix

    @property
    def offdiagonal_zero(self) -> bool:
        return all(not v for (i, j), v in self._entries() if i != j)

    @property
    def diagonal(self) -> list[Fraction]:
        return [self.G.rows[i][i] for i in range(self.G.nrows)]

    @property
    def passed(self) -> bool:
        return self.offdiagonal_zero

    def _entries(self):
        for i, row in enumerate(self.G.rows):
            for j, v in enumerate(row):
                yield (i, j), v


def verify_orthogonality(N: int, p: ParamSet) -> GramReport:
    """Gram matrix of the polynomials under the trinomial(eta1, eta2) weight."""
    wp = derive_weight(p)
    pm = build_poly_matrix(N, p, check_invertible=False)
    weights = trinomial_weights(pm.space, wp.eta1, wp.eta2)
    weighted = ExactMatrix._wrap([[a * w for a, w in zip(row, weights)] for row in pm.M.rows])
    return GramReport(N, p, wp, weighted @ pm.M.transpose())


@dataclass
class StationarityReport:
    N: int
    p: ParamSet
    chain: ChainParams
    weight: list[Fraction]
    holds: bool
    witness: tuple[State, Fraction, Fraction] | None  # state, (pi K)(state), pi(state)


def verify_stationarity(N: int, p: ParamSet, alpha1, alpha2=None) -> StationarityReport:
    """Is the trinomial(eta1, eta2) weight invariant under the compatible kernel?"""
    a1 = as_scalar(alpha1)
    a2 = compatible_alpha2(p, a1) if alpha2 is None else as_scalar(alpha2)
    b1, b2 = compatible_beta(p, a1, a2, strict=False)
    cp = ChainParams(a1, a2, b1, b2, N, algebraic=True)
    wp = derive_weight(p)
    kern = build_kernel(N, cp)
    pi = trinomial_weights(kern.space, wp.eta1, wp.eta2)
    image = kern.K.transpose() @ pi
    witness = None
    for s, got, want in zip(kern.space.states, image, pi):
        if got != want:
            witness = (s, got, want)
            break
    return StationarityReport(N, p, cp, pi, witness is None, witness)
