"""Parameter sets and the maps between them.

The polynomials are indexed by four generic numbers ``p1..p4``.  From these
we derive the series coefficients ``t, u, v, w`` and the weight parameters
``eta1, eta2``.  The chain has its own four parameters
``alpha1, alpha2, beta1, beta2``.

The polynomials are eigenvectors of the chain exactly when

* ``beta_i = eta_i (1 - alpha_i) / (1 - alpha1 eta1 - alpha2 eta2)`` and
* ``alpha1 alpha2 (p1+p2+p3+p4) = alpha1 (p3+p4) + alpha2 (p1+p2)``.

The first relation alone equates the two closed forms of the eigenvalues; the
second one is what makes the one-die transition matrix share the
polynomials' eigenvectors.  Both are exposed separately below.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateParams, IncompatibleParams
from .exact import as_scalar


def _div(num: Fraction, den: Fraction, what: str) -> Fraction:
    if den == 0:
        raise DegenerateParams(f"vanishing denominator in {what}")
    return num / den


@dataclass(frozen=True)
class ParamSet:
    p1: Fraction
    p2: Fraction
    p3: Fraction
    p4: Fraction

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "p4"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))

    @classmethod
    def of(cls, *values) -> "ParamSet":
        if len(values) == 1:
            values = tuple(values[0])
        if len(values) != 4:
            raise ValueError(f"expected 4 parameters, got {len(values)}")
        return cls(*values)

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.p1, self.p2, self.p3, self.p4

    @property
    def total(self) -> Fraction:
        return self.p1 + self.p2 + self.p3 + self.p4

    @property
    def cross(self) -> Fraction:
        """p1 p4 - p2 p3; nonzero for generic parameters."""
        return self.p1 * self.p4 - self.p2 * self.p3

    def scaled(self, c) -> "ParamSet":
        c = as_scalar(c)
        return ParamSet(*(c * p for p in self.as_tuple()))

    def degeneracies(self) -> list[str]:
        """Names of the vanishing quantities; empty for a generic point."""
        p1, p2, p3, p4 = self.as_tuple()
        checks = {
            "p1": p1, "p2": p2, "p3": p3, "p4": p4,
            "p1+p2": p1 + p2, "p1+p3": p1 + p3,
            "p2+p4": p2 + p4, "p3+p4": p3 + p4,
            "p1+p2+p3+p4": self.total,
            "p1*p4-p2*p3": self.cross,
        }
        return [k for k, v in checks.items() if v == 0]

    def require_valid(self) -> None:
        """Every denominator factor nonzero; p1 p4 = p2 p3 is still allowed here."""
        bad = [d for d in self.degeneracies() if d != "p1*p4-p2*p3"]
        if bad:
            raise DegenerateParams("degenerate parameters: " + ", ".join(bad) + " vanish")

    @property
    def is_generic(self) -> bool:
        return not self.degeneracies()

    def require_generic(self) -> None:
        bad = self.degeneracies()
        if bad:
            raise DegenerateParams("non-generic parameters: " + ", ".join(bad) + " vanish")


@dataclass(frozen=True)
class MappedParams:
    t: Fraction
    u: Fraction
    v: Fraction
    w: Fraction


@dataclass(frozen=True)
class WeightParams:
    eta1: Fraction
    eta2: Fraction

    @property
    def is_probability(self) -> bool:
        """True when (eta1, eta2) is a nondegenerate trinomial parameter pair."""
        return self.eta1 > 0 and self.eta2 > 0 and self.eta1 + self.eta2 < 1


@dataclass(frozen=True)
class ChainParams:
    alpha1: Fraction
    alpha2: Fraction
    beta1: Fraction
    beta2: Fraction
    N: int = 1
    algebraic: bool = False

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not self.algebraic and not self.is_probability:
            raise ValueError(
                "chain parameters outside the probability range; "
                "pass algebraic=True to use them as formal parameters")

    @property
    def is_probability(self) -> bool:
        a1, a2, b1, b2 = self.alpha1, self.alpha2, self.beta1, self.beta2
        return 0 <= a1 <= 1 and 0 <= a2 <= 1 and b1 >= 0 and b2 >= 0 and b1 + b2 <= 1

    @property
    def is_interior(self) -> bool:
        """Strict version: every kernel entry is then positive."""
        a1, a2, b1, b2 = self.alpha1, self.alpha2, self.beta1, self.beta2
        return 0 < a1 < 1 and 0 < a2 < 1 and b1 > 0 and b2 > 0 and b1 + b2 < 1

    def with_N(self, N: int) -> "ChainParams":
        return ChainParams(self.alpha1, self.alpha2, self.beta1, self.beta2, N,
                           algebraic=self.algebraic)


def derive_mapped(p: ParamSet) -> MappedParams:
    p.require_valid()
    p1, p2, p3, p4 = p.as_tuple()
    s = p.total
    return MappedParams(
        t=_div((p1 + p2) * (p1 + p3), p1 * s, "t"),
        u=_div((p1 + p3) * (p4 + p3), p3 * s, "u"),
        v=_div((p1 + p2) * (p2 + p4), p2 * s, "v"),
        w=_div((p4 + p2) * (p4 + p3), p4 * s, "w"),
    )


def derive_weight(p: ParamSet) -> WeightParams:
    p.require_valid()
    p1, p2, p3, p4 = p.as_tuple()
    s = p.total
    return WeightParams(
        eta1=_div(p1 * p2 * s, (p1 + p2) * (p1 + p3) * (p2 + p4), "eta1"),
        eta2=_div(p3 * p4 * s, (p1 + p3) * (p4 + p2) * (p4 + p3), "eta2"),
    )


def compatibility_defect(p: ParamSet, alpha1, alpha2) -> Fraction:
    """alpha1 alpha2 S - alpha1 (p3+p4) - alpha2 (p1+p2); zero when compatible."""
    a1, a2 = as_scalar(alpha1), as_scalar(alpha2)
    p1, p2, p3, p4 = p.as_tuple()
    return a1 * a2 * p.total - a1 * (p3 + p4) - a2 * (p1 + p2)


def compatible_alpha2(p: ParamSet, alpha1) -> Fraction:
    """The unique alpha2 making (alpha1, alpha2) compatible with p."""
    a1 = as_scalar(alpha1)
    p1, p2, p3, p4 = p.as_tuple()
    return _div(a1 * (p3 + p4), a1 * p.total - (p1 + p2), "compatible alpha2")


def compatible_beta(p: ParamSet, alpha1, alpha2, strict: bool = True) -> tuple[Fraction, Fraction]:
    """beta1, beta2 equating the two closed forms of the eigenvalues.

    With ``strict`` (the default) the pair (alpha1, alpha2) must also satisfy
    the alpha relation, otherwise IncompatibleParams is raised: the betas
    alone do not make the polynomials eigenvectors of the kernel.
    """
    a1, a2 = as_scalar(alpha1), as_scalar(alpha2)
    wp = derive_weight(p)
    d = 1 - a1 * wp.eta1 - a2 * wp.eta2
    if d == 0:
        raise DegenerateParams("1 - alpha1*eta1 - alpha2*eta2 vanishes")
    if strict:
        defect = compatibility_defect(p, a1, a2)
        if defect:
            raise IncompatibleParams(
                f"alpha pair ({a1}, {a2}) violates the compatibility relation "
                f"(defect {defect}); alpha2 should be {compatible_alpha2(p, a1)}")
    return wp.eta1 * (1 - a1) / d, wp.eta2 * (1 - a2) / d


def compatible_chain(p: ParamSet, alpha1, N: int, alpha2=None, strict: bool = True) -> ChainParams:
    """ChainParams linked to p; alpha2 is derived when not given."""
    a1 = as_scalar(alpha1)
    a2 = compatible_alpha2(p, a1) if alpha2 is None else as_scalar(alpha2)
    b1, b2 = compatible_beta(p, a1, a2, strict=strict)
    probabilistic = (0 <= a1 <= 1 and 0 <= a2 <= 1 and b1 >= 0 and b2 >= 0 and b1 + b2 <= 1)
    return ChainParams(a1, a2, b1, b2, N, algebraic=not probabilistic)


# -- random points for identity testing --------------------------------------

def random_rational(rng: random.Random, lo: int = 1, hi: int = 1000) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def random_generic_params(rng: random.Random) -> ParamSet:
    """Positive random rationals with num/den in [1, 1000], rejecting degenerate draws."""
    while True:
        p = ParamSet(*(random_rational(rng) for _ in range(4)))
        if p.is_generic:
            return p


def random_unit_interval(rng: random.Random, hi: int = 1000) -> Fraction:
    """Random rational strictly inside (0, 1)."""
    den = rng.randint(2, hi)
    return Fraction(rng.randint(1, den - 1), den)


def random_compatible_point(rng: random.Random, N: int = 1) -> tuple[ParamSet, ChainParams]:
    """A generic p with a compatible chain, in algebraic mode.

    alpha1 is drawn from (0, 1); alpha2 and the betas follow from the
    compatibility relations and need not be probabilities.
    """
    while True:
        p = random_generic_params(rng)
        a1 = random_unit_interval(rng)
        try:
            cp = compatible_chain(p, a1, N)
        except DegenerateParams:
            continue
        return p, cp


def random_probabilistic_point(rng: random.Random, N: int = 1, bound: int = 20,
                               max_tries: int = 100_000) -> tuple[ParamSet, ChainParams]:
    """A compatible point where both the chain and the weight are honest probabilities.

    Positive p never qualify (alpha2 in (0,1) forces alpha1 > 1), so the
    search draws signed p with small numerators.
    """
    for _ in range(max_tries):
        vals = [Fraction(rng.randint(-bound, bound), rng.randint(1, 5)) for _ in range(4)]
        p = ParamSet(*vals)
        if not p.is_generic or not derive_weight(p).is_probability:
            continue
        a1 = random_unit_interval(rng, 100)
        try:
            cp = compatible_chain(p, a1, N)
        except DegenerateParams:
            continue
        if cp.is_interior:
            return p, cp
    raise RuntimeError("no probabilistic compatible point found")
