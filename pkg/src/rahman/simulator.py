"""Monte Carlo Poker-dice chain, used to cross-check the exact kernel.

One step from (i1, i2):
  1. the i1 red dice are rerolled, k1 ~ Binomial(i1, alpha1) stay red;
  2. the i2 black dice are rerolled, k2 ~ Binomial(i2, alpha2) stay black;
  3. the N - k1 - k2 remaining dice are thrown together and land red/black
     with probabilities beta1/beta2.

Exact rationals are converted to doubles once per parameter set; all draws
are inverse-CDF lookups on a numpy PCG64 stream.
"""
from __future__ import annotations

import concurrent.futures
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from typing import NamedTuple, Sequence

import numpy as np
from scipy import stats

from .errors import InsufficientSamples, InvalidState
from .kernel import KernelMatrix, binomial_pmf, trinomial_pmf
from .params import ChainParams
from .statespace import StateSpace, enumerate_simplex

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"
_BLOCK = 1 << 16


class ChainState(NamedTuple):
    i1: int
    i2: int


class StepDetail(NamedTuple):
    k1: int
    k2: int
    j1: int
    j2: int


def _cdf(probs) -> list[float]:
    out = list(accumulate(float(p) for p in probs))
    out[-1] = 1.0  # guard against rounding leaving a gap at the top
    return out


class Sampler:
    """Inverse-CDF tables for one (N, chain parameters) pair."""

    def __init__(self, cp: ChainParams, N: int | None = None):
        if not cp.is_probability:
            raise ValueError("the simulator needs probability-valid chain parameters")
        self.cp = cp
        self.N = N = cp.N if N is None else N
        self.space = enumerate_simplex(N)
        self.bin1 = [_cdf(binomial_pmf(k, i, cp.alpha1) for k in range(i + 1)) for i in range(N + 1)]
        self.bin2 = [_cdf(binomial_pmf(k, i, cp.alpha2) for k in range(i + 1)) for i in range(N + 1)]
        self.tri_states = []
        self.tri = []
        for rest in range(N + 1):
            outcomes = [(x, y) for y in range(rest + 1) for x in range(rest + 1 - y)]
            self.tri_states.append(outcomes)
            self.tri.append(_cdf(trinomial_pmf(x, y, rest, cp.beta1, cp.beta2) for x, y in outcomes))

    def check(self, s) -> ChainState:
        i1, i2 = s
        if i1 < 0 or i2 < 0 or i1 + i2 > self.N:
            raise InvalidState(f"({i1},{i2}) is not a state for N={self.N}")
        return ChainState(i1, i2)

    def step_from_uniforms(self, i1: int, i2: int, u1: float, u2: float, u3: float) -> StepDetail:
        k1 = min(bisect_right(self.bin1[i1], u1), i1)
        k2 = min(bisect_right(self.bin2[i2], u2), i2)
        rest = self.N - k1 - k2
        cdf = self.tri[rest]
        x, y = self.tri_states[rest][min(bisect_right(cdf, u3), len(cdf) - 1)]
        return StepDetail(k1, k2, k1 + x, k2 + y)


def step_detailed(s, cp: ChainParams, rng: np.random.Generator, sampler: Sampler | None = None) -> StepDetail:
    sampler = sampler or Sampler(cp)
    i1, i2 = sampler.check(s)
    u1, u2, u3 = rng.random(3)
    return sampler.step_from_uniforms(i1, i2, u1, u2, u3)


def step(s, cp: ChainParams, rng: np.random.Generator, sampler: Sampler | None = None) -> ChainState:
    d = step_detailed(s, cp, rng, sampler)
    return ChainState(d.j1, d.j2)


@dataclass
class TransitionCounts:
    N: int
    steps: int
    space: StateSpace
    counts: np.ndarray  # counts[source, target]
    seeds: list[int] = field(default_factory=list)
    rng: str = RNG_ALGORITHM
    final_state: ChainState | None = None

    @property
    def visits(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def occupancy(self) -> np.ndarray:
        """Visits to each state as a target, i.e. states after each step."""
        return self.counts.sum(axis=0)

    def merged(self, other: "TransitionCounts") -> "TransitionCounts":
        if other.N != self.N:
            raise ValueError("cannot merge counts for different N")
        return TransitionCounts(self.N, self.steps + other.steps, self.space,
                                self.counts + other.counts, self.seeds + other.seeds, self.rng,
                                other.final_state)

    def to_csv(self) -> str:
        lines = ["source_x,source_y,target_x,target_y,count"]
        for i, (sx, sy) in enumerate(self.space.states):
            for j, (tx, ty) in enumerate(self.space.states):
                c = int(self.counts[i, j])
                if c:
                    lines.append(f"{sx},{sy},{tx},{ty},{c}")
        return "\n".join(lines) + "\n"


def run_chain(s0, steps: int, cp: ChainParams, seed: int) -> TransitionCounts:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    sampler = Sampler(cp)
    i1, i2 = sampler.check(s0)
    space = sampler.space
    index = space.index_of
    n = len(space)
    flat = [0] * (n * n)
    rng = np.random.Generator(np.random.PCG64(seed))
    done = 0
    src = index[i1, i2]
    while done < steps:
        block = min(_BLOCK, steps - done)
        us = rng.random(3 * block).tolist()
        for b in range(block):
            d = sampler.step_from_uniforms(i1, i2, us[3 * b], us[3 * b + 1], us[3 * b + 2])
            i1, i2 = d.j1, d.j2
            dst = index[i1, i2]
            flat[src * n + dst] += 1
            src = dst
        done += block
    counts = np.array(flat, dtype=np.int64).reshape(n, n)
    return TransitionCounts(sampler.N, steps, space, counts, [seed], final_state=ChainState(i1, i2))


def _run_one(args):
    return run_chain(*args)


def run_chains(s0, steps: int, cp: ChainParams, seeds: Sequence[int], workers: int = 1) -> TransitionCounts:
    """Independent chains, one per seed, merged in seed order."""
    jobs = [(s0, steps, cp, seed) for seed in seeds]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    total = results[0]
    for r in results[1:]:
        total = total.merged(r)
    return total


# -- goodness of fit ---------------------------------------------------------

def pearson_chi_square(observed: Sequence[int], probs: Sequence[float], min_expected: float = 5.0):
    """Pearson statistic and p-value, pooling cells with small expected counts.

    Cells whose expected count is below min_expected are merged, smallest
    first, until every bin meets the threshold.
    """
    obs = np.asarray(observed, dtype=float)
    total = obs.sum()
    exp = total * np.asarray(probs, dtype=float)
    order = np.argsort(exp)
    bins_obs, bins_exp = [], []
    acc_o = acc_e = 0.0
    for idx in order:
        acc_o += obs[idx]
        acc_e += exp[idx]
        if acc_e >= min_expected:
            bins_obs.append(acc_o)
            bins_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if bins_exp:
            bins_obs[-1] += acc_o
            bins_exp[-1] += acc_e
        else:
            bins_obs.append(acc_o)
            bins_exp.append(acc_e)
    bo, be = np.array(bins_obs), np.array(bins_exp)
    dof = len(be) - 1
    if dof < 1:
        return 0.0, 0, 1.0
    stat = float(((bo - be) ** 2 / be).sum())
    return stat, dof, float(stats.chi2.sf(stat, dof))


@dataclass
class RowChiSquare:
    state: tuple[int, int]
    visits: int
    statistic: float | None
    dof: int | None
    p_value: float | None
    passed: bool | None  # None: too few visits to test


@dataclass
class ChiSquareReport:
    significance: float
    min_visits: int
    rows: list[RowChiSquare]

    @property
    def tested(self) -> list[RowChiSquare]:
        return [r for r in self.rows if r.passed is not None]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.tested)

    @property
    def failures(self) -> list[RowChiSquare]:
        return [r for r in self.tested if not r.passed]


def chi_square_vs_kernel(tc: TransitionCounts, kern: KernelMatrix, significance: float = 0.001,
                         min_visits: int = 1000) -> ChiSquareReport:
    if tc.N != kern.N:
        raise ValueError("counts and kernel have different N")
    rows = []
    for i, s in enumerate(tc.space.states):
        observed = tc.counts[i]
        visits = int(observed.sum())
        if visits < min_visits:
            rows.append(RowChiSquare(s, visits, None, None, None, None))
            continue
        probs = [float(v) for v in kern.K.rows[i]]
        stat, dof, pv = pearson_chi_square(observed, probs)
        rows.append(RowChiSquare(s, visits, stat, dof, pv, pv >= significance))
    report = ChiSquareReport(significance, min_visits, rows)
    if not report.tested:
        raise InsufficientSamples(f"no source state reached {min_visits} visits")
    return report


def synthetic_counts(kern: KernelMatrix, visits_per_row: int, seed: int) -> TransitionCounts:
    """Transition counts drawn row by row from a multinomial on the kernel's rows."""
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []
    for row in kern.K.rows:
        probs = np.array([float(v) for v in row])
        rows.append(rng.multinomial(visits_per_row, probs / probs.sum()))
    return TransitionCounts(kern.N, visits_per_row * len(rows), kern.space, np.array(rows), [seed])


def chi_square_occupancy(tc: TransitionCounts, weights: Sequence) -> tuple[float, int, float]:
    """Pearson comparison of long-run state occupancy with a reference law.

    Successive states are correlated, so the p-value is only indicative.
    """
    return pearson_chi_square(tc.occupancy, [float(w) for w in weights])
