"""The discrete simplex {(x, y): x, y >= 0, x + y <= N} and its lattice adjacency.

States are ordered by y, and by x within a fixed y:
(0,0), (1,0), ..., (N,0), (0,1), ..., (N-1,1), ..., (0,N).
The same ordering indexes both physical states (x, y) and frequency
states (m, n).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidSize, OutOfSimplex

State = tuple[int, int]


@dataclass(frozen=True)
class StateSpace:
    N: int
    states: tuple[State, ...]
    index_of: dict[State, int] = field(compare=False, repr=False)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.index_of

    def index(self, s) -> int:
        try:
            return self.index_of[tuple(s)]
        except KeyError:
            raise OutOfSimplex(f"{s} is not in the simplex of size {self.N}") from None

    def neighbours(self, s: State) -> list[State]:
        x, y = s
        cand = [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
        return [c for c in cand if c in self.index_of]

    def to_json(self) -> list[list[int]]:
        return [[x, y] for x, y in self.states]


def enumerate_simplex(N: int) -> StateSpace:
    if int(N) != N or N < 1:
        raise InvalidSize(f"simplex size must be a positive integer, got {N!r}")
    N = int(N)
    states = tuple((x, y) for y in range(N + 1) for x in range(N + 1 - y))
    return StateSpace(N, states, {s: i for i, s in enumerate(states)})


@dataclass(frozen=True)
class StencilPattern:
    """Allowed (row, col) index pairs of a sparse operator on a StateSpace."""
    space: StateSpace
    allowed: frozenset[tuple[int, int]]
    includes_diagonal: bool

    def __contains__(self, pos) -> bool:
        return tuple(pos) in self.allowed

    def __len__(self):
        return len(self.allowed)

    def sorted_positions(self) -> list[tuple[int, int]]:
        return sorted(self.allowed)

    def row_support(self, i: int) -> list[int]:
        return sorted(j for (r, j) in self.allowed if r == i)


def adjacency(space: StateSpace, with_diagonal: bool = False) -> StencilPattern:
    """Pairs of states one horizontal or vertical lattice step apart."""
    allowed = set()
    for i, s in enumerate(space.states):
        for nb in space.neighbours(s):
            allowed.add((i, space.index_of[nb]))
        if with_diagonal:
            allowed.add((i, i))
    return StencilPattern(space, frozenset(allowed), with_diagonal)


def diagonal_pattern(space: StateSpace) -> StencilPattern:
    return StencilPattern(space, frozenset((i, i) for i in range(len(space))), True)


def full_pattern(space: StateSpace) -> StencilPattern:
    n = len(space)
    return StencilPattern(space, frozenset((i, j) for i in range(n) for j in range(n)), True)
