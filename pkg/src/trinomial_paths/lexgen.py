"""Recursion-free generation of every path ending at (kstar, D).

Nonnegative representatives are walked in decreasing lexicographic order from
the maximal seed; each representative is expanded by flipping subsets of its
unlocked excursions below zero. kstar < 0 is served by reflection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .core import DEFAULT_MAX_DEPTH, NegativeInput, OutOfRange, check_depth, check_terminal
from .lattice import PositionSeq, feasible, position_bounds, reflect, require_path


@dataclass(frozen=True)
class Excursion:
    l: int
    r: int

    def support(self) -> range:
        return range(self.l + 1, self.r)


@dataclass(frozen=True)
class ExcursionDecomposition:
    excursions: Tuple[Excursion, ...]
    lock_flag: int

    @property
    def flippable(self) -> Tuple[Excursion, ...]:
        return self.excursions[: len(self.excursions) - self.lock_flag]

    @property
    def family_size(self) -> int:
        return 2 ** len(self.flippable)


def max_seed_path(depth: int, kstar: int) -> PositionSeq:
    """Lexicographically largest nonnegative path: climb, one stay iff D-kstar is odd, descend."""
    if kstar < 0:
        raise OutOfRange(f"the maximal seed is defined for kstar >= 0, got {kstar}")
    D = check_depth(depth)
    check_terminal(D, kstar)
    top = position_bounds(D, kstar)[1]
    seq = list(range(0, top + 1))
    if (D - kstar) % 2:
        seq.append(top)
    seq.extend(range(top - 1, kstar - 1, -1))
    return tuple(seq)


def _nonnegative(seq: Sequence[int]) -> PositionSeq:
    path = require_path(seq)
    if any(x < 0 for x in path):
        raise NegativeInput("expected a path with no negative levels")
    return path


def next_path(current: Sequence[int]) -> Optional[PositionSeq]:
    """Immediate lexicographic predecessor among nonnegative paths with the same end.

    Tick-down: the rightmost position that can drop by one and still finish at
    kstar. Sweep-across: refill the suffix greedily with the highest reachable
    levels, which is the largest completion.
    """
    path = list(_nonnegative(current))
    D = len(path) - 1
    kstar = path[-1]

    j = D
    while j >= 1:
        v = path[j] - 1
        if v >= 0 and abs(v - path[j - 1]) <= 1 and feasible(v, j, D, kstar):
            break
        j -= 1
    if j < 1:
        return None

    path[j] -= 1
    for d in range(j + 1, D + 1):
        prev = path[d - 1]
        for cand in (prev + 1, prev, prev - 1):
            if cand >= 0 and feasible(cand, d, D, kstar):
                path[d] = cand
                break
    return tuple(path)


def decompose_excursions(seq: Sequence[int]) -> ExcursionDecomposition:
    path = _nonnegative(seq)
    D = len(path) - 1
    out: List[Excursion] = []
    start: Optional[int] = None
    for d in range(1, D + 1):
        if path[d] > 0 and path[d - 1] == 0:
            start = d - 1
        elif path[d] == 0 and start is not None:
            out.append(Excursion(l=start, r=d))
            start = None
    lock = 0
    if start is not None:
        out.append(Excursion(l=start, r=D + 1))
        lock = 1
    return ExcursionDecomposition(excursions=tuple(out), lock_flag=lock)


def _subsets(n: int) -> Iterator[Tuple[int, ...]]:
    """Index subsets of range(n) in lexicographic order, empty set first."""
    cur: List[int] = []
    yield ()
    while True:
        if cur and cur[-1] < n - 1:
            cur.append(cur[-1] + 1)
        elif not cur and n > 0:
            cur.append(0)
        else:
            while cur and cur[-1] == n - 1:
                cur.pop()
            if not cur:
                return
            cur[-1] += 1
        yield tuple(cur)


def flip_family(seq: Sequence[int]) -> Iterator[PositionSeq]:
    path = _nonnegative(seq)
    dec = decompose_excursions(path)
    flippable = dec.flippable
    for subset in _subsets(len(flippable)):
        out = list(path)
        for idx in subset:
            for d in flippable[idx].support():
                out[d] = -out[d]
        yield tuple(out)


def nonnegative_paths(depth: int, kstar: int) -> Iterator[PositionSeq]:
    cur: Optional[PositionSeq] = max_seed_path(depth, kstar)
    while cur is not None:
        yield cur
        cur = next_path(cur)


def enumerate_all(depth: int, kstar: int, *, max_depth: int = DEFAULT_MAX_DEPTH) -> Iterator[PositionSeq]:
    D = check_depth(depth, max_depth)
    k = check_terminal(D, kstar)
    if k < 0:
        for p in enumerate_all(D, -k, max_depth=max_depth):
            yield reflect(p)
        return
    for rep in nonnegative_paths(D, k):
        yield from flip_family(rep)
