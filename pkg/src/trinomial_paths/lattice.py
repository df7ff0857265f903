"""Recombining trinomial lattice: vertices, steps, paths and their algebra.

A path of depth D is stored as its position sequence: the D+1 levels it visits,
starting at the root level 0. Walks are the matching step sequences over
{-1, 0, +1}; the two views are in bijection through prefix sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Any, Dict, Iterable, Sequence, Tuple

from .core import InvalidPath, check_terminal


STEPS: Tuple[int, int, int] = (-1, 0, 1)

PositionSeq = Tuple[int, ...]
Walk = Tuple[int, ...]


@dataclass(frozen=True)
class Vertex:
    k: int
    d: int

    def valid_for(self, depth: int) -> bool:
        return abs(self.k) <= self.d <= depth


@dataclass(frozen=True)
class StepCounts:
    j_plus: int
    j_minus: int
    j_zero: int

    @property
    def depth(self) -> int:
        return self.j_plus + self.j_minus + self.j_zero

    @property
    def terminal(self) -> int:
        return self.j_plus - self.j_minus

    def satisfies(self, depth: int, kstar: int) -> bool:
        """Step-count algebra for a path of depth D ending at kstar."""
        return (
            self.depth == depth
            and self.terminal == kstar
            and (self.j_zero - (depth + kstar)) % 2 == 0
            and self.j_plus <= (depth + kstar) // 2
            and self.j_minus <= (depth - kstar) // 2
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"j_plus": self.j_plus, "j_minus": self.j_minus, "j_zero": self.j_zero}


def walk_to_path(steps: Iterable[int]) -> PositionSeq:
    return (0, *accumulate(int(s) for s in steps))


def path_to_walk(seq: Sequence[int]) -> Walk:
    if not seq or int(seq[0]) != 0:
        raise InvalidPath("a path must start at level 0")
    out = []
    for d in range(1, len(seq)):
        step = int(seq[d]) - int(seq[d - 1])
        if step not in STEPS:
            raise InvalidPath(f"increment {step} at depth {d} is not in {{-1, 0, +1}}")
        out.append(step)
    return tuple(out)


def validate_path(seq: Sequence[int]) -> bool:
    """True iff seq is a root-anchored trinomial path. Never raises."""
    try:
        if len(seq) == 0 or int(seq[0]) != 0:
            return False
        for d in range(1, len(seq)):
            if abs(int(seq[d]) - int(seq[d - 1])) > 1 or abs(int(seq[d])) > d:
                return False
    except (TypeError, ValueError):
        return False
    return True


def require_path(seq: Sequence[int]) -> PositionSeq:
    if not validate_path(seq):
        raise InvalidPath(f"not a valid trinomial path: {tuple(seq)!r}")
    return tuple(int(x) for x in seq)


def position_bounds(depth: int, kstar: int) -> Tuple[int, int]:
    """Lowest and highest level a path of depth D ending at kstar can visit.

    Parity split: when D-kstar is even the bounds are (kstar-D)/2 and (D+kstar)/2,
    otherwise the odd leftover step is spent as a stay.
    """
    check_terminal(depth, kstar)
    if (depth - kstar) % 2 == 0:
        return (kstar - depth) // 2, (depth + kstar) // 2
    return (kstar - depth + 1) // 2, (depth + kstar - 1) // 2


def peak_level(depth: int, kstar: int) -> int:
    return position_bounds(depth, kstar)[1]


def step_counts(seq: Sequence[int]) -> StepCounts:
    walk = path_to_walk(seq)
    return StepCounts(
        j_plus=sum(1 for s in walk if s == 1),
        j_minus=sum(1 for s in walk if s == -1),
        j_zero=sum(1 for s in walk if s == 0),
    )


def reflect(seq: Sequence[int]) -> PositionSeq:
    return tuple(-int(x) for x in seq)


def vertices(seq: Sequence[int]) -> Tuple[Vertex, ...]:
    return tuple(Vertex(k=int(k), d=d) for d, k in enumerate(seq))


def feasible(level: int, depth_now: int, depth: int, kstar: int) -> bool:
    """Whether (kstar, D) is still reachable from (level, depth_now)."""
    return abs(int(level) - int(kstar)) <= int(depth) - int(depth_now)
