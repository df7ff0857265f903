"""Exhaustive reference enumeration.

Deliberately plain: every other engine is checked against these streams.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Tuple

from .cardinality import CardinalityTuple, histogram
from .core import DEFAULT_ORACLE_MAX_DEPTH, check_depth, check_terminal
from .lattice import STEPS, PositionSeq, feasible


logger = logging.getLogger(__name__)


@dataclass
class ClassTable:
    depth: int
    kstar: int
    entries: Dict[CardinalityTuple, int] = field(default_factory=dict)

    @property
    def total_paths(self) -> int:
        return sum(self.entries.values())

    def keys(self) -> List[CardinalityTuple]:
        return list(self.entries.keys())

    def mirrored(self) -> "ClassTable":
        return ClassTable(
            depth=self.depth,
            kstar=-self.kstar,
            entries={t.mirror(): n for t, n in self.entries.items()},
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "trinomial_paths.classes.v1",
            "D": self.depth,
            "kstar": self.kstar,
            "classes": len(self.entries),
            "paths": self.total_paths,
            "entries": {t.encode(): n for t, n in self.entries.items()},
        }


def _guard(depth: int, kstar: int, max_depth: int) -> Tuple[int, int]:
    d = check_depth(depth, max_depth)
    return d, check_terminal(d, kstar)


def dfs_enumerate(depth: int, kstar: int, *, max_depth: int = DEFAULT_ORACLE_MAX_DEPTH) -> Iterator[PositionSeq]:
    """All paths ending at (kstar, D), children visited in the order -1, 0, +1."""
    D, k = _guard(depth, kstar, max_depth)
    path: List[int] = [0]

    def dfs(d: int, pos: int) -> Iterator[PositionSeq]:
        if d == D:
            if pos == k:
                yield tuple(path)
            return
        for s in STEPS:
            nxt = pos + s
            if not feasible(nxt, d + 1, D, k):
                continue
            path.append(nxt)
            yield from dfs(d + 1, nxt)
            path.pop()

    if feasible(0, 0, D, k):
        yield from dfs(0, 0)


def dfs_enumerate_memo(depth: int, kstar: int, *, max_depth: int = DEFAULT_ORACLE_MAX_DEPTH) -> Iterator[PositionSeq]:
    """Same paths as dfs_enumerate; child feasibility is looked up in a memo table
    keyed by (level, remaining steps) instead of being recomputed per node."""
    D, k = _guard(depth, kstar, max_depth)

    @lru_cache(maxsize=None)
    def children(level: int, remaining: int) -> Tuple[int, ...]:
        return tuple(level + s for s in STEPS if abs(level + s - k) <= remaining - 1)

    path: List[int] = [0]

    def walk(level: int, remaining: int) -> Iterator[PositionSeq]:
        if remaining == 0:
            yield tuple(path)
            return
        for nxt in children(level, remaining):
            path.append(nxt)
            yield from walk(nxt, remaining - 1)
            path.pop()

    yield from walk(0, D)
    logger.debug("memo table for D=%s kstar=%s holds %s cells", D, k, children.cache_info().currsize)


def oracle_classes(depth: int, kstar: int, *, max_depth: int = DEFAULT_ORACLE_MAX_DEPTH) -> ClassTable:
    counter: Counter[CardinalityTuple] = Counter(
        histogram(p) for p in dfs_enumerate(depth, kstar, max_depth=max_depth)
    )
    return ClassTable(depth=int(depth), kstar=int(kstar), entries=dict(counter))
