"""Value-by-count aggregation of weighted path sums.

Instead of averaging over every path, collect the distinct path-sum values p
with the number N_p of paths attaining each, then average sum(p*N_p)/sum(N_p).
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Union

from .cardinality import CardinalityTuple, weighted_sum
from .core import EmptyTerminal, check_depth, check_terminal
from .lattice import STEPS, feasible
from .oracle import ClassTable, dfs_enumerate
from .weights import Number, WeightTable, exact, format_value


logger = logging.getLogger(__name__)

DEFAULT_DISTINCT_VALUE_WARNING = 100_000


@dataclass
class ValueDistribution:
    entries: Dict[Number, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def mean(self) -> Number:
        if not self.entries:
            raise EmptyTerminal("empty distribution has no mean")
        num = sum((Fraction(p) * n for p, n in self.entries.items()), Fraction(0))
        return exact(num / self.total)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "trinomial_paths.distribution.v1",
            "paths": str(self.total),
            "distinct_values": len(self.entries),
            "entries": {format_value(p): n for p, n in sorted(self.entries.items())},
        }


def _normalized(counter: Mapping[Any, int]) -> ValueDistribution:
    return ValueDistribution(entries={exact(Fraction(p)): int(n) for p, n in counter.items() if n})


def path_sum_distribution(
    depth: int,
    kstar: int,
    w: WeightTable,
    *,
    warn_threshold: Optional[int] = DEFAULT_DISTINCT_VALUE_WARNING,
) -> ValueDistribution:
    """Exact value -> path count map for paths ending at (kstar, D).

    Forward pass over depth; each reachable level carries the histogram of
    partial sums of the paths arriving there.
    """
    D = check_depth(depth)
    k = check_terminal(D, kstar)

    layer: Dict[int, Counter] = {0: Counter({w.weight(0): 1})}
    for d in range(1, D + 1):
        nxt: Dict[int, Counter] = {}
        for level, sums in layer.items():
            for s in STEPS:
                to = level + s
                if not feasible(to, d, D, k):
                    continue
                wk = w.weight(to)
                cell = nxt.setdefault(to, Counter())
                for p, n in sums.items():
                    cell[p + wk] += n
        layer = nxt

    final = layer.get(k, Counter())
    dist = _normalized(final)
    if warn_threshold is not None and len(dist.entries) > int(warn_threshold):
        logger.warning(
            "value distribution for D=%s kstar=%s has %s distinct values (threshold %s)",
            D, k, len(dist.entries), warn_threshold,
        )
    return dist


def direct_distribution(depth: int, kstar: int, w: WeightTable) -> ValueDistribution:
    """Same map by summing every oracle path; small depths only."""
    counter: Counter = Counter()
    for path in dfs_enumerate(depth, kstar):
        counter[sum((Fraction(w.weight(x)) for x in path), Fraction(0))] += 1
    return _normalized(counter)


def lebesgue_average(depth: int, kstar: int, w: WeightTable) -> Number:
    D = check_depth(depth)
    if abs(int(kstar)) > D:
        raise EmptyTerminal(f"no path reaches level {int(kstar)} at depth {D}")
    return path_sum_distribution(D, kstar, w).mean()


def class_aggregate(
    classes: Union[ClassTable, Mapping[CardinalityTuple, int]],
    w: WeightTable,
) -> ValueDistribution:
    """Fold class multiplicities onto the weighted sum of each class key."""
    entries = classes.entries if isinstance(classes, ClassTable) else classes
    counter: Counter = Counter()
    for t, n in entries.items():
        counter[weighted_sum(t, w)] += int(n)
    return _normalized(counter)
