"""Cross-engine equivalence matrix over every (D, kstar) up to a small depth."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from .aggregate import class_aggregate, direct_distribution, path_sum_distribution
from .cardinality import mixed_key
from .core import DEFAULT_ORACLE_MAX_DEPTH, check_depth
from .lexgen import enumerate_all
from .massshift import Discrepancy, count_by_support, count_total, iter_states, iter_unique
from .oracle import dfs_enumerate, dfs_enumerate_memo, oracle_classes
from .weights import WeightTable


logger = logging.getLogger(__name__)

# Aggregation is checked against per-path sums, which is the slowest column.
AGGREGATE_MAX_DEPTH = 8


@dataclass
class CheckResult:
    name: str
    ok: bool = True
    failures: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.failures.append(msg)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "ok": bool(self.ok),
            "failures": list(self.failures),
            "warnings": list(self.warnings),
        }


def _terminals(D: int) -> range:
    return range(-D, D + 1)


def check_lexgen(max_depth: int) -> CheckResult:
    res = CheckResult("lexgen_vs_dfs")
    for D in range(max_depth + 1):
        total = 0
        for k in _terminals(D):
            fast = Counter(enumerate_all(D, k))
            ref = Counter(dfs_enumerate(D, k))
            total += sum(ref.values())
            if fast != ref:
                res.fail(f"D={D} kstar={k}: lexgen emitted {sum(fast.values())} paths, oracle {sum(ref.values())}")
        if total != 3 ** D:
            res.fail(f"D={D}: {total} paths over all terminals, expected {3 ** D}")
    return res


def check_memo(max_depth: int) -> CheckResult:
    res = CheckResult("memo_vs_dfs")
    for D in range(max_depth + 1):
        for k in _terminals(D):
            if list(dfs_enumerate_memo(D, k)) != list(dfs_enumerate(D, k)):
                res.fail(f"D={D} kstar={k}: memo stream differs")
    return res


def check_unique(max_depth: int) -> CheckResult:
    res = CheckResult("unique_vs_oracle")
    for D in range(max_depth + 1):
        for k in _terminals(D):
            got = [r.tuple for r in iter_unique(D, k)]
            ref = set(oracle_classes(D, k).entries)
            if len(got) != len(set(got)):
                res.fail(f"D={D} kstar={k}: {len(got) - len(set(got))} duplicate keys")
            if set(got) != ref:
                res.fail(f"D={D} kstar={k}: {len(set(got) - ref)} extra, {len(ref - set(got))} missing keys")
    return res


def check_stage_order(max_depth: int) -> CheckResult:
    """Each stage strictly decreasing in lex-mixed order, opened by its reseeded seed."""
    res = CheckResult("stage_order")
    for D in range(max_depth + 1):
        for k in range(0, D + 1):
            by_stage: Dict[int, list] = {}
            for r in iter_unique(D, k):
                by_stage.setdefault(r.stage, []).append(r.tuple)
            for state in iter_states(D, k):
                tuples = by_stage.get(state.M, [])
                if not tuples or tuples[0] != state.seed:
                    res.fail(f"D={D} kstar={k} M={state.M}: stage does not open with its seed {state.seed.encode()}")
                keys = [mixed_key(t) for t in tuples]
                if any(b >= a for a, b in zip(keys, keys[1:])):
                    res.fail(f"D={D} kstar={k} M={state.M}: stage is not strictly decreasing")
    return res


def check_counts(max_depth: int, ledger: List[Discrepancy]) -> CheckResult:
    res = CheckResult("table_count_vs_oracle")
    for D in range(max_depth + 1):
        for k in _terminals(D):
            report = count_total(D, k, engine="table")
            ledger.extend(report.discrepancies)
            ref = len(oracle_classes(D, k).entries)
            if report.total != ref:
                res.fail(f"D={D} kstar={k}: table {report.total}, oracle {ref}")
            support = count_by_support(D, k)
            if support != ref:
                res.fail(f"D={D} kstar={k}: support engine {support}, oracle {ref}")
    if ledger:
        res.warnings.append(f"closed form differs from the table schedule at {len(ledger)} (D, kstar, M, i) cells")
    return res


def check_aggregate(max_depth: int) -> CheckResult:
    res = CheckResult("aggregate_engines")
    weights = [WeightTable.affine(20, 2), WeightTable.affine("1/2", "-1/3")]
    for D in range(min(max_depth, AGGREGATE_MAX_DEPTH) + 1):
        for k in _terminals(D):
            for w in weights:
                dp = path_sum_distribution(D, k, w)
                ref = direct_distribution(D, k, w)
                cls = class_aggregate(oracle_classes(D, k), w)
                if dp.entries != ref.entries:
                    res.fail(f"D={D} kstar={k} w={w.to_dict()}: value DP differs from per-path sums")
                if cls.entries != ref.entries:
                    res.fail(f"D={D} kstar={k} w={w.to_dict()}: class aggregate differs from per-path sums")
    return res


def check_shape(max_depth: int) -> CheckResult:
    """Class counts are symmetric in kstar; path counts also peak at kstar=0.

    Class counts themselves are not unimodal (D=5 gives 18, 20, 18, 12, 5, 1).
    """
    res = CheckResult("reflection_unimodality")
    for D in range(max_depth + 1):
        counts = {k: count_total(D, k).total for k in _terminals(D)}
        tables = {k: oracle_classes(D, k) for k in _terminals(D)}
        paths = {k: t.total_paths for k, t in tables.items()}
        for k in range(1, D + 1):
            if counts[k] != counts[-k]:
                res.fail(f"D={D}: count({k})={counts[k]} but count({-k})={counts[-k]}")
            if paths[k] > paths[k - 1]:
                res.fail(f"D={D}: path count rises from kstar={k - 1} to kstar={k}")
            if tables[k].mirrored().entries != tables[-k].entries:
                res.fail(f"D={D} kstar={k}: mirrored classes differ from kstar={-k}")
        if counts[D] != 1 or counts[-D] != 1:
            res.fail(f"D={D}: expected one class at kstar=+-D")
    return res


CHECKS: List[Callable[[int], CheckResult]] = [
    check_lexgen,
    check_memo,
    check_unique,
    check_stage_order,
    check_aggregate,
    check_shape,
]


def selfcheck(max_depth: int = 8, *, oracle_max_depth: Optional[int] = None) -> Dict[str, Any]:
    cap = DEFAULT_ORACLE_MAX_DEPTH if oracle_max_depth is None else int(oracle_max_depth)
    D_max = check_depth(max_depth, cap)

    ledger: List[Discrepancy] = []
    results = [check_counts(D_max, ledger)]
    results.extend(fn(D_max) for fn in CHECKS)
    for r in results:
        logger.info("selfcheck %s: %s", r.name, "ok" if r.ok else f"{len(r.failures)} failures")

    return {
        "schema": "trinomial_paths.selfcheck.v1",
        "max_depth": D_max,
        "ok": all(r.ok for r in results),
        "checks": [r.to_dict() for r in results],
        "ledger": [d.to_dict() for d in ledger],
    }
