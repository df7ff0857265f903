from __future__ import annotations

import csv
import logging
import math
import time
import tracemalloc
from dataclasses import dataclass, field
from typing import IO, Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .core import DEFAULT_MAX_DEPTH, DEFAULT_ORACLE_MAX_DEPTH, EngineUnavailable, check_depth
from .lexgen import enumerate_all
from .massshift import count_total, iter_states, iter_unique, stage_count
from .oracle import dfs_enumerate, dfs_enumerate_memo


logger = logging.getLogger(__name__)

BENCH_ENGINES = ("dfs", "memo", "lexgen", "unique", "count")
KSTAR_POLICIES = ("worst", "sweep")


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


GAMMA = 2.0 ** (0.75 * binary_entropy(1.0 / 3.0))
RHO = 1.0 / GAMMA


def bound_shape(depth: int) -> float:
    """sqrt(D) * gamma^D."""
    return math.sqrt(depth) * GAMMA ** depth


@dataclass
class BenchRecord:
    depth: int
    kstar: int
    engine: str
    op_count: int
    wall_time: Optional[float] = None
    peak_memory_estimate: Optional[int] = None

    def to_dict(self, *, timing: bool = True) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "D": self.depth,
            "kstar": self.kstar,
            "engine": self.engine,
            "op_count": str(self.op_count),
        }
        if timing:
            out["wall_time"] = self.wall_time
            out["peak_memory_estimate"] = self.peak_memory_estimate
        return out


def _counter(engine: str, max_depth: int, oracle_max_depth: int) -> Tuple[Callable[[int, int], int], int]:
    if engine == "dfs":
        return (lambda D, k: sum(1 for _ in dfs_enumerate(D, k, max_depth=oracle_max_depth))), oracle_max_depth
    if engine == "memo":
        return (lambda D, k: sum(1 for _ in dfs_enumerate_memo(D, k, max_depth=oracle_max_depth))), oracle_max_depth
    if engine == "lexgen":
        return (lambda D, k: sum(1 for _ in enumerate_all(D, k, max_depth=max_depth))), max_depth
    if engine == "unique":
        return (lambda D, k: sum(1 for _ in iter_unique(D, k, max_depth=max_depth))), max_depth
    if engine == "count":
        return (lambda D, k: count_total(D, k).total), -1
    raise ValueError(f"unknown bench engine {engine!r}; expected one of {BENCH_ENGINES}")


def kstar_values(depth: int, policy: str) -> List[int]:
    if policy == "worst":
        return [0]
    if policy == "sweep":
        return list(range(-depth, depth + 1))
    raise ValueError(f"unknown kstar policy {policy!r}; expected one of {KSTAR_POLICIES}")


def run_bench(
    depths: Iterable[int],
    *,
    kstar_policy: str = "worst",
    engines: Sequence[str] = ("count",),
    max_depth: int = DEFAULT_MAX_DEPTH,
    oracle_max_depth: int = DEFAULT_ORACLE_MAX_DEPTH,
    trace_memory: bool = False,
) -> List[BenchRecord]:
    """One record per (engine, D, kstar); op_count is the number of items produced."""
    depth_list = [check_depth(d) for d in depths]
    records: List[BenchRecord] = []
    for engine in engines:
        fn, cap = _counter(engine, max_depth, oracle_max_depth)
        too_deep = [d for d in depth_list if cap >= 0 and d > cap]
        if too_deep:
            raise EngineUnavailable(
                f"engine {engine!r} enumerates and is capped at D={cap}; use the count engine for {too_deep}"
            )
        for D in depth_list:
            for k in kstar_values(D, kstar_policy):
                if trace_memory:
                    tracemalloc.start()
                t0 = time.perf_counter()
                ops = fn(D, k)
                dt = time.perf_counter() - t0
                peak: Optional[int] = None
                if trace_memory:
                    peak = tracemalloc.get_traced_memory()[1]
                    tracemalloc.stop()
                rec = BenchRecord(depth=D, kstar=k, engine=engine, op_count=ops, wall_time=dt, peak_memory_estimate=peak)
                records.append(rec)
                logger.info("bench %s D=%s kstar=%s ops=%s in %.4fs", engine, D, k, ops, dt)
    return records


def totals_by_depth(records: Iterable[BenchRecord], engine: str) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for r in records:
        if r.engine == engine:
            out[r.depth] = out.get(r.depth, 0) + r.op_count
    return out


@dataclass
class CostModel:
    fitted_C: float
    samples: List[Tuple[int, int]] = field(default_factory=list)
    fit_depths: Tuple[int, int] = (4, 12)
    holdout: List[Dict[str, Any]] = field(default_factory=list)
    speedup: List[Dict[str, Any]] = field(default_factory=list)
    gamma: float = GAMMA
    rho: float = RHO

    @property
    def holdout_ok(self) -> bool:
        return all(h["within_bound"] for h in self.holdout)

    @property
    def speedup_increasing(self) -> bool:
        vals = [s["speedup"] for s in self.speedup]
        return all(b > a for a, b in zip(vals, vals[1:]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "trinomial_paths.cost_model.v1",
            "gamma": self.gamma,
            "rho": self.rho,
            "fitted_C": self.fitted_C,
            "fit_depths": list(self.fit_depths),
            "samples": [[D, str(n)] for D, n in self.samples],
            "holdout": self.holdout,
            "holdout_ok": self.holdout_ok,
            "speedup": self.speedup,
            "speedup_increasing": self.speedup_increasing,
        }


def fit_cost_model(
    totals: Dict[int, int],
    *,
    fit_depths: Tuple[int, int] = (4, 12),
    holdout_depths: Tuple[int, int] = (13, 16),
) -> CostModel:
    """Fit C = max count/(sqrt(D)*gamma^D) on the fit range, then check the held-out depths.

    Held-out violations are reported and logged; the class count outgrows this
    shape eventually, so they are not treated as errors.
    """
    lo, hi = fit_depths
    fit = [(D, n) for D, n in sorted(totals.items()) if lo <= D <= hi and D > 0]
    if not fit:
        raise ValueError(f"no samples in fit range {list(fit_depths)}")
    C = max(n / bound_shape(D) for D, n in fit)

    model = CostModel(fitted_C=C, samples=sorted(totals.items()), fit_depths=(lo, hi))
    hlo, hhi = holdout_depths
    for D, n in sorted(totals.items()):
        if hlo <= D <= hhi:
            bound = C * bound_shape(D)
            within = n <= bound
            model.holdout.append({"D": D, "measured": str(n), "bound": bound, "ratio": n / bound, "within_bound": within})
            if not within:
                logger.warning("held-out D=%s: measured %s exceeds fitted bound %.1f", D, n, bound)
    for D, n in sorted(totals.items()):
        if D <= 0:
            continue
        model.speedup.append(
            {
                "D": D,
                "speedup": 3 ** D / n,
                "predicted": (3.0 / GAMMA) ** D / (C * math.sqrt(D)),
                "naive_ops": str(D * 3 ** D),
            }
        )
    return model


def decay_report(depth: int, fitted_C: float) -> List[Dict[str, Any]]:
    """Per-stage class counts at kstar=0 against the bound at the shrunken depth D-M."""
    D = check_depth(depth)
    rows = []
    for state in iter_states(D, 0):
        D_M = D - state.M
        n = stage_count(state)
        rows.append(
            {
                "M": state.M,
                "count": str(n),
                "bound": fitted_C * bound_shape(D_M) if D_M > 0 else fitted_C,
                "rho_pow": RHO ** state.M,
            }
        )
    return rows


CSV_FIELDS = ["D", "kstar", "engine", "op_count", "wall_time", "peak_memory_estimate"]


def write_bench_csv(records: Iterable[BenchRecord], fh: IO[str], *, timing: bool = True) -> None:
    fields = CSV_FIELDS if timing else CSV_FIELDS[:4]
    writer = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = r.to_dict(timing=timing)
        writer.writerow({k: ("" if row.get(k) is None else row[k]) for k in fields})
