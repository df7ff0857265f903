"""Unique path classes by mass shifting, and their exact counts.

Stage M admits visits down to level -M. Inside a stage every class key is the
minimal occupation profile of its support [-M, b] plus surplus mass spread over
the support as a weak composition. The stage is walked block by block (one
block per in-stage mass index m), blocks are merged into decreasing
lex-mixed order, and the next stage is reseeded from the current stage seed.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field, replace
from math import comb
from typing import Any, Dict, Iterator, List, Optional, Tuple

from .cardinality import (
    CardinalityTuple,
    minimal_counts,
    mixed_key,
    seed_tuple,
    validate_tuple,
)
from .core import DEFAULT_MAX_DEPTH, DEFAULT_ORACLE_MAX_DEPTH, check_depth, check_terminal
from .lattice import position_bounds
from .oracle import oracle_classes


logger = logging.getLogger(__name__)

ENGINES = ("table", "closed", "support")


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n except C(n, n) = 1 for every n.

    The closed-form stage term hits C(-1, -1) when a single slot holds all the mass.
    """
    if k == n:
        return 1
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def weak_composition_count(i: int, slots: int) -> int:
    if i < 0 or slots < 1:
        raise ValueError(f"need i >= 0 and slots >= 1, got i={i} slots={slots}")
    return comb(i + slots - 1, slots - 1)


def enumerate_weak_compositions(i: int, slots: int, *, ascending: int = 0) -> Iterator[Tuple[int, ...]]:
    """Length-`slots` nonnegative tuples summing to i, each once.

    Default order is the rightmost-mass-first sweep: decreasing when read from
    the last slot to the first. The first `ascending` slots are negative levels
    under the lex-mixed order: they are compared first, from slot ascending-1
    down to slot 0, smallest value first.
    """
    if i < 0 or slots < 0:
        return
    q = max(0, min(int(ascending), slots))
    order = list(range(q - 1, -1, -1)) + list(range(slots - 1, q - 1, -1))
    out = [0] * slots

    def fill(pos: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        if pos == len(order) - 1:
            out[order[pos]] = remaining
            yield tuple(out)
            out[order[pos]] = 0
            return
        slot = order[pos]
        values = range(0, remaining + 1) if slot < q else range(remaining, -1, -1)
        for v in values:
            out[slot] = v
            yield from fill(pos + 1, remaining - v)
        out[slot] = 0

    if slots == 0:
        if i == 0:
            yield ()
        return
    yield from fill(0, int(i))


@dataclass(frozen=True)
class StageState:
    """Cursor of the mass-shifting enumeration at stage M (kstar >= 0)."""

    depth: int
    kstar: int
    M: int
    seed: CardinalityTuple
    beta: int
    right_edge: int
    m: int = 0

    @property
    def k_minus(self) -> int:
        return position_bounds(self.depth, self.kstar)[0]

    @property
    def k_plus(self) -> int:
        return position_bounds(self.depth, self.kstar)[1]

    @property
    def ell(self) -> int:
        return self.k_plus + 1

    @property
    def window(self) -> Tuple[int, int]:
        return -self.M, self.k_plus - self.M

    @property
    def kstar_geo(self) -> int:
        return self.kstar + self.M

    @property
    def k_eff(self) -> int:
        return self.kstar + 2 * self.M

    @property
    def m_max(self) -> int:
        return self.depth - self.k_eff

    @property
    def T(self) -> int:
        return min(self.k_plus - self.kstar, -self.k_minus)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "M": self.M,
            "m": self.m,
            "window": list(self.window),
            "seed": self.seed.to_dict(),
            "kstar_geo": self.kstar_geo,
            "k_eff": self.k_eff,
            "m_max": self.m_max,
            "beta": self.beta,
            "ell": self.ell,
        }


def initial_state(depth: int, kstar: int) -> StageState:
    seed, beta = seed_tuple(depth, kstar)
    k_plus = position_bounds(depth, kstar)[1]
    return StageState(
        depth=int(depth),
        kstar=int(kstar),
        M=0,
        seed=seed,
        beta=beta,
        right_edge=seed.at(k_plus),
    )


def shift_reseed(state: StageState) -> Optional[StageState]:
    """Seed of stage M+1 from the seed of stage M; None once M reaches T.

    The right-edge count is consumed (1 or 2 units), the window moves one level
    left with a fresh unit on its new left edge, and the old left-edge slot gains
    a unit. When one unit was consumed, the rightmost translated slot holding at
    least 2 gives one back.
    """
    if state.M >= state.T:
        return None

    kl, kr = state.window
    c = {k: state.seed.at(k) for k in range(state.seed.k_minus, state.seed.k_plus + 1)}
    consumed = c[kr]
    if consumed == 0:
        return replace(state, M=state.M + 1, m=0)
    if consumed == 3 and state.kstar == 0:
        consumed = 2
    c[kr] -= consumed

    L = kr - kl + 1
    v = [1] + [c[kl + j - 1] for j in range(1, L)]
    if consumed == 1:
        for j in range(L - 1, 0, -1):
            if v[j] >= 2:
                v[j] -= 1
                break
    if L > 1:
        v[1] += 1
    for j in range(L):
        c[kl - 1 + j] = v[j]

    seed = CardinalityTuple(
        k_minus=state.seed.k_minus,
        counts=tuple(c[k] for k in range(state.seed.k_minus, state.seed.k_plus + 1)),
    )
    nxt = replace(state, M=state.M + 1, m=0, seed=seed)
    logger.debug("stage %s seed %s window %s", nxt.M, seed.encode(), nxt.window)
    return nxt


def iter_states(depth: int, kstar: int) -> Iterator[StageState]:
    state: Optional[StageState] = initial_state(depth, kstar)
    while state is not None:
        yield state
        state = shift_reseed(state)


@dataclass(frozen=True)
class Block:
    """One in-stage block: base tuple plus every spread of `mass` over [lo, hi]."""

    m: int
    base: CardinalityTuple
    lo: int
    hi: int
    mass: int

    @property
    def slots(self) -> int:
        return max(0, self.hi - self.lo + 1)

    def size(self) -> int:
        if self.slots == 0:
            return 1 if self.mass == 0 else 0
        return weak_composition_count(self.mass, self.slots)

    def tuples(self) -> Iterator[CardinalityTuple]:
        negatives = max(0, min(self.hi, -1) - self.lo + 1)
        for x in enumerate_weak_compositions(self.mass, self.slots, ascending=negatives):
            counts = list(self.base.counts)
            for j, extra in enumerate(x):
                counts[self.lo + j - self.base.k_minus] += extra
            yield CardinalityTuple(k_minus=self.base.k_minus, counts=tuple(counts))


def _profile(state: StageState, b: int, bump_top: bool) -> CardinalityTuple:
    k_minus, k_plus = state.k_minus, state.k_plus
    counts = [0] * (k_plus - k_minus + 1)
    a = -state.M
    for k, c in zip(range(a, b + 1), minimal_counts(a, b, state.kstar)):
        counts[k - k_minus] = c
    if bump_top:
        counts[b - k_minus] += 1
    return CardinalityTuple(k_minus=k_minus, counts=tuple(counts))


def stage_blocks(state: StageState) -> List[Block]:
    """Blocks of a stage in schedule order m = 0..m_max.

    Peak b = k_plus - M - t carries surplus p + 2t (p is the parity of D-kstar).
    Its classes split by the top count: above the minimum ("heavy", m = 2t+p-1)
    or at the minimum ("light", m = 2t+p).
    """
    p = (state.depth - state.kstar) % 2
    a = -state.M
    out: List[Block] = []
    for m in range(0, state.m_max + 1):
        if (m - p) % 2 == 0:
            t = (m - p) // 2
            b = state.k_plus - state.M - t
            out.append(Block(m=m, base=_profile(state, b, False), lo=a, hi=b - 1, mass=p + 2 * t))
        else:
            t = (m - p + 1) // 2
            b = state.k_plus - state.M - t
            out.append(Block(m=m, base=_profile(state, b, True), lo=a, hi=b, mass=p + 2 * t - 1))
    return out


@dataclass
class EnumerationStats:
    emitted: int = 0
    rejected: int = 0
    per_stage: Dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class UniqueRecord:
    tuple: CardinalityTuple
    stage: int
    m: int

    def to_dict(self) -> Dict[str, Any]:
        return {**self.tuple.to_dict(), "stage": self.stage, "m": self.m}


def _stage_records(state: StageState) -> Iterator[UniqueRecord]:
    def labelled(block: Block) -> Iterator[UniqueRecord]:
        for t in block.tuples():
            yield UniqueRecord(tuple=t, stage=state.M, m=block.m)

    streams = [labelled(b) for b in stage_blocks(state)]
    yield from heapq.merge(*streams, key=lambda r: mixed_key(r.tuple), reverse=True)


def iter_unique(
    depth: int,
    kstar: int,
    *,
    max_depth: int = DEFAULT_MAX_DEPTH,
    stats: Optional[EnumerationStats] = None,
) -> Iterator[UniqueRecord]:
    """Every class key for (D, kstar) once, stage by stage, with stage/m labels."""
    D = check_depth(depth, max_depth)
    k = check_terminal(D, kstar)
    if k < 0:
        for rec in iter_unique(D, -k, max_depth=max_depth, stats=stats):
            yield UniqueRecord(tuple=rec.tuple.mirror(), stage=rec.stage, m=rec.m)
        return

    for state in iter_states(D, k):
        logger.debug("enter stage %s window %s seed %s", state.M, state.window, state.seed.encode())
        for rec in _stage_records(state):
            if not validate_tuple(rec.tuple, D, k):
                if stats is not None:
                    stats.rejected += 1
                logger.warning("stage %s produced an unrealizable tuple %s", state.M, rec.tuple.encode())
                continue
            if stats is not None:
                stats.emitted += 1
                stats.per_stage[state.M] = stats.per_stage.get(state.M, 0) + 1
            yield rec


def enumerate_unique(depth: int, kstar: int, *, max_depth: int = DEFAULT_MAX_DEPTH) -> Iterator[CardinalityTuple]:
    for rec in iter_unique(depth, kstar, max_depth=max_depth):
        yield rec.tuple


# Counting


def _table_slots(i: int, ell: int, right_edge: int) -> int:
    if right_edge == 1:
        return ell if i == 0 else ell - (i + 2) // 2  # ceil((i+1)/2)
    return ell - (i + 1) // 2


def _table_term(i: int, slots: int) -> int:
    if slots < 1:
        return 0
    return weak_composition_count(i, slots)


def table_schedule_count(ell: int, horizon: int, right_edge: int) -> int:
    """One stage of the parity-scheduled composition count, i = 0..horizon."""
    return sum(_table_term(i, _table_slots(i, ell, right_edge)) for i in range(0, horizon + 1))


def closed_form_term(i: int, ell: int, beta: int) -> int:
    c = (i + 2) // 2  # ceil((i+1)/2)
    return binom(i + ell - c - 1, ell - c - 1) + (beta - 1) * binom(i + ell - c - 1, ell - c)


@dataclass(frozen=True)
class Discrepancy:
    depth: int
    kstar: int
    M: int
    i: int
    table: int
    closed: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "D": self.depth,
            "kstar": self.kstar,
            "M": self.M,
            "i": self.i,
            "table": str(self.table),
            "closed": str(self.closed),
        }


def stage_terms(state: StageState) -> List[Tuple[int, int, int]]:
    """(i, table term, closed-form term) for i = 0..m_max."""
    rows = []
    for i in range(0, state.m_max + 1):
        rows.append(
            (
                i,
                _table_term(i, _table_slots(i, state.ell, state.right_edge)),
                closed_form_term(i, state.ell, state.beta),
            )
        )
    return rows


def stage_count(state: StageState, *, engine: str = "table") -> int:
    if engine not in ("table", "closed"):
        raise ValueError(f"unknown stage engine {engine!r}")
    col = 1 if engine == "table" else 2
    return sum(row[col] for row in stage_terms(state))


def count_by_support(depth: int, kstar: int) -> int:
    """Class count summed over support intervals [a, b] of the class keys."""
    D = check_depth(depth)
    k = abs(check_terminal(D, kstar))
    k_minus, k_plus = position_bounds(D, k)
    total = 0
    for a in range(k_minus, 1):
        for b in range(k, k_plus + 1):
            L = b - a + 1
            surplus = D + 1 - (1 + k + 2 * (b - k) + 2 * (-a))
            if surplus >= 0:
                total += comb(surplus + L - 1, L - 1)
    return total


@dataclass
class CountReport:
    depth: int
    kstar: int
    engine: str
    per_stage: List[Tuple[int, int]] = field(default_factory=list)
    discrepancies: List[Discrepancy] = field(default_factory=list)
    oracle_checked: bool = False
    oracle_total: Optional[int] = None

    @property
    def total(self) -> int:
        return sum(c for _m, c in self.per_stage)

    @property
    def oracle_ok(self) -> Optional[bool]:
        if not self.oracle_checked:
            return None
        return self.oracle_total == self.total

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "D": self.depth,
            "kstar": self.kstar,
            "per_stage": [[M, str(c)] for M, c in self.per_stage],
            "total": str(self.total),
            "engine": self.engine,
            "discrepancies": [d.to_dict() for d in self.discrepancies],
        }
        if self.oracle_checked:
            out["oracle_checked"] = True
            out["oracle_total"] = str(self.oracle_total)
            out["oracle_ok"] = self.oracle_ok
        return out


def count_total(
    depth: int,
    kstar: int,
    *,
    engine: str = "table",
    oracle_check: bool = False,
    oracle_max_depth: Optional[int] = None,
) -> CountReport:
    """Per-stage and total class counts; exact integers at any depth."""
    D = check_depth(depth)
    k = check_terminal(D, kstar)
    if engine not in ENGINES:
        raise ValueError(f"unknown count engine {engine!r}; expected one of {ENGINES}")

    report = CountReport(depth=D, kstar=k, engine=engine)
    if engine == "support":
        report.per_stage = [(0, count_by_support(D, k))]
    else:
        for state in iter_states(D, abs(k)):
            terms = stage_terms(state)
            col = 1 if engine == "table" else 2
            report.per_stage.append((state.M, sum(row[col] for row in terms)))
            for i, table, closed in terms:
                if table != closed:
                    report.discrepancies.append(
                        Discrepancy(depth=D, kstar=k, M=state.M, i=i, table=table, closed=closed)
                    )
                    logger.debug("closed form differs at D=%s kstar=%s M=%s i=%s: table=%s closed=%s", D, k, state.M, i, table, closed)

    if oracle_check:
        cap = DEFAULT_ORACLE_MAX_DEPTH if oracle_max_depth is None else int(oracle_max_depth)
        report.oracle_total = len(oracle_classes(D, k, max_depth=cap).entries)
        report.oracle_checked = True
    logger.info("count D=%s kstar=%s engine=%s total=%s", D, k, engine, report.total)
    return report
