"""Cardinality tuples: per-level visit counts that key path equivalence classes.

A tuple is stored densely over [k_minus, k_plus] with an explicit offset. For a
depth D and terminal kstar the canonical range is `position_bounds(D, kstar)`,
so tuples produced by different engines compare equal when their counts do.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from .core import IndexMismatch, NonzeroNegativePart, OutOfRange, check_terminal
from .lattice import position_bounds, require_path
from .weights import Number, WeightTable


@dataclass(frozen=True)
class CardinalityTuple:
    k_minus: int
    counts: Tuple[int, ...]

    @property
    def k_plus(self) -> int:
        return self.k_minus + len(self.counts) - 1

    @property
    def total(self) -> int:
        return sum(self.counts)

    def at(self, k: int) -> int:
        i = int(k) - self.k_minus
        if 0 <= i < len(self.counts):
            return self.counts[i]
        return 0

    def support(self) -> Tuple[int, int] | None:
        nz = [self.k_minus + i for i, c in enumerate(self.counts) if c]
        if not nz:
            return None
        return nz[0], nz[-1]

    def has_negative_part(self) -> bool:
        return any(self.at(k) for k in range(self.k_minus, min(0, self.k_plus + 1)))

    def mirror(self) -> "CardinalityTuple":
        return CardinalityTuple(k_minus=-self.k_plus, counts=tuple(reversed(self.counts)))

    def encode(self) -> str:
        return f"{self.k_minus}:" + ",".join(str(c) for c in self.counts)

    @staticmethod
    def decode(text: str) -> "CardinalityTuple":
        head, _, body = str(text).partition(":")
        counts = tuple(int(x) for x in body.split(",")) if body else ()
        return CardinalityTuple(k_minus=int(head), counts=counts)

    def to_dict(self) -> Dict[str, Any]:
        return {"k_minus": self.k_minus, "counts": list(self.counts)}


@dataclass(frozen=True)
class TruncatedTuple:
    counts: Tuple[int, ...]

    @property
    def ell(self) -> int:
        return len(self.counts)


def switching_term(depth: int, kstar: int) -> int:
    """beta: 1 when D+kstar is odd, else 2."""
    return 1 if (int(depth) + int(kstar)) % 2 else 2


def histogram(seq: Sequence[int]) -> CardinalityTuple:
    path = require_path(seq)
    k_minus, k_plus = position_bounds(len(path) - 1, path[-1])
    counts = [0] * (k_plus - k_minus + 1)
    for k in path:
        counts[k - k_minus] += 1
    return CardinalityTuple(k_minus=k_minus, counts=tuple(counts))


def _same_range(a: CardinalityTuple, b: CardinalityTuple) -> None:
    if a.k_minus != b.k_minus or len(a.counts) != len(b.counts):
        raise IndexMismatch(
            f"tuples cover different ranges: [{a.k_minus},{a.k_plus}] vs [{b.k_minus},{b.k_plus}]"
        )


def _cmp(x: Sequence[int], y: Sequence[int]) -> int:
    if tuple(x) == tuple(y):
        return 0
    return 1 if tuple(x) > tuple(y) else -1


def positive_key(t: CardinalityTuple) -> Tuple[int, ...]:
    return tuple(t.at(k) for k in range(t.k_plus, -1, -1))


def mixed_key(t: CardinalityTuple) -> Tuple[int, ...]:
    """Negative levels first (fewer deep visits is larger), then right-to-left."""
    neg = tuple(-t.at(k) for k in range(-1, t.k_minus - 1, -1))
    return neg + positive_key(t)


def lex_compare_positive(a: CardinalityTuple, b: CardinalityTuple) -> int:
    _same_range(a, b)
    if a.has_negative_part() or b.has_negative_part():
        raise IndexMismatch("right-to-left order is defined on tuples without negative visits")
    return _cmp(positive_key(a), positive_key(b))


def lex_compare_mixed(a: CardinalityTuple, b: CardinalityTuple) -> int:
    _same_range(a, b)
    return _cmp(mixed_key(a), mixed_key(b))


def seed_tuple(depth: int, kstar: int) -> Tuple[CardinalityTuple, int]:
    """Histogram of the maximal seed path, with its beta tag."""
    if kstar < 0:
        raise OutOfRange(f"seed tuples are defined for kstar >= 0, got {kstar}")
    check_terminal(depth, kstar)
    k_minus, k_plus = position_bounds(depth, kstar)
    counts = [0] * (k_plus - k_minus + 1)
    for k in range(0, k_plus):
        counts[k - k_minus] = 1 if k < kstar else 2
    counts[k_plus - k_minus] = 1 if (depth - kstar) % 2 == 0 else 2
    return CardinalityTuple(k_minus=k_minus, counts=tuple(counts)), switching_term(depth, kstar)


def _edge_crossings(k: int, a: int, b: int, kstar: int) -> int:
    """Fewest traversals of the edge (k, k+1) for support [a, b] and kstar >= 0."""
    if k < a or k >= b:
        return 0
    return 1 if 0 <= k < kstar else 2


def minimal_counts(a: int, b: int, kstar: int) -> Tuple[int, ...]:
    """Per-level minimum visits over [a, b] for paths with exactly that support.

    Every visit enters and leaves through an edge, except the root visit (no
    entry) and the final visit (no exit).
    """
    if kstar < 0:
        return tuple(reversed(minimal_counts(-b, -a, -kstar)))
    if not (a <= min(0, kstar) and b >= max(0, kstar)):
        raise OutOfRange(f"support [{a},{b}] must contain 0 and {kstar}")
    out: List[int] = []
    for k in range(a, b + 1):
        halves = _edge_crossings(k - 1, a, b, kstar) + _edge_crossings(k, a, b, kstar)
        halves += (1 if k == 0 else 0) + (1 if k == kstar else 0)
        out.append(halves // 2)
    return tuple(out)


def validate_tuple(t: CardinalityTuple, depth: int, kstar: int) -> bool:
    """True iff some path of depth D ending at kstar has exactly this histogram."""
    try:
        if t.total != int(depth) + 1 or any(c < 0 for c in t.counts):
            return False
        if abs(int(kstar)) > int(depth):
            return False
        span = t.support()
        if span is None:
            return False
        a, b = span
        if any(t.at(k) == 0 for k in range(a, b + 1)):
            return False
        if a > min(0, kstar) or b < max(0, kstar):
            return False
        mins = minimal_counts(a, b, kstar)
        return all(t.at(k) >= m for k, m in zip(range(a, b + 1), mins))
    except (TypeError, ValueError):
        return False


def weighted_sum(t: CardinalityTuple, w: WeightTable) -> Number:
    total = Fraction(0)
    for i, c in enumerate(t.counts):
        if c:
            total += c * Fraction(w.weight(t.k_minus + i))
    return int(total) if total.denominator == 1 else total


def truncate(t: CardinalityTuple) -> TruncatedTuple:
    if t.has_negative_part():
        raise NonzeroNegativePart("truncation drops negative levels, which must be empty")
    return TruncatedTuple(counts=tuple(t.at(k) for k in range(0, t.k_plus + 1)))


def untruncate(tt: TruncatedTuple, k_minus: int) -> CardinalityTuple:
    if k_minus > 0:
        raise OutOfRange(f"k_minus must be <= 0, got {k_minus}")
    return CardinalityTuple(k_minus=int(k_minus), counts=(0,) * (-int(k_minus)) + tuple(tt.counts))
