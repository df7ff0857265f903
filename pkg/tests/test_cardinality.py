from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trinomial_paths.cardinality import (
    CardinalityTuple,
    TruncatedTuple,
    histogram,
    lex_compare_mixed,
    lex_compare_positive,
    minimal_counts,
    seed_tuple,
    switching_term,
    truncate,
    untruncate,
    validate_tuple,
    weighted_sum,
)
from trinomial_paths.core import IndexMismatch, NonzeroNegativePart, OutOfRange
from trinomial_paths.lattice import walk_to_path
from trinomial_paths.oracle import oracle_classes
from trinomial_paths.weights import WeightTable


def ct(k_minus: int, *counts: int) -> CardinalityTuple:
    return CardinalityTuple(k_minus=k_minus, counts=tuple(counts))


def test_histogram_of_base_path() -> None:
    t = histogram((0, 1, 2, 1, 0, 1, 0, 0, 1, 2))
    assert t == ct(-3, 0, 0, 0, 4, 4, 2, 0, 0, 0)
    assert (t.at(0), t.at(1), t.at(2), t.at(3)) == (4, 4, 2, 0)
    assert t.total == 10


def test_histogram_is_order_invariant() -> None:
    assert histogram((0, 1, 0, 0, 0)) == histogram((0, 0, 0, 1, 0))
    assert histogram((0, 0)) == ct(0, 2)


@given(walk=st.lists(st.sampled_from([-1, 0, 1]), max_size=30))
def test_weighted_sum_depends_only_on_histogram(walk: list) -> None:
    path = walk_to_path(walk)
    w = WeightTable.affine(20, 2)
    assert weighted_sum(histogram(path), w) == sum(w.weight(k) for k in path)
    assert histogram(path).mirror() == histogram(tuple(-x for x in path))


def test_seed_tuple_and_switching_term() -> None:
    seed, beta = seed_tuple(7, 2)
    assert seed == ct(-2, 0, 0, 1, 1, 2, 2, 2)
    assert beta == 1
    assert switching_term(7, 2) == 1
    assert switching_term(6, 2) == 2
    assert seed_tuple(4, 4)[0] == ct(0, 1, 1, 1, 1, 1)
    with pytest.raises(OutOfRange):
        seed_tuple(4, -1)


def test_lex_compare_positive() -> None:
    a = ct(-2, 0, 0, 1, 1, 2, 2, 2)
    b = ct(-2, 0, 0, 1, 1, 2, 3, 1)
    assert lex_compare_positive(a, b) == 1
    assert lex_compare_positive(b, a) == -1
    assert lex_compare_positive(a, a) == 0
    with pytest.raises(IndexMismatch):
        lex_compare_positive(a, ct(-1, 0, 1, 1, 2, 2, 2))
    with pytest.raises(IndexMismatch):
        lex_compare_positive(a, ct(-2, 0, 1, 1, 1, 2, 2, 1))


def test_lex_compare_mixed_prefers_fewer_deep_visits() -> None:
    shallow = ct(-2, 0, 0, 2, 2, 2, 1, 1)
    deep = ct(-2, 0, 1, 2, 1, 2, 1, 1)
    assert lex_compare_mixed(shallow, deep) == 1
    assert lex_compare_mixed(deep, shallow) == -1
    with pytest.raises(IndexMismatch):
        lex_compare_mixed(shallow, ct(-1, 0, 2, 2, 2, 1, 1))


def test_minimal_counts() -> None:
    assert minimal_counts(0, 4, 2) == (1, 1, 2, 2, 1)
    assert minimal_counts(-1, 1, 0) == (1, 3, 1)
    assert minimal_counts(0, 0, 0) == (1,)
    assert minimal_counts(-3, 1, -2) == tuple(reversed(minimal_counts(-1, 3, 2)))
    with pytest.raises(OutOfRange):
        minimal_counts(1, 3, 2)


@pytest.mark.parametrize("depth", range(0, 7))
def test_validate_tuple_is_exact_realizability(depth: int) -> None:
    for k in range(-depth, depth + 1):
        realizable = set(oracle_classes(depth, k).entries)
        assert all(validate_tuple(t, depth, k) for t in realizable)
        for t in realizable:
            for i, c in enumerate(t.counts):
                if c == 0:
                    continue
                for j in range(len(t.counts)):
                    if j == i:
                        continue
                    moved = list(t.counts)
                    moved[i] -= 1
                    moved[j] += 1
                    cand = CardinalityTuple(k_minus=t.k_minus, counts=tuple(moved))
                    assert validate_tuple(cand, depth, k) == (cand in realizable)


def test_validate_tuple_rejects_junk() -> None:
    assert not validate_tuple(ct(0, 1, 1, 1), 3, 2)
    assert not validate_tuple(ct(0, 0, 0), 1, 0)
    assert not validate_tuple(ct(-1, 1, 0, 1), 1, 0)
    assert not validate_tuple(ct(0, 2), 1, 5)


def test_truncate_roundtrip_and_errors() -> None:
    t = ct(-2, 0, 0, 1, 1, 2, 2, 2)
    tt = truncate(t)
    assert tt == TruncatedTuple(counts=(1, 1, 2, 2, 2))
    assert tt.ell == 5
    assert untruncate(tt, -2) == t
    with pytest.raises(NonzeroNegativePart):
        truncate(ct(-1, 1, 1, 1))
    with pytest.raises(OutOfRange):
        untruncate(tt, 1)


def test_encode_decode() -> None:
    t = ct(-2, 0, 0, 1, 1, 2, 2, 2)
    assert t.encode() == "-2:0,0,1,1,2,2,2"
    assert CardinalityTuple.decode(t.encode()) == t
    assert t.support() == (0, 4)
    assert ct(0, 0, 0).support() is None


def test_weighted_sum_exact() -> None:
    assert weighted_sum(ct(0, 1, 1, 1, 1, 1), WeightTable.from_mapping({k: k for k in range(5)})) == 10
    assert weighted_sum(ct(0, 1, 1), WeightTable.affine("0.5", "0.25")) == Fraction(5, 4)
