from dataclasses import replace

import pytest

from trinomial_paths.cardinality import CardinalityTuple, lex_compare_mixed, validate_tuple
from trinomial_paths.core import DepthCap, OutOfRange
from trinomial_paths.massshift import (
    EnumerationStats,
    closed_form_term,
    count_by_support,
    count_total,
    enumerate_unique,
    enumerate_weak_compositions,
    initial_state,
    iter_states,
    iter_unique,
    shift_reseed,
    stage_blocks,
    stage_count,
    table_schedule_count,
    weak_composition_count,
)
from trinomial_paths.oracle import oracle_classes


def padded(*counts: int) -> CardinalityTuple:
    """Positive-side tuple for (7, 2), padded with the two negative levels."""
    return CardinalityTuple(k_minus=-2, counts=(0, 0) + counts)


@pytest.mark.parametrize("i,slots,expected", [(0, 5, 1), (1, 4, 4), (2, 4, 10), (3, 1, 1), (4, 3, 15)])
def test_weak_composition_count(i: int, slots: int, expected: int) -> None:
    assert weak_composition_count(i, slots) == expected
    assert len(set(enumerate_weak_compositions(i, slots))) == expected


def test_weak_composition_count_rejects_bad_input() -> None:
    with pytest.raises(ValueError):
        weak_composition_count(-1, 3)
    with pytest.raises(ValueError):
        weak_composition_count(1, 0)


def test_weak_compositions_rightmost_first() -> None:
    assert list(enumerate_weak_compositions(1, 5)) == [
        (0, 0, 0, 0, 1),
        (0, 0, 0, 1, 0),
        (0, 0, 1, 0, 0),
        (0, 1, 0, 0, 0),
        (1, 0, 0, 0, 0),
    ]
    assert list(enumerate_weak_compositions(2, 4)) == [
        (0, 0, 0, 2),
        (0, 0, 1, 1),
        (0, 1, 0, 1),
        (1, 0, 0, 1),
        (0, 0, 2, 0),
        (0, 1, 1, 0),
        (1, 0, 1, 0),
        (0, 2, 0, 0),
        (1, 1, 0, 0),
        (2, 0, 0, 0),
    ]
    assert list(enumerate_weak_compositions(0, 3)) == [(0, 0, 0)]


def test_weak_compositions_with_negative_slots() -> None:
    # slot 0 and slot 1 are levels -2 and -1: level -1 ascends first, then -2
    out = list(enumerate_weak_compositions(1, 4, ascending=2))
    assert out == [(0, 0, 0, 1), (0, 0, 1, 0), (1, 0, 0, 0), (0, 1, 0, 0)]


def test_worked_example_stage_zero() -> None:
    state = initial_state(7, 2)
    assert state.seed == padded(1, 1, 2, 2, 2)
    assert state.beta == 1
    assert state.ell == 5
    assert state.T == 2

    stage0 = [r for r in iter_unique(7, 2) if r.stage == 0]
    assert [r.tuple for r in stage0[:5]] == [
        padded(1, 1, 2, 2, 2),
        padded(1, 1, 2, 3, 1),
        padded(1, 1, 3, 2, 1),
        padded(1, 2, 2, 2, 1),
        padded(2, 1, 2, 2, 1),
    ]
    assert [r.m for r in stage0[:5]] == [0, 1, 1, 1, 1]

    second = stage0[5:15]
    assert all(r.m == 2 for r in second)
    assert [r.tuple for r in second] == [
        padded(1, 1, 2, 4, 0),
        padded(1, 1, 3, 3, 0),
        padded(1, 2, 2, 3, 0),
        padded(2, 1, 2, 3, 0),
        padded(1, 1, 4, 2, 0),
        padded(1, 2, 3, 2, 0),
        padded(2, 1, 3, 2, 0),
        padded(1, 3, 2, 2, 0),
        padded(2, 2, 2, 2, 0),
        padded(3, 1, 2, 2, 0),
    ]


def test_shift_reseed_worked_example() -> None:
    s0 = initial_state(7, 2)
    s1 = shift_reseed(s0)
    assert s1 is not None
    assert s1.M == 1 and s1.window == (-1, 3)
    assert s1.seed == CardinalityTuple(k_minus=-2, counts=(0, 1, 2, 1, 2, 2, 0))
    assert (s1.kstar_geo, s1.k_eff, s1.m_max) == (3, 4, 3)

    s2 = shift_reseed(s1)
    assert s2 is not None
    assert s2.seed == CardinalityTuple(k_minus=-2, counts=(1, 2, 2, 1, 2, 0, 0))
    assert s2.m_max == s1.m_max - 2
    assert shift_reseed(s2) is None


def test_shift_reseed_empty_right_edge_only_moves_window() -> None:
    state = replace(initial_state(7, 2), seed=padded(1, 1, 3, 3, 0))
    nxt = shift_reseed(state)
    assert nxt is not None
    assert nxt.seed == state.seed
    assert (nxt.M, nxt.m, nxt.window) == (1, 0, (-1, 3))


def test_shift_reseed_caps_three_units_at_central_terminal() -> None:
    state = replace(initial_state(4, 0), seed=CardinalityTuple(k_minus=-2, counts=(0, 0, 1, 1, 3)))
    nxt = shift_reseed(state)
    assert nxt is not None
    assert nxt.seed.counts == (0, 1, 2, 1, 1)
    assert nxt.seed.total == 5


def test_shift_reseed_central_terminal() -> None:
    seeds = [s.seed.counts for s in iter_states(4, 0)]
    assert seeds == [(0, 0, 2, 2, 1), (0, 1, 3, 1, 0), (1, 2, 2, 0, 0)]


@pytest.mark.parametrize("depth", range(0, 9))
def test_reseeded_seed_opens_each_stage(depth: int) -> None:
    for k in range(0, depth + 1):
        firsts = {}
        for r in iter_unique(depth, k):
            firsts.setdefault(r.stage, r.tuple)
        for state in iter_states(depth, k):
            assert firsts[state.M] == state.seed


@pytest.mark.parametrize("depth", range(0, 11))
def test_unique_matches_oracle(depth: int) -> None:
    for k in range(-depth, depth + 1):
        stats = EnumerationStats()
        records = list(iter_unique(depth, k, stats=stats))
        keys = [r.tuple for r in records]
        assert len(keys) == len(set(keys))
        assert set(keys) == set(oracle_classes(depth, k).entries)
        assert stats.rejected == 0
        assert stats.emitted == len(keys) == count_total(depth, k).total
        assert all(validate_tuple(t, depth, k) for t in keys)


@pytest.mark.parametrize("depth,kstar", [(6, 0), (7, 2), (8, 1), (8, -3)])
def test_stage_order_strictly_decreasing(depth: int, kstar: int) -> None:
    records = list(iter_unique(depth, kstar))
    for a, b in zip(records, records[1:]):
        assert a.stage <= b.stage
        if a.stage == b.stage and kstar >= 0:
            assert lex_compare_mixed(a.tuple, b.tuple) == 1


def test_stage_blocks_match_table_terms() -> None:
    for depth in range(0, 12):
        for k in range(0, depth + 1):
            for state in iter_states(depth, k):
                blocks = stage_blocks(state)
                assert [b.m for b in blocks] == list(range(state.m_max + 1))
                assert sum(b.size() for b in blocks) == stage_count(state)
                assert [sum(1 for _ in b.tuples()) for b in blocks] == [b.size() for b in blocks]


@pytest.mark.parametrize(
    "depth,kstar,expected",
    [
        (0, 0, 1),
        (3, 0, 5),
        (4, 0, 10),
        (4, 1, 10),
        (5, 0, 18),
        (5, 2, 18),
        (5, 3, 12),
        (6, 0, 33),
        (6, 4, 17),
        (7, 0, 59),
        (7, 2, 76),
        (8, 0, 105),
        (10, 0, 324),
        (12, 0, 977),
        (16, 0, 8462),
    ],
)
def test_count_total_values(depth: int, kstar: int, expected: int) -> None:
    report = count_total(depth, kstar)
    assert report.total == expected
    assert count_by_support(depth, kstar) == expected
    assert count_total(depth, -kstar).total == expected


def test_count_total_matches_oracle_through_depth_ten() -> None:
    for depth in range(0, 11):
        for k in range(-depth, depth + 1):
            report = count_total(depth, k, oracle_check=True)
            assert report.oracle_ok, (depth, k)


@pytest.mark.parametrize("depth", range(2, 11))
def test_edge_terminal_counts(depth: int) -> None:
    assert count_total(depth, depth).total == 1
    assert count_total(depth, depth - 1).total == depth
    assert initial_state(depth, depth - 1).ell == depth


def test_counts_by_terminal_shape() -> None:
    assert [count_total(5, k).total for k in range(0, 6)] == [18, 20, 18, 12, 5, 1]
    counts10 = [count_total(10, k).total for k in range(0, 11)]
    assert max(counts10) == counts10[3] == 568
    for depth in range(0, 11):
        for k in range(1, depth + 1):
            assert count_total(depth, k).total == count_total(depth, -k).total
        assert count_total(depth, depth).total == count_total(depth, -depth).total == 1


def test_table_schedule_helper() -> None:
    assert table_schedule_count(5, horizon=0, right_edge=2) == 1
    assert table_schedule_count(5, horizon=1, right_edge=2) == 5
    assert table_schedule_count(5, horizon=2, right_edge=2) == 15
    assert sum(closed_form_term(i, 5, 2) for i in range(3)) == 16


def test_closed_form_ledger() -> None:
    report = count_total(7, 0, engine="table")
    assert report.discrepancies
    for d in report.discrepancies:
        assert d.table != d.closed
    closed = count_total(7, 0, engine="closed")
    assert closed.total != report.total
    assert count_total(4, 4, engine="closed").total == 1


def test_closed_form_single_slot() -> None:
    assert closed_form_term(0, 1, 1) == closed_form_term(0, 1, 2) == 1
    report = count_total(0, 0)
    assert report.discrepancies == []
    assert count_total(0, 0, engine="closed").total == 1


def test_count_huge_depth_is_exact() -> None:
    report = count_total(200, 0)
    assert report.total == count_by_support(200, 0)
    payload = report.to_dict()
    assert payload["total"] == str(report.total)
    assert payload["per_stage"][0][0] == 0


def test_count_and_enumeration_guards() -> None:
    with pytest.raises(OutOfRange):
        count_total(3, 4)
    with pytest.raises(ValueError):
        count_total(3, 0, engine="nope")
    with pytest.raises(DepthCap):
        list(enumerate_unique(70, 0))
    assert list(enumerate_unique(0, 0)) == [CardinalityTuple(k_minus=0, counts=(1,))]
