import random

import pytest

from braidsplit.extension import decide_split, verify_section
from braidsplit.instances import WreathInstanceSpec, build_wreath_group, wreath_extension
from braidsplit.oracle import (
    BudgetExceeded,
    brute_force_lifts,
    complement_search,
    cross_validate,
)
from braidsplit.permgroup import BlockMap, Permutation, block_projection, closure, generate


def wreath_group(n, q):
    return generate(build_wreath_group(WreathInstanceSpec(n, q)))


@pytest.mark.parametrize("q, splits", [(2, True), (3, True), (4, False)])
def test_lift_examples(q, splits):
    res = brute_force_lifts(wreath_extension(3, q))
    assert (res.witnesses > 0) == splits
    assert (res.first_witness is not None) == splits


def test_lift_witness_is_a_section():
    ext = wreath_extension(3, 6)
    res = brute_force_lifts(ext)
    assert verify_section(ext, res.first_witness).ok


def test_lift_budget():
    with pytest.raises(BudgetExceeded) as exc:
        brute_force_lifts(wreath_extension(3, 5), budget=100)
    assert exc.value.cost == 125**2


def test_lift_search_independent_of_enumeration_order():
    ext = wreath_extension(3, 6)
    elems = ext.module.elements()
    base = brute_force_lifts(ext)
    shuffled = list(elems)
    random.Random(3).shuffle(shuffled)
    other = brute_force_lifts(ext, elements=shuffled)
    assert other.witnesses == base.witnesses
    assert other.searched == base.searched


@pytest.mark.parametrize("q, found", [(2, True), (3, True), (4, False)])
def test_complement_examples(q, found):
    n = 3
    res = complement_search(wreath_group(n, q), BlockMap.wreath(n, q))
    assert (res.found is not None) == found
    if found:
        H = closure(res.found, cap=6)
        assert len(H) == 6
        blocks = BlockMap.wreath(n, q)
        assert sum(block_projection(Permutation(h), blocks).is_identity() for h in H) == 1


def test_complement_of_symmetric_group_is_itself():
    gens = [Permutation.transposition(3, 0, 1), Permutation.transposition(3, 1, 2)]
    res = complement_search(generate(gens), BlockMap.singletons(3))
    assert res.found is not None


def test_complement_cap():
    with pytest.raises(BudgetExceeded):
        complement_search(wreath_group(3, 3), BlockMap.wreath(3, 3), cap=10)


def test_cross_validate_empty_range():
    assert cross_validate([], [1, 2]) == []
    assert cross_validate([3], []) == []


def test_cross_validate_small():
    records = cross_validate([3], range(1, 7), group_cap=400)
    assert [r.q for r in records] == list(range(1, 7))
    for r in records:
        assert r.agree, r
        assert r.lifts is not None
        assert r.decide == (r.q % 4 != 0)
    assert [r.complement is not None for r in records] == [True] * 4 + [False] * 2


def test_cross_validate_records_skips():
    (rec,) = cross_validate([4], [3], lift_budget=10)
    assert rec.lifts is None
    assert any("lifts skipped" in note for note in rec.notes)


def test_cross_validate_is_deterministic():
    a = cross_validate([3], [2, 4], group_cap=400)
    b = cross_validate([3], [2, 4], group_cap=400)
    assert a == b


@pytest.mark.parametrize("n, q", [(4, 2), (4, 3)])
def test_four_strands_oracles_agree(n, q):
    ext = wreath_extension(n, q)
    lifts = brute_force_lifts(ext).witnesses > 0
    comp = complement_search(wreath_group(n, q), BlockMap.wreath(n, q), cap=10**4).found is not None
    assert lifts == comp == decide_split(ext).splits
