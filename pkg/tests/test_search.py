import random

import pytest

from cliquedecomp.core import STAR, Instance, PartialAssignment, verify
from cliquedecomp.ip import IpEngine
from cliquedecomp.lp import LpEngine
from cliquedecomp.oracle import oracle_decide
from cliquedecomp.search import (
    SearchStats,
    SearchTimeout,
    _canonical_candidates,
    drive_search,
    fill_non_basis,
    i_w_compatible,
)

from conftest import random_instance

EDGE3 = ((STAR, 3), (3, STAR))


def test_i_w_compatible_examples():
    # row 1 is the filled one; row 0 is tested
    inst = Instance(((STAR, 3), (3, STAR)), 2)
    B = PartialAssignment.from_vectors([None, (1, 1)], 2)
    assert i_w_compatible(inst, B, [1, 2], 0, (1, 1))
    inst2 = Instance(((STAR, 2), (2, STAR)), 2)
    assert not i_w_compatible(inst2, B, [1, 2], 0, (1, 1))


def test_i_w_compatible_null_weight_rejects():
    inst = Instance(((STAR, 2), (2, STAR)), 2)
    B = PartialAssignment.from_vectors([None, (0, 1)], 2)
    assert not i_w_compatible(inst, B, [1, None], 0, (1, 1))


def test_fill_complete_returns_n():
    B = PartialAssignment.from_vectors([(1,), (1,)])
    out, i = fill_non_basis(Instance(EDGE3, 1), B, [3])
    assert out == B and i == 2


def test_fill_single_edge():
    B = PartialAssignment.from_vectors([(1,), None], 1)
    out, i = fill_non_basis(Instance(EDGE3, 1), B, [3])
    assert out.rows == (1, 1) and i == 2


def test_fill_no_compatible_row():
    B = PartialAssignment.from_vectors([(1,), None], 1)
    out, i = fill_non_basis(Instance(EDGE3, 1), B, [2])
    assert i == 1 and out.rows[1] is None


def test_drive_search_k3_all_two():
    A = tuple(tuple(STAR if i == j else 2 for j in range(3)) for i in range(3))
    B, W = drive_search(Instance(A, 1), LpEngine(Instance(A, 1)))
    assert B.rows == (1, 1, 1) and W == [2]


def test_drive_search_path_no():
    inst = Instance(((STAR, 1, 0), (1, STAR, 2), (0, 2, STAR)), 1)
    assert drive_search(inst, LpEngine(inst)) is None
    assert drive_search(inst, IpEngine(inst)) is None


def test_drive_search_two_cliques_recovers_planted():
    A = ((STAR, 1, 1, 0), (1, STAR, 3, 2), (1, 3, STAR, 2), (0, 2, 2, STAR))
    inst = Instance(A, 2)
    B, W = drive_search(inst, LpEngine(inst))
    assert verify(inst, B, W)
    cols = sorted((tuple((r >> q) & 1 for r in B.rows), W[q]) for q in range(2))
    assert cols == [((0, 1, 1, 1), 2), ((1, 1, 1, 0), 1)]


def test_k_zero_and_empty():
    inst = Instance(((STAR, 0), (0, STAR)), 0)
    assert drive_search(inst, LpEngine(inst)) is not None
    inst = Instance(((STAR, 1), (1, STAR)), 0)
    assert drive_search(inst, LpEngine(inst)) is None
    empty = Instance((), 2)
    assert drive_search(empty, LpEngine(empty)) is not None


def test_deadline_raises():
    rng = random.Random(3)
    inst = random_instance(rng, max_n=8, max_k=3)
    with pytest.raises(SearchTimeout):
        drive_search(inst.with_k(3), LpEngine(inst.with_k(3)), deadline=0.0)


def test_stats_are_counted():
    inst = Instance(((STAR, 1, 0), (1, STAR, 2), (0, 2, STAR)), 2)
    stats = SearchStats()
    assert drive_search(inst, LpEngine(inst), stats=stats) is not None
    assert stats.nodes >= 1 and stats.max_basis >= 1


def test_canonical_candidates():
    assert list(_canonical_candidates(2, [])) == [0b00, 0b01, 0b11]
    # after basis row 01 the columns differ, so everything is allowed
    assert list(_canonical_candidates(2, [0b01])) == [0, 1, 2, 3]
    assert len(_canonical_candidates(3, [])) == 4


def test_symmetry_breaking_preserves_decisions():
    rng = random.Random(21)
    for _ in range(300):
        inst = random_instance(rng)
        want = oracle_decide(inst) is not None
        for engine in (LpEngine(inst), IpEngine(inst)):
            for sym in (False, True):
                got = drive_search(inst, engine, symmetry_breaking=sym)
                assert (got is not None) == want
                if got is not None:
                    assert verify(inst, *got)
