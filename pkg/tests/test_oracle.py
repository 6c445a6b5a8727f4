import pytest

from cliquedecomp.core import STAR, Instance, PartialAssignment, verify
from cliquedecomp.oracle import OracleLimitError, nonneg_solution, oracle_decide, oracle_weightsets


def test_decide_examples():
    inst = Instance(((STAR, 3), (3, STAR)), 1)
    B, W = oracle_decide(inst)
    assert verify(inst, B, W)
    assert oracle_decide(Instance(((STAR, 1, 0), (1, STAR, 2), (0, 2, STAR)), 1)) is None
    assert oracle_decide(Instance(((STAR, 1), (1, STAR)), 0)) is None
    assert oracle_decide(Instance(((STAR, 0), (0, STAR)), 0)) is not None


def test_decide_fixed_diagonal_needs_singleton():
    inst = Instance(((3, 2), (2, STAR)), 2)
    B, W = oracle_decide(inst)
    assert verify(inst, B, W)
    assert oracle_decide(inst.with_k(1)) is None


def test_integral_oracle():
    inst = Instance(((STAR, 1, 1), (1, STAR, 1), (1, 1, STAR)), 1)
    assert oracle_decide(inst, integral=True) is not None


def test_limits():
    A = tuple(tuple(STAR if i == j else 0 for j in range(13)) for i in range(13))
    with pytest.raises(OracleLimitError):
        oracle_decide(Instance(A, 1))


def test_nonneg_solution():
    assert nonneg_solution([[1, 1], [1, 0]], [2, 3], 2) is None
    assert nonneg_solution([[1, 1], [1, 0]], [3, 1], 2) == [1, 2]
    assert nonneg_solution([], [], 2) == [0, 0]


def test_weightsets_examples():
    A = ((STAR, 3), (3, STAR))
    inst = Instance(A, 2)
    B = PartialAssignment.from_vectors([(1, 1), (1, 1)])
    assert oracle_weightsets(inst, B) == {(0, 3), (1, 2), (2, 1), (3, 0)}
    assert oracle_weightsets(inst, PartialAssignment.from_vectors([(1, 1), None], 2)) == {(None, None)}
    bad = Instance(((3, 2), (2, STAR)), 2)
    assert oracle_weightsets(bad, PartialAssignment.from_vectors([(1, 0), (1, 0)])) == set()
