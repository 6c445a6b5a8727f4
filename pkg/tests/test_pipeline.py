import math
import random

import pytest

from cliquedecomp.core import Decomposition, InstanceError, graph_to_instance, verify_decomposition
from cliquedecomp.gen import gen_lv, gen_random_planted, gen_tf
from cliquedecomp.oracle import oracle_decide
from cliquedecomp.pipeline import clean, merge_duplicates, same_family, solve_graph, sweep_k

from conftest import graph_of, two_clique_graph


def test_merge_and_clean():
    g = graph_of(3, {(0, 1): 3}, {2: 1})
    d = Decomposition((({0, 1}, 1), ({0, 1}, 2), ({0}, 1), ({2}, 1)))
    assert merge_duplicates(d).canonical() == (((0,), 1), ((0, 1), 3), ((2,), 1))
    assert clean(d, g).canonical() == (((0, 1), 3), ((2,), 1))
    assert same_family(d, Decomposition((({2}, 1), ({0, 1}, 3))), g)


@pytest.mark.parametrize("alg", ["lp", "ip", "milp"])
def test_two_cliques(alg):
    res = solve_graph(two_clique_graph(), 2, alg)
    assert res.status == "yes" and len(res.decomposition) == 2
    assert verify_decomposition(two_clique_graph(), res.decomposition)
    assert solve_graph(two_clique_graph(), 1, alg).status == "no"


def test_planted_tf_k3():
    p = gen_tf(3, "small", seed=0)
    res = solve_graph(p.graph, 3, "lp")
    assert res.status == "yes" and len(res.decomposition) <= 3
    assert verify_decomposition(p.graph, res.decomposition)


def test_planted_budget_too_small():
    p = gen_tf(5, "medium", seed=1)
    assert solve_graph(p.graph, math.ceil(0.6 * 5), "ip").status == "no"


def test_deepening_does_not_change_decisions():
    rng = random.Random(2)
    for seed in range(40):
        p = gen_random_planted(rng.randint(1, 3), rng.randint(4, 7), size_range=(2, 4), overlap=0.6,
                               weight_model="uniform:3", seed=seed)
        k = rng.randint(1, 3)
        want = oracle_decide(graph_to_instance(p.graph, k)) is not None
        for deep in (False, True):
            for pre in (False, True):
                res = solve_graph(p.graph, k, "lp", deepening=deep, use_preprocess=pre)
                assert (res.status == "yes") == want
                if want:
                    assert len(res.decomposition) <= k


def test_timeout_status():
    p = gen_lv(6, "medium", seed=0)
    res = solve_graph(p.graph, 6, "lp", timeout=1e-6, deepening=False)
    assert res.status == "timeout" and res.decomposition is None


def test_wecp_needs_K_and_integral():
    with pytest.raises(InstanceError):
        solve_graph(two_clique_graph(), alg="wecp")
    with pytest.raises(ValueError):
        solve_graph(two_clique_graph(), 2, "simplex")


def test_annotated_vertex_kept():
    g = graph_of(3, {(0, 1): 1, (1, 2): 1, (0, 2): 1}, {0: 3})
    res = solve_graph(g, 2, "lp")
    assert res.status == "yes" and verify_decomposition(g, res.decomposition)
    assert solve_graph(g, 1, "lp").status == "no"


def test_sweep_k():
    b, res = sweep_k(two_clique_graph(), 0, 4)
    assert b == 2 and res.status == "yes"
    b, res = sweep_k(two_clique_graph(), 0, 1)
    assert res.status == "no"
    K, res = sweep_k(two_clique_graph(), 1, 4, "wecp")
    assert K == 3
