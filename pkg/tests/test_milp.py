import random

from cliquedecomp.core import STAR, Instance, verify
from cliquedecomp.gen import e3c_solve, gen_e3c, random_e3c, E3CInstance
from cliquedecomp.milp import decide_milp, enumerate_cliques
from cliquedecomp.oracle import oracle_decide
from cliquedecomp.pipeline import solve_graph

from conftest import random_instance


def test_enumerate_cliques_triangle():
    A = tuple(tuple(STAR if i == j else 1 for j in range(3)) for i in range(3))
    assert sorted(enumerate_cliques(Instance(A, 1))) == [0b011, 0b101, 0b110, 0b111]


def test_agrees_with_oracle():
    rng = random.Random(4)
    for _ in range(150):
        inst = random_instance(rng)
        want = oracle_decide(inst) is not None
        got = decide_milp(inst)
        assert (got is not None) == want
        if got is not None:
            assert verify(inst, *got)


def test_e3c_small():
    e = E3CInstance(1, ((0, 1, 2),))
    p = gen_e3c(e)
    assert p.k == 7 and e3c_solve(e) is not None
    assert solve_graph(p.graph, p.k, "milp").status == "yes"
    e = random_e3c(2, 2, seed=0)
    p = gen_e3c(e)
    res = solve_graph(p.graph, p.k, "milp")
    assert (res.status == "yes") == (e3c_solve(e) is not None)
