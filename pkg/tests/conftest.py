import random

import pytest

from cliquedecomp.core import STAR, AnnotatedGraph, Instance


def random_instance(rng: random.Random, max_n=7, max_k=3, max_w=3, max_cliques=3):
    """Sum of a few random weighted cliques, random wildcards, sometimes one perturbed entry."""
    n = rng.randint(1, max_n)
    k = rng.randint(1, max_k)
    A = [[0] * n for _ in range(n)]
    for _ in range(rng.randint(1, max_cliques)):
        members = rng.sample(range(n), rng.randint(1, n))
        w = rng.randint(1, max_w)
        for a in members:
            for b in members:
                A[a][b] += w
    for i in range(n):
        if rng.random() < 0.6:
            A[i][i] = STAR
    if n > 1 and rng.random() < 0.3:
        i, j = rng.sample(range(n), 2)
        A[i][j] = A[j][i] = rng.randint(0, max_w)
    return Instance(A, k)


def graph_of(n, edges, annotated=None):
    return AnnotatedGraph(n, dict(edges), dict(annotated or {}))


def two_clique_graph():
    """Cliques {0,1,2} weight 1 and {1,2,3} weight 2."""
    return graph_of(4, {(0, 1): 1, (0, 2): 1, (1, 2): 3, (1, 3): 2, (2, 3): 2})


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(1234)
