"""Strip off cliques that share no edge with the rest of the graph.

A vertex ``v`` whose incident edges all carry the same weight ``w`` and whose
closed neighbourhood is a clique with every internal edge of weight ``w`` is
a candidate.  The candidate is removed only when no two of its vertices have
a common neighbour outside it: then no clique of any solution can contain an
edge of the candidate together with an outside vertex, so every solution can
trade its cliques inside the candidate for the candidate itself at weight
``w``.  Without that check the removal can cost extra cliques elsewhere.

Vertices carrying an annotation are never part of a removed clique.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import AnnotatedGraph, Decomposition, relabel


@dataclass(frozen=True)
class PreprocessResult:
    """Reduced graph, the removed cliques (original indices) and the leftover budget.

    ``index_map[r]`` is the original index of reduced vertex ``r``.
    """

    original: AnnotatedGraph
    reduced: AnnotatedGraph
    removed: tuple
    k_reduced: int
    index_map: tuple = field(default=())

    def reduced_budget_weight(self, K: int) -> int:
        """Unit-clique budget left after removal (each removed clique costs its weight)."""
        return K - int(sum(w for _, w in self.removed))


def _removable(v: int, adj: list, weights: dict, annotated) -> Optional[tuple]:
    nbrs = adj[v]
    if not nbrs or v in annotated:
        return None
    ws = {weights[(min(v, u), max(v, u))] for u in nbrs}
    if len(ws) != 1:
        return None
    (w,) = ws
    members = sorted(nbrs | {v})
    if any(u in annotated for u in members):
        return None
    inside = set(members)
    for a in range(len(members)):
        x = members[a]
        ax = adj[x]
        for b in range(a + 1, len(members)):
            y = members[b]
            if weights.get((x, y)) != w:
                return None
            if (ax & adj[y]) - inside:
                return None
    return frozenset(members), w


def find_removable(g: AnnotatedGraph, adj=None, weights=None):
    """First removable clique in ascending vertex order, or ``None``."""
    adj = g.adjacency() if adj is None else adj
    weights = g.edges if weights is None else weights
    for v in range(g.n):
        found = _removable(v, adj, weights, g.annotated)
        if found is not None:
            return found
    return None


def preprocess(g: AnnotatedGraph, k: int, cost=None) -> Optional[PreprocessResult]:
    """Remove edge-isolated uniform cliques; ``None`` if they alone exceed the budget.

    ``cost(weight)`` is the budget charged per removed clique (1 by default;
    the unweighted baseline charges the weight).  Vertices left without
    edges by a removal are dropped from the reduced graph.
    """
    cost = cost or (lambda w: 1)
    adj = g.adjacency()
    weights = dict(g.edges)
    removed = []
    touched: set = set()
    budget = k
    while True:
        found = find_removable(g, adj, weights)
        if found is None:
            break
        members, w = found
        budget -= cost(w)
        if budget < 0:
            return None
        removed.append((members, w))
        touched |= members
        for x in members:
            for y in members:
                if x < y:
                    del weights[(x, y)]
            adj[x] -= members
    keep = [v for v in range(g.n) if not (v in touched and not adj[v])]
    index = {v: r for r, v in enumerate(keep)}
    reduced = AnnotatedGraph(
        len(keep),
        {(index[u], index[v]): w for (u, v), w in weights.items()},
        {index[v]: w for v, w in g.annotated.items()},
        [g.labels[v] for v in keep],
    )
    return PreprocessResult(g, reduced, tuple(removed), budget, tuple(keep))


def reassemble(result: PreprocessResult, sub: Decomposition) -> Decomposition:
    """Solution of the original graph from one of the reduced graph plus the removed cliques."""
    lifted = relabel(sub, dict(enumerate(result.index_map)))
    return Decomposition(tuple(result.removed) + tuple(lifted.cliques))
