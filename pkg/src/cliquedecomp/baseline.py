"""Unweighted baseline parameterised by the total clique weight ``K``.

A clique of weight ``w`` is treated as ``w`` identical unit cliques, so the
weights are fixed to all-ones over ``K`` columns and only the membership
matrix is searched.  It runs inside the same search driver as the weighted
solvers, so timing differences reflect the parameter, not the code.
"""

from __future__ import annotations

from .core import STAR, Instance, IntegralityError


class IdentityEngine:
    """Checks the new basis row against the filled rows with unit weights."""

    name = "wecp"

    def __init__(self, inst: Instance):
        if not inst.is_integral():
            raise IntegralityError("integral weights required for the unweighted baseline")
        self.inst = inst
        self.ones = [1] * inst.k

    def start(self):
        return self.ones

    def extend(self, state, rows, i: int):
        Ai = self.inst.A[i]
        bi = rows[i]
        for j, bj in enumerate(rows):
            if bj is None or Ai[j] is STAR:
                continue
            if (bi & bj).bit_count() != Ai[j]:
                return None
        return state

    def weights(self, state):
        return state

    def final(self, state):
        return list(state)


def solve_wecp(inst: Instance, K: int, **search_opts):
    """Search with ``K`` unit-weight columns; ``(B, ones)`` or ``None``.

    The basis cap defaults to ``2K``.
    """
    from .search import drive_search

    base = inst.with_k(K)
    return drive_search(base, IdentityEngine(base), **search_opts)
