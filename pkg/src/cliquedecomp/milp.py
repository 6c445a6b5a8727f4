"""Clique-selection MILP for budgets far beyond the reach of the bit-vector search.

Every clique of the positive-weight graph (and every single vertex with a
fixed diagonal) is a candidate ``c`` with a selector ``y_c`` and a weight
``x_c`` in ``[0, u_c * y_c]``, where ``u_c`` is the smallest entry the clique
touches.  Edge and diagonal sums must match ``A`` and at most ``k``
selectors may be on.  HiGHS picks the supports in floating point; the
weights are then recomputed exactly by the phase-one simplex on the chosen
supports, so a YES answer is always an exactly verified ``(B, W)``.

Only practical when the graph has few cliques (sparse or ``K4``-free
graphs such as the hardness gadgets).
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .core import STAR, Instance, PartialAssignment, verify
from .lp import LpSystem, lp_feasible
from .search import SearchTimeout

MAX_CANDIDATES = 200_000


def enumerate_cliques(inst: Instance, limit: int = MAX_CANDIDATES) -> list:
    """Vertex bit masks of all cliques with >= 2 vertices, plus fixed-diagonal singletons."""
    n = inst.n
    nbr = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and inst.A[i][j] != 0:
                nbr[i] |= 1 << j
    out = []

    def grow(cur: int, allowed: int):
        while allowed:
            low = allowed & -allowed
            allowed ^= low
            c = cur | low
            if c & (c - 1):
                out.append(c)
                if len(out) > limit:
                    raise ValueError(f"more than {limit} candidate cliques")
            grow(c, allowed & nbr[low.bit_length() - 1])

    grow(0, (1 << n) - 1)
    for i in range(n):
        a = inst.A[i][i]
        if a is not STAR and a != 0:
            out.append(1 << i)
    return out


def _members(mask: int) -> list:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def decide_milp(inst: Instance, time_limit: Optional[float] = None):
    """``(B, W)`` with at most ``inst.k`` cliques, or ``None``.

    Raises :class:`SearchTimeout` if HiGHS hits ``time_limit`` (seconds)
    without a decision.
    """
    n, k = inst.n, inst.k
    cands = enumerate_cliques(inst)
    nc = len(cands)
    rows, rhs = [], []
    for i in range(n):
        for j in range(i, n):
            a = inst.A[i][j]
            if a is STAR:
                continue
            bits = (1 << i) | (1 << j)
            cover = [c for c in range(nc) if cands[c] & bits == bits]
            if not cover:
                if a != 0:
                    return None
                continue
            rows.append(cover)
            rhs.append(float(a))
    if not rows and nc == 0:
        return PartialAssignment(k, (0,) * n), [0] * k

    upper = []
    for c in cands:
        ms = _members(c)
        if len(ms) == 1:
            upper.append(float(inst.A[ms[0]][ms[0]]))
        else:
            upper.append(min(float(inst.A[u][v]) for a, u in enumerate(ms) for v in ms[a + 1:]))

    # variables: x_0..x_{nc-1}, y_0..y_{nc-1}
    nv = 2 * nc
    eq = np.zeros((len(rows), nv))
    for r, cover in enumerate(rows):
        eq[r, cover] = 1.0
    link = np.zeros((nc, nv))
    link[np.arange(nc), np.arange(nc)] = 1.0
    link[np.arange(nc), nc + np.arange(nc)] = -np.array(upper)
    budget = np.zeros((1, nv))
    budget[0, nc:] = 1.0
    cons = [
        LinearConstraint(eq, np.array(rhs), np.array(rhs)),
        LinearConstraint(link, -np.inf, 0.0),
        LinearConstraint(budget, 0, k),
    ]
    integrality = np.r_[np.zeros(nc), np.ones(nc)]
    bounds = Bounds(np.zeros(nv), np.r_[np.array(upper), np.ones(nc)])
    options = {"disp": False}
    if time_limit is not None:
        options["time_limit"] = max(float(time_limit), 0.01)
    # minimising the number of selected cliques gives HiGHS a bound to prune with
    cost = np.r_[np.zeros(nc), np.ones(nc)]
    t0 = time.monotonic()
    res = milp(cost, constraints=cons, integrality=integrality, bounds=bounds, options=options)
    if res.status == 2:  # infeasible
        return None
    if res.x is None:
        if time_limit is not None and time.monotonic() - t0 >= time_limit:
            raise SearchTimeout()
        raise RuntimeError(f"MILP solver failed: {res.message}")
    if res.status == 1 and res.fun is None:
        raise SearchTimeout()
    chosen = [cands[c] for c in range(nc) if res.x[nc + c] > 0.5]
    return _exact_weights(inst, chosen)


def _exact_weights(inst: Instance, chosen: list):
    """Exact weights for fixed supports, by the phase-one simplex."""
    k = inst.k
    rows = [0] * inst.n
    for q, c in enumerate(chosen):
        for v in _members(c):
            rows[v] |= 1 << q
    cons = []
    for i in range(inst.n):
        for j in range(i, inst.n):
            if inst.A[i][j] is not STAR:
                cons.append((rows[i] & rows[j], inst.A[i][j]))
    gamma = lp_feasible(LpSystem(len(chosen), tuple(cons)), inst.mode, inst.eps)
    if gamma is None:
        raise RuntimeError("MILP supports have no exact non-negative weights")
    W = list(gamma) + [0] * (k - len(chosen))
    B = PartialAssignment(k, tuple(rows))
    if not verify(inst, B, W):
        raise RuntimeError("MILP solution failed exact verification")
    return B, W
