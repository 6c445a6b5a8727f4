"""Pseudo-basis search shared by the LP, integer-partition and baseline solvers.

The driver grows a pseudo-basis one row at a time.  For the newest basis row
it branches over every bit vector, asks the weight-inference engine for
weights consistent with the basis, and greedily fills the remaining rows.
When a row cannot be filled it becomes the next basis row; at most ``2k``
basis rows are ever taken.  This is a depth-first walk over the same guess
space as enumerating whole ``2k x k`` pattern matrices, without repeating
shared prefixes.

Engines implement four methods:

``start()``
    initial engine state for an empty basis;
``extend(state, rows, i)``
    state after row ``i`` was (re)filled in ``rows``, or ``None`` if no
    clique weights are compatible;
``weights(state)``
    the weight vector used to fill non-basis rows (may contain ``None``);
``final(state)``
    the fully specified weight vector returned with a solution.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import STAR, Instance, PartialAssignment, mask_from_vector, products, verify


class SearchTimeout(Exception):
    """Raised when a search passes its deadline."""


@dataclass
class SearchStats:
    nodes: int = 0
    engine_calls: int = 0
    fills: int = 0
    max_basis: int = 0


def _check_deadline(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise SearchTimeout()


def _row_requirements(inst: Instance, rows: Sequence, i: int, filled: Sequence[int]):
    """Required inner product per distinct filled-row mask, or ``None`` on conflict."""
    Ai = inst.A[i]
    req: dict = {}
    for j in filled:
        m = rows[j]
        a = Ai[j]
        if m in req:
            if not inst.eq(req[m], a):
                return None
        else:
            req[m] = a
    return req


def _compatible(inst, table, req, diag, v) -> bool:
    if diag is not STAR:
        t = table[v]
        if t is None or not inst.eq(t, diag):
            return False
    for m, a in req.items():
        t = table[v & m]
        if t is None or not inst.eq(t, a):
            return False
    return True


def i_w_compatible(inst: Instance, B: PartialAssignment, W: Sequence, i: int, v) -> bool:
    """Can row ``i`` take bit vector ``v`` given the filled rows of ``B`` and weights ``W``?

    ``v`` is a 0/1 sequence or a bit mask.  A product that needs a null weight
    counts as a mismatch.
    """
    if not isinstance(v, int):
        v = mask_from_vector(v)
    table = products(W, B.k)
    filled = [j for j, r in enumerate(B.rows) if r is not None and j != i]
    req = _row_requirements(inst, B.rows, i, filled)
    if req is None:
        return False
    return _compatible(inst, table, req, inst.A[i][i], v)


def _fill(inst: Instance, rows: Sequence, W: Sequence, k: int, deadline=None):
    """Greedy non-basis fill on a copy of ``rows``; returns ``(rows, i)``."""
    n = inst.n
    table = products(W, k)
    rows = list(rows)
    filled = [j for j, r in enumerate(rows) if r is not None]
    size = 1 << k
    for i in range(n):
        if rows[i] is not None:
            continue
        if deadline is not None and (i & 15) == 0:
            _check_deadline(deadline)
        req = _row_requirements(inst, rows, i, filled)
        if req is None:
            return rows, i
        diag = inst.A[i][i]
        found = None
        for v in range(size):
            if _compatible(inst, table, req, diag, v):
                found = v
                break
        if found is None:
            return rows, i
        rows[i] = found
        filled.append(i)
    return rows, n


def fill_non_basis(inst: Instance, Btilde: PartialAssignment, W: Sequence):
    """Fill null rows in order with the first compatible vector.

    Returns ``(B, i)``: ``i`` is the first row with no compatible vector, or
    ``n`` when every row got filled (0-based indices throughout).
    """
    rows, i = _fill(inst, Btilde.rows, W, Btilde.k)
    return PartialAssignment(Btilde.k, tuple(rows)), i


def _canonical_candidates(k: int, basis_masks: Sequence[int]):
    """Vectors whose bits are non-increasing within each class of still-identical columns."""
    classes: dict = {}
    for q in range(k):
        sig = tuple((m >> q) & 1 for m in basis_masks)
        classes.setdefault(sig, []).append(q)
    groups = [cols for cols in classes.values() if len(cols) > 1]
    if not groups:
        return range(1 << k)
    out = []
    for v in range(1 << k):
        ok = True
        for cols in groups:
            seen_zero = False
            for q in cols:
                if (v >> q) & 1:
                    if seen_zero:
                        ok = False
                        break
                else:
                    seen_zero = True
            if not ok:
                break
        if ok:
            out.append(v)
    return out


def _isolated(inst: Instance, i: int) -> bool:
    return all(a is STAR or inst.eq(a, 0) for a in inst.A[i])


def _trivial(inst: Instance):
    """Decision for ``k == 0`` or ``n == 0``."""
    k = inst.k
    if inst.n == 0:
        return PartialAssignment(k, ()), [0] * k
    for i, row in enumerate(inst.A):
        for a in row:
            if a is not STAR and not inst.eq(a, 0):
                return None
    return PartialAssignment(k, (0,) * inst.n), [0] * k


def drive_search(
    inst: Instance,
    engine,
    *,
    symmetry_breaking: bool = False,
    deadline: Optional[float] = None,
    max_basis: Optional[int] = None,
    stats: Optional[SearchStats] = None,
):
    """Run the pseudo-basis search; returns a verified ``(B, W)`` or ``None``.

    ``deadline`` is a ``time.monotonic()`` value; passing it raises
    :class:`SearchTimeout`.  ``symmetry_breaking`` only explores basis rows
    that are lexicographically first among column permutations fixing the
    current basis, which preserves the decision.
    """
    if stats is None:
        stats = SearchStats()
    n, k = inst.n, inst.k
    if n == 0 or k == 0:
        return _trivial(inst)
    cap = 2 * k if max_basis is None else max_basis
    # rows with nothing to explain take the zero vector up front, so the
    # first basis row always has a non-zero row in every solution
    rows: list = [0 if _isolated(inst, i) else None for i in range(n)]
    first = next((i for i, r in enumerate(rows) if r is None), None)
    if first is None:
        return PartialAssignment(k, tuple(rows)), [0] * k

    def dfs(state, basis: list, i: int):
        cands = _canonical_candidates(k, basis) if symmetry_breaking else range(1 << k)
        depth = len(basis) + 1
        stats.max_basis = max(stats.max_basis, depth)
        for v in cands:
            _check_deadline(deadline)
            stats.nodes += 1
            rows[i] = v
            stats.engine_calls += 1
            new = engine.extend(state, rows, i)
            if new is None:
                continue
            stats.fills += 1
            full, nxt = _fill(inst, rows, engine.weights(new), k, deadline)
            if nxt == n:
                W = engine.final(new)
                B = PartialAssignment(k, tuple(full))
                if verify(inst, B, W):
                    rows[i] = None
                    return B, W
                continue
            if depth < cap:
                found = dfs(new, basis + [v], nxt)
                if found is not None:
                    rows[i] = None
                    return found
        rows[i] = None
        return None

    return dfs(engine.start(), [], first)
