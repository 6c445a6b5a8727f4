"""Clique-weight inference by integer partitioning.

Instead of one LP solution, the engine keeps every partial integral weight
vector compatible with the current pseudo-basis.  Adding a basis row ``i``
refines each vector through the constraints ``A[i][j]`` of every filled row
``j``: the weights already fixed on the shared columns are subtracted and
the remainder is split over the still-unset shared columns in all possible
ordered ways.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import STAR, Instance, IntegralityError, PartialAssignment, mask_bits


def compositions(s: int, parts: int):
    """Ordered ways to write ``s`` as ``parts`` non-negative integers, lexicographic.

    >>> list(compositions(3, 2))
    [(0, 3), (1, 2), (2, 1), (3, 0)]
    """
    if s < 0:
        return
    if parts == 0:
        if s == 0:
            yield ()
        return
    # stars and bars: choose where the parts - 1 separators go
    for bars in combinations(range(s + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(s + parts - 1 - prev - 1)
        yield tuple(out)


def update_ws(W: Sequence, I: Iterable[int], s, cap: Optional[int] = None) -> list:
    """Copies of ``W`` with positions ``I`` (all null) filled by each composition of ``s``.

    Empty for negative ``s``; ``[W]`` when ``I`` is empty and ``s == 0``.
    With ``cap`` set, fillings using a part larger than ``cap`` are skipped.
    """
    I = sorted(I)
    if any(W[q] is not None for q in I):
        raise ValueError("update_ws positions must be null")
    if s < 0:
        return []
    s = int(s)
    out = []
    for parts in compositions(s, len(I)):
        if cap is not None and any(p > cap for p in parts):
            continue
        C = list(W)
        for q, p in zip(I, parts):
            C[q] = p
        out.append(tuple(C))
    return out


def relevant_indices(inst: Instance, Btilde) -> set:
    """Columns shared by some pair of filled rows whose matrix entry is not a wildcard."""
    rows = Btilde.rows if isinstance(Btilde, PartialAssignment) else Btilde
    filled = [(i, r) for i, r in enumerate(rows) if r is not None]
    acc = 0
    for a, (i, bi) in enumerate(filled):
        for j, bj in filled[a:]:
            if inst.A[i][j] is not STAR:
                acc |= bi & bj
    return set(mask_bits(acc))


def infer_cliq_wts_ip(inst: Instance, Btilde, Ws: Sequence, i: int, cap: Optional[int] = None) -> list:
    """Refine the weight set ``Ws`` after row ``i`` of ``Btilde`` was filled.

    Each constraint of row ``i`` against a filled row ``j`` (``j == i`` on a
    fixed diagonal) is applied in index order; the null positions are taken
    from each vector as it is being expanded, so values set by an earlier
    constraint are never overwritten.
    """
    rows = Btilde.rows if isinstance(Btilde, PartialAssignment) else Btilde
    Ai = inst.A[i]
    bi = rows[i]
    targets = [(j, bi & rows[j]) for j in range(len(rows)) if rows[j] is not None and Ai[j] is not STAR]
    out = []
    for W in Ws:
        queue = [tuple(W)]
        for j, P in targets:
            shared = mask_bits(P)
            nxt = []
            for S in queue:
                fixed = sum((S[f] for f in shared if S[f] is not None), 0)
                X = [f for f in shared if S[f] is None]
                nxt.extend(update_ws(S, X, Ai[j] - fixed, cap))
            queue = nxt
            if not queue:
                break
        out.extend(queue)
    return out


class IpEngine:
    """Search engine keeping the full list of compatible partial weight vectors."""

    name = "ip"

    def __init__(self, inst: Instance, cap_weights: bool = False):
        if not inst.is_integral():
            raise IntegralityError("integral weights required; use the LP solver for fractional data")
        self.inst = inst
        self.cap = int(inst.max_entry()) if cap_weights else None

    def start(self):
        return [(None,) * self.inst.k]

    def extend(self, state, rows, i: int):
        S = infer_cliq_wts_ip(self.inst, rows, state, i, self.cap)
        return S or None

    def weights(self, state):
        return state[0]

    def final(self, state):
        return [0 if w is None else w for w in state[0]]


def clique_decomp_ip(inst: Instance, cap_weights: bool = False, **search_opts):
    """Decide an integral instance with integer-partition weight inference."""
    from .search import drive_search

    return drive_search(inst, IpEngine(inst, cap_weights), **search_opts)
