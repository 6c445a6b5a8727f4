"""Twin-block kernel: at most ``2^k`` blocks of at most ``2^k`` rows each.

Two rows belong to the same block when they are equal entry by entry up to
wildcards.  More than ``2^k`` blocks means no solution exists; a block with
more than ``2^k`` rows shrinks to one representative whose diagonal takes
the value shared by the block's members, and a solution of the reduced
matrix lifts back by copying the representative's row to the whole block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import EXACT, STAR, Instance, PartialAssignment


@dataclass(frozen=True)
class KernelResult:
    """Reduced instance plus what is needed to lift its solutions.

    ``kept`` lists the original indices of the reduced rows in order;
    ``blocks`` partitions all original indices; ``representative`` maps each
    block index to its surviving original row; ``lift_data`` records the
    ``(i, j, members)`` choice for each collapsed block.
    """

    original: Instance
    reduced: Instance
    kept: tuple
    blocks: tuple
    representative: tuple
    lift_data: tuple

    @property
    def n_ker(self) -> int:
        return self.reduced.n


def _coded_matrix(inst: Instance):
    """Numeric array with wildcards marked, comparable with ``==`` or a tolerance."""
    n = inst.n
    if inst.mode == EXACT:
        codes: dict = {}
        M = np.empty((n, n), dtype=np.int64)
        for i, row in enumerate(inst.A):
            for j, a in enumerate(row):
                M[i, j] = -1 if a is STAR else codes.setdefault(a, len(codes))
        return M, M == -1
    M = np.array([[np.nan if a is STAR else float(a) for a in row] for row in inst.A], dtype=float)
    return M, np.isnan(M)


def compute_blocks(inst: Instance, limit: Optional[int] = None) -> list:
    """Partition row indices into star-equality classes, in order of first member.

    Each row is compared with the first member of every existing block.
    Stops early (returning ``limit + 1`` blocks) once ``limit`` is exceeded.
    """
    n = inst.n
    if n == 0:
        return []
    M, star = _coded_matrix(inst)
    exact = inst.mode == EXACT
    reps: list = []
    blocks: list = []
    for i in range(n):
        if reps:
            R = M[reps]
            Rs = star[reps]
            if exact:
                same = R == M[i]
            else:
                same = np.abs(R - M[i]) <= inst.eps
            ok = np.all(same | Rs | star[i], axis=1)
            hit = np.flatnonzero(ok)
            if hit.size:
                blocks[hit[0]].append(i)
                continue
        reps.append(i)
        blocks.append([i])
        if limit is not None and len(blocks) > limit:
            return blocks
    return blocks


def kernelize(inst: Instance, k: Optional[int] = None):
    """Apply both reduction rules; a :class:`KernelResult`, or ``None`` for NO.

    ``k`` overrides the instance budget as the kernel parameter (the
    unweighted baseline kernelises with the total weight).
    """
    k = inst.k if k is None else k
    bound = 1 << k if k < 62 else None
    blocks = compute_blocks(inst, bound)
    if bound is not None and len(blocks) > bound:
        return None
    drop: set = set()
    diag: dict = {}
    lift = []
    reps = []
    for D in blocks:
        reps.append(D[0])
        if bound is not None and len(D) > bound:
            i, j = D[0], D[1]
            drop.update(D[1:])
            diag[i] = inst.A[i][j]
            lift.append((i, j, tuple(D)))
    kept = tuple(v for v in range(inst.n) if v not in drop)
    A = []
    for u in kept:
        row = []
        for v in kept:
            row.append(diag[u] if u == v and u in diag else inst.A[u][v])
        A.append(tuple(row))
    reduced = Instance(tuple(A), inst.k, inst.mode, inst.eps)
    return KernelResult(
        original=inst,
        reduced=reduced,
        kept=kept,
        blocks=tuple(tuple(D) for D in blocks),
        representative=tuple(reps),
        lift_data=tuple(lift),
    )


def lift(kr: KernelResult, B: PartialAssignment, W):
    """Lift a reduced solution to the original rows: block members copy their representative."""
    if B.n != kr.reduced.n:
        raise ValueError(f"assignment has {B.n} rows, kernel has {kr.reduced.n}")
    row_of = dict(zip(kr.kept, B.rows))
    rows = [None] * kr.original.n
    for D in kr.blocks:
        for u in D:
            rows[u] = row_of.get(u)
    for i, _, members in kr.lift_data:
        for u in members:
            rows[u] = row_of[i]
    return PartialAssignment(B.k, tuple(rows)), list(W)


def format_lift_data(kr: KernelResult, labels=None) -> str:
    """Sidecar text: one ``rep i j members...`` line per collapsed block."""
    name = (lambda v: labels[v]) if labels else str
    lines = []
    for i, j, members in kr.lift_data:
        lines.append(f"rep {name(i)} {name(j)} " + " ".join(name(u) for u in members))
    return "".join(line + "\n" for line in lines)
