"""Brute-force ground truth for tiny instances.

The decision procedure is deliberately independent of the pseudo-basis
machinery: it enumerates sets of at most ``k`` clique columns and solves the
full equality system for non-negative weights with its own exact
elimination (every feasible system has a basic solution, so trying each
linearly independent column subset is complete).

Only columns whose support is a clique of positive edges can carry positive
weight, and single-vertex columns only matter on fixed diagonals, so those
are the candidates.  Candidate sets are built edge by edge: the first edge
not yet covered must lie in one of the chosen cliques; once every edge is
covered the remaining budget is spent on arbitrary extra candidates.
Sets are canonical (no repeated columns, order ignored), which is the
column-permutation quotient of the full ``{0,1}^{n x k}`` enumeration.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from .core import STAR, Instance, IntegralityError, PartialAssignment, mask_bits

MAX_N = 12
MAX_K = 4


class OracleLimitError(ValueError):
    pass


# --------------------------------------------------------------------------
# exact non-negative feasibility by elimination and vertex enumeration


def _solve_square(rows: list, rhs: list):
    """Unique solution of a full-column-rank system by Gauss-Jordan, or ``None``.

    ``rows`` is ``m x r`` with ``m >= r``; returns ``None`` if the columns are
    dependent or the system is inconsistent.
    """
    m = len(rows)
    r = len(rows[0]) if rows else 0
    M = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    piv_row = 0
    for c in range(r):
        p = next((i for i in range(piv_row, m) if M[i][c] != 0), None)
        if p is None:
            return None
        M[piv_row], M[p] = M[p], M[piv_row]
        pv = M[piv_row][c]
        M[piv_row] = [x / pv for x in M[piv_row]]
        for i in range(m):
            if i != piv_row and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[piv_row])]
        piv_row += 1
    for i in range(piv_row, m):
        if M[i][-1] != 0:
            return None
    return [M[i][-1] for i in range(r)]


def nonneg_solution(C: Sequence[Sequence], b: Sequence, nvars: int) -> Optional[list]:
    """Some ``x >= 0`` with ``C x = b``, found by trying every column subset."""
    if not C:
        return [Fraction(0)] * nvars
    for size in range(0, min(nvars, len(C)) + 1):
        for cols in combinations(range(nvars), size):
            if size == 0:
                if all(bi == 0 for bi in b):
                    return [Fraction(0)] * nvars
                continue
            sub = [[row[c] for c in cols] for row in C]
            x = _solve_square(sub, list(b))
            if x is None or any(v < 0 for v in x):
                continue
            full = [Fraction(0)] * nvars
            for c, v in zip(cols, x):
                full[c] = v
            return full
    return None


def _system(inst: Instance, masks: Sequence[int]):
    """Equality system over the chosen columns: one row per non-wildcard entry."""
    n = inst.n
    C, b = [], []
    for i in range(n):
        for j in range(i, n):
            a = inst.A[i][j]
            if a is STAR:
                continue
            C.append([1 if (m >> i) & 1 and (m >> j) & 1 else 0 for m in masks])
            b.append(a)
    return C, b


def _compress(C, b):
    """Merge duplicate rows; ``(None, None)`` when two copies disagree or ``0 = b`` with ``b != 0``."""
    seen: dict = {}
    for row, bi in zip(C, b):
        key = tuple(row)
        if key in seen:
            if seen[key] != bi:
                return None, None
        elif not any(key):
            if bi != 0:
                return None, None
        else:
            seen[key] = bi
    return [list(r) for r in seen], list(seen.values())


def _integral_solution(C, b, nvars: int, wmax: int):
    for x in product(range(wmax + 1), repeat=nvars):
        if all(sum(c * v for c, v in zip(row, x)) == bi for row, bi in zip(C, b)):
            return list(x)
    return None


# --------------------------------------------------------------------------
# candidate enumeration


def _candidates(inst: Instance) -> list:
    """Column supports (as vertex bit masks) that may carry positive weight."""
    n = inst.n
    pos = [0] * n
    for i in range(n):
        for j in range(n):
            if i != j and inst.A[i][j] != 0:
                pos[i] |= 1 << j
    cliques = []

    def grow(current: int, allowed: int):
        # enumerate every clique exactly once by increasing vertex index
        while allowed:
            low = allowed & -allowed
            v = low.bit_length() - 1
            allowed ^= low
            c = current | low
            if c & (c - 1):
                cliques.append(c)
            grow(c, allowed & pos[v])

    grow(0, (1 << n) - 1)
    for i in range(n):
        a = inst.A[i][i]
        if a is not STAR and a != 0:
            cliques.append(1 << i)
    cliques.sort(key=lambda c: (bin(c).count("1"), c))
    return cliques


def _edges(inst: Instance) -> list:
    return [
        (i, j)
        for i in range(inst.n)
        for j in range(i + 1, inst.n)
        if inst.A[i][j] != 0
    ]


def _check_limits(inst: Instance, max_n: int, max_k: int):
    if inst.n > max_n or inst.k > max_k:
        raise OracleLimitError(
            f"oracle limited to n <= {max_n}, k <= {max_k} (got n={inst.n}, k={inst.k})"
        )


def oracle_decide(
    inst: Instance,
    integral: bool = False,
    max_n: int = MAX_N,
    max_k: int = MAX_K,
):
    """Brute-force decision; ``(B, W)`` for YES, ``None`` for NO.

    With ``integral`` the weights are restricted to integers in
    ``[0, max entry]`` (the integral-weight version of the problem).
    """
    _check_limits(inst, max_n, max_k)
    if integral and not inst.is_integral():
        raise IntegralityError("integral oracle needs integral data")
    n, k = inst.n, inst.k
    wmax = int(inst.max_entry()) if integral else 0
    cands = _candidates(inst)
    edges = _edges(inst)
    covering = {e: [c for c in cands if (c >> e[0]) & 1 and (c >> e[1]) & 1] for e in edges}

    def feasible(chosen: list):
        C, b = _compress(*_system(inst, chosen))
        if C is None:
            return None
        if integral:
            return _integral_solution(C, b, len(chosen), wmax)
        return nonneg_solution(C, b, len(chosen))

    def finish(chosen: list):
        W = feasible(chosen)
        if W is not None:
            return chosen, W
        spare = k - len(chosen)
        pool = [c for c in cands if c not in chosen]
        for size in range(1, spare + 1):
            for extra in combinations(pool, size):
                sel = chosen + list(extra)
                W = feasible(sel)
                if W is not None:
                    return sel, W
        return None

    def cover(chosen: list):
        e = next(
            (e for e in edges if not any((c >> e[0]) & 1 and (c >> e[1]) & 1 for c in chosen)),
            None,
        )
        if e is None:
            return finish(chosen)
        if len(chosen) == k:
            return None
        for c in covering[e]:
            if c in chosen:
                continue
            found = cover(chosen + [c])
            if found is not None:
                return found
        return None

    found = cover([])
    if found is None:
        return None
    masks, W = found
    rows = [0] * n
    for q, m in enumerate(masks):
        for v in mask_bits(m):
            rows[v] |= 1 << q
    weights = [w.numerator if isinstance(w, Fraction) and w.denominator == 1 else w for w in W]
    weights += [0] * (k - len(weights))
    return PartialAssignment(k, tuple(rows)), weights


def oracle_weightsets(inst: Instance, Btilde, wmax: Optional[int] = None, max_k: int = 3) -> set:
    """Every integral weight vector on the relevant columns of ``Btilde`` meeting all pair constraints.

    Vectors are ``k``-tuples with ``None`` off the relevant columns.
    """
    rows = Btilde.rows if isinstance(Btilde, PartialAssignment) else Btilde
    k = Btilde.k if isinstance(Btilde, PartialAssignment) else inst.k
    if k > max_k:
        raise OracleLimitError(f"oracle_weightsets limited to k <= {max_k}")
    if not inst.is_integral():
        raise IntegralityError("integral data required")
    wmax = int(inst.max_entry()) if wmax is None else wmax
    if wmax > 6:
        raise OracleLimitError("oracle_weightsets limited to w_max <= 6")
    filled = [i for i, r in enumerate(rows) if r is not None]
    pairs = []
    for a, i in enumerate(filled):
        for j in filled[a:]:
            if inst.A[i][j] is not STAR:
                pairs.append((rows[i] & rows[j], inst.A[i][j]))
    relevant = sorted({q for m, _ in pairs for q in range(k) if (m >> q) & 1})
    out = set()
    for vals in product(range(wmax + 1), repeat=len(relevant)):
        W = [None] * k
        for q, x in zip(relevant, vals):
            W[q] = x
        if all(sum(W[q] for q in range(k) if (m >> q) & 1) == a for m, a in pairs):
            out.add(tuple(W))
    return out
