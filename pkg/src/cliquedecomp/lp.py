"""Clique-weight inference by linear-programming feasibility.

The systems are tiny (``k`` variables, at most ``4k^2`` equality rows with
0/1 coefficients) so a textbook phase-one simplex with Bland's rule is
used.  Exact mode pivots on an integer tableau; float mode runs the same
steps with an ``eps`` pivot tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import DEFAULT_EPS, EXACT, STAR, Instance, PartialAssignment, mask_bits


@dataclass(frozen=True)
class LpSystem:
    """``sum(gamma[q] for q in mask) == rhs`` for each ``(mask, rhs)``; ``gamma >= 0``."""

    k: int
    constraints: tuple = ()

    def satisfied_by(self, gamma: Sequence, eps: Optional[float] = None) -> bool:
        if len(gamma) != self.k or any(g < 0 for g in gamma):
            return False
        for mask, rhs in self.constraints:
            lhs = sum((gamma[q] for q in mask_bits(mask)), 0)
            if (lhs != rhs) if eps is None else abs(lhs - rhs) > eps:
                return False
        return True


def _dedupe(sys: LpSystem, mode: str, eps: float):
    """Merge identical rows; ``None`` if two rows with equal masks disagree."""
    seen: dict = {}
    for mask, rhs in sys.constraints:
        if mask in seen:
            prev = seen[mask]
            if (prev != rhs) if mode == EXACT else abs(prev - rhs) > eps:
                return None
            continue
        if mask == 0:
            if (rhs != 0) if mode == EXACT else abs(rhs) > eps:
                return None
            continue
        seen[mask] = rhs
    return seen


def lp_feasible(sys: LpSystem, mode: str = EXACT, eps: float = DEFAULT_EPS):
    """A basic feasible ``gamma`` of the system, or ``None`` if infeasible.

    Non-basic variables are zero, so unconstrained weights come back as 0.
    """
    rows = _dedupe(sys, mode, eps)
    if rows is None:
        return None
    k = sys.k
    if not rows:
        return [0] * k
    if mode == EXACT:
        return _phase_one_int(k, sorted(rows.items()))
    return _phase_one_float(k, sorted(rows.items()), eps)


def _phase_one_int(k: int, rows: list):
    """Exact phase one on an integer tableau (fraction-free pivoting).

    Every row is kept integral by clearing denominators up front and
    replacing ``row`` with ``piv * row - f * pivot_row`` on each pivot; all
    multipliers are positive, so signs (all the simplex looks at) survive,
    and rows are divided by their gcd to keep the numbers small.
    """
    m = len(rows)
    width = k + m + 1
    T = []
    for r, (mask, rhs) in enumerate(rows):
        rhs = Fraction(rhs)
        d = rhs.denominator
        row = [0] * width
        for q in mask_bits(mask):
            row[q] = d
        row[k + r] = d
        row[-1] = rhs.numerator
        T.append(row)
    basis = [k + r for r in range(m)]
    # reduced costs of the artificial-sum objective, scaled by the common denominator D
    D = math.lcm(*(T[r][k + r] for r in range(m)))
    z = [0] * width
    for r in range(m):
        d = T[r][k + r]
        for j in range(k):
            if T[r][j]:
                z[j] -= D
        z[-1] -= T[r][-1] * (D // d)

    while True:
        enter = next((j for j in range(k + m) if z[j] < 0), None)
        if enter is None:
            break
        leave = None
        for r in range(m):
            a = T[r][enter]
            if a > 0:
                if leave is None:
                    leave = r
                    continue
                b_best, a_best = T[leave][-1], T[leave][enter]
                lhs, rhs_ = T[r][-1] * a_best, b_best * a
                if lhs < rhs_ or (lhs == rhs_ and basis[r] < basis[leave]):
                    leave = r
        if leave is None:
            break
        prow = T[leave]
        piv = prow[enter]
        for r in range(m):
            if r != leave:
                f = T[r][enter]
                if f:
                    T[r] = _reduce([piv * a - f * b for a, b in zip(T[r], prow)])
        f = z[enter]
        z = _reduce([piv * a - f * b for a, b in zip(z, prow)])
        basis[leave] = enter

    if z[-1] < 0:
        return None
    gamma = [0] * k
    for r, var in enumerate(basis):
        if var < k:
            g = Fraction(T[r][-1], T[r][var])
            gamma[var] = g.numerator if g.denominator == 1 else g
    return gamma


def _reduce(row: list) -> list:
    g = math.gcd(*row)
    return row if g <= 1 else [x // g for x in row]


def _phase_one_float(k: int, rows: list, eps: float):
    tol = eps
    m = len(rows)
    width = k + m + 1
    T = []
    for r, (mask, rhs) in enumerate(rows):
        row = [0.0] * width
        for q in mask_bits(mask):
            row[q] = 1.0
        row[k + r] = 1.0
        row[-1] = float(rhs)
        T.append(row)
    basis = [k + r for r in range(m)]
    z = [0.0] * width
    for j in range(k):
        z[j] = -sum(T[r][j] for r in range(m))
    z[-1] = -sum(T[r][-1] for r in range(m))

    while True:
        enter = next((j for j in range(k + m) if z[j] < -tol), None)
        if enter is None:
            break
        leave = None
        best = None
        for r in range(m):
            a = T[r][enter]
            if a > tol:
                ratio = T[r][-1] / a
                if best is None or ratio < best - tol or (
                    abs(ratio - best) <= tol and basis[r] < basis[leave]
                ):
                    best, leave = ratio, r
        if leave is None:
            break
        piv = T[leave][enter]
        prow = [x / piv for x in T[leave]]
        T[leave] = prow
        for r in range(m):
            if r != leave:
                f = T[r][enter]
                if f != 0:
                    T[r] = [a - f * b for a, b in zip(T[r], prow)]
        f = z[enter]
        z = [a - f * b for a, b in zip(z, prow)]
        basis[leave] = enter

    if -z[-1] > tol:
        return None
    gamma = [0.0] * k
    for r, var in enumerate(basis):
        if var < k:
            gamma[var] = T[r][-1]
    return [0.0 if abs(g) <= eps else float(g) for g in gamma]


def lp_system(inst: Instance, Btilde: PartialAssignment) -> LpSystem:
    """One equality per pair of filled rows (and per filled row on a fixed diagonal)."""
    rows = Btilde.rows if isinstance(Btilde, PartialAssignment) else Btilde
    filled = [(i, r) for i, r in enumerate(rows) if r is not None]
    cons = []
    for a, (i, bi) in enumerate(filled):
        Ai = inst.A[i]
        for j, bj in filled[a:]:
            if Ai[j] is STAR:
                continue
            cons.append((bi & bj, Ai[j]))
    k = Btilde.k if isinstance(Btilde, PartialAssignment) else inst.k
    return LpSystem(k, tuple(cons))


def infer_cliq_wts_lp(inst: Instance, Btilde: PartialAssignment):
    """Clique weights consistent with the filled rows of ``Btilde``, or ``None``."""
    return lp_feasible(lp_system(inst, Btilde), inst.mode, inst.eps)


class LpEngine:
    """Search engine state: the merged constraint rows plus a feasible weight vector.

    Extending by one row only adds that row's constraints.  Conflicting
    right-hand sides are rejected without solving, and the parent's weights
    are kept whenever they still satisfy everything (any feasible vector is
    as good as another for the search).  Solves are memoised on the
    constraint set.
    """

    name = "lp"

    def __init__(self, inst: Instance):
        self.inst = inst
        self.exact = inst.mode == EXACT
        self._memo: dict = {}

    def start(self):
        return {}, None

    def _same(self, a, b) -> bool:
        return a == b if self.exact else abs(a - b) <= self.inst.eps

    def extend(self, state, rows, i: int):
        cons, gamma = state
        Ai = self.inst.A[i]
        bi = rows[i]
        new = dict(cons)
        added = []
        for j, bj in enumerate(rows):
            if bj is None:
                continue
            a = Ai[j]
            if a is STAR:
                continue
            mask = bi & bj
            if mask in new:
                if not self._same(new[mask], a):
                    return None
                continue
            if mask == 0:
                if not self._same(a, 0):
                    return None
                continue
            new[mask] = a
            added.append(mask)
        if gamma is not None and all(self._same(_masked_sum(gamma, m), new[m]) for m in added):
            return new, gamma
        key = frozenset(new.items())
        if key not in self._memo:
            if len(self._memo) > 200_000:
                self._memo.clear()
            self._memo[key] = lp_feasible(LpSystem(self.inst.k, tuple(new.items())), self.inst.mode, self.inst.eps)
        g = self._memo[key]
        return None if g is None else (new, g)

    def weights(self, state):
        gamma = state[1]
        return [0] * self.inst.k if gamma is None else gamma

    def final(self, state):
        return list(self.weights(state))


def _masked_sum(gamma, mask: int):
    total = 0
    while mask:
        low = mask & -mask
        total += gamma[low.bit_length() - 1]
        mask ^= low
    return total


def clique_decomp_lp(inst: Instance, **search_opts):
    """Decide the instance with LP weight inference; ``(B, W)`` or ``None``."""
    from .search import drive_search

    return drive_search(inst, LpEngine(inst), **search_opts)
