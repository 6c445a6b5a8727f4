"""End-to-end driver: preprocess, kernelize, search, lift, reassemble, verify.

Stage wall times are recorded with a monotonic clock.  A timeout covers the
whole run and is enforced cooperatively by the search, which raises
:class:`~cliquedecomp.search.SearchTimeout`; the result is then reported as
``"timeout"`` rather than raised.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    EXACT,
    FLOAT,
    DEFAULT_EPS,
    AnnotatedGraph,
    Decomposition,
    InstanceError,
    _graph_matrix,
    decomposition_from,
    edge_violation,
    is_integral,
)
from .kernel import kernelize, lift
from .preprocess import preprocess, reassemble
from .search import SearchStats, SearchTimeout, drive_search

ALGORITHMS = ("lp", "ip", "wecp", "milp")
YES, NO, TIMEOUT = "yes", "no", "timeout"


class StageError(RuntimeError):
    """An exception raised inside a pipeline stage, tagged with the stage name."""

    def __init__(self, stage: str, err: BaseException):
        super().__init__(f"[{stage}] {type(err).__name__}: {err}")
        self.stage = stage
        self.error = err


@dataclass
class PipelineResult:
    status: str
    decomposition: Optional[Decomposition] = None
    times: dict = field(default_factory=dict)
    n_ker: Optional[int] = None
    decided_by: str = ""
    removed: int = 0
    budget_used: Optional[int] = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def time_ms(self) -> dict:
        return {s: 1000.0 * t for s, t in self.times.items()}


def merge_duplicates(d: Decomposition) -> Decomposition:
    """Combine cliques with equal vertex sets by adding their weights."""
    acc: dict = {}
    for c, w in d.cliques:
        acc[c] = acc.get(c, 0) + w
    return Decomposition(tuple((c, w) for c, w in acc.items() if w != 0))


def clean(d: Decomposition, g: AnnotatedGraph) -> Decomposition:
    """Merge duplicates and drop single-vertex cliques on vertices without annotation."""
    d = merge_duplicates(d)
    return Decomposition(
        tuple((c, w) for c, w in d.cliques if len(c) > 1 or next(iter(c)) in g.annotated)
    )


def same_family(a: Decomposition, b: Decomposition, g: AnnotatedGraph) -> bool:
    """Equal weighted clique families, ignoring order and trivial singletons."""
    return clean(a, g).canonical() == clean(b, g).canonical()


def _engine(alg: str, inst):
    if alg == "lp":
        from .lp import LpEngine

        return LpEngine(inst)
    if alg == "ip":
        from .ip import IpEngine

        return IpEngine(inst)
    raise ValueError(f"unknown algorithm {alg!r}")


def solve_graph(
    g: AnnotatedGraph,
    k: Optional[int] = None,
    alg: str = "lp",
    *,
    K: Optional[int] = None,
    mode: str = EXACT,
    eps: float = DEFAULT_EPS,
    timeout: Optional[float] = None,
    symmetry_breaking: bool = True,
    use_preprocess: bool = True,
    use_kernel: bool = True,
    deepening: bool = True,
) -> PipelineResult:
    """Decide ``g`` with budget ``k`` (or total weight ``K`` for ``alg="wecp"``).

    Returns a :class:`PipelineResult` whose decomposition, when present, has
    been verified against ``g`` itself.

    With ``deepening`` the budgets ``0, 1, ..., k`` are tried in turn and the
    first YES is returned.  A decomposition with fewer cliques is also one
    for ``k``, so the decision is unchanged, while searches below the optimum
    prune hard and searches far above it do not.
    """
    if alg not in ALGORITHMS:
        raise ValueError(f"alg must be one of {ALGORITHMS}, got {alg!r}")
    wecp = alg == "wecp"
    budget = K if wecp else k
    if budget is None or not isinstance(budget, int) or budget < 0:
        raise InstanceError(f"{'K' if wecp else 'k'} must be a non-negative integer, got {budget!r}")
    if wecp and not g.is_integral():
        raise InstanceError("the unweighted baseline needs integral weights")

    t_start = time.monotonic()
    deadline = None if timeout is None else t_start + timeout
    res = PipelineResult(status=NO)
    times = res.times

    def stage(name, fn, *args, **kw):
        t = time.monotonic()
        try:
            return fn(*args, **kw)
        except SearchTimeout:
            raise
        except Exception as err:  # noqa: BLE001 - re-raised with the stage tag
            raise StageError(name, err) from err
        finally:
            times[name] = times.get(name, 0.0) + time.monotonic() - t

    def finish(status, decided_by, d=None):
        res.status = status
        res.decided_by = decided_by
        for s in ("preprocess", "kernel", "decompose"):
            times.setdefault(s, 0.0)
        if d is not None:
            d = clean(d, g)
            bad = stage("verify", edge_violation, g, d, eps if mode == FLOAT else None)
            if bad is not None:
                raise StageError("verify", AssertionError(f"solution violates {bad}"))
            res.decomposition = d
        times["total"] = time.monotonic() - t_start
        return res

    # preprocessing
    if use_preprocess:
        cost = (lambda w: int(w)) if wecp else None
        pre = stage("preprocess", preprocess, g, budget, cost)
        if pre is None:
            return finish(NO, "preprocess")
        res.removed = len(pre.removed)
        sub_g, sub_budget = pre.reduced, pre.k_reduced
    else:
        times["preprocess"] = 0.0
        pre = None
        sub_g, sub_budget = g, budget

    def done(sub_d):
        d = reassemble(pre, sub_d) if pre is not None else sub_d
        return finish(YES, res.decided_by or "search", d)

    if sub_g.m == 0 and not any(w != 0 for w in sub_g.annotated.values()):
        res.n_ker = 0
        res.decided_by = "preprocess"
        return done(Decomposition())

    # kernel and search, one budget at a time when deepening
    budgets = range(0, sub_budget + 1) if deepening and alg != "milp" else (sub_budget,)
    for b in budgets:
        try:
            status, found, kr = _attempt(sub_g, b, alg, mode, eps, use_kernel, deadline,
                                         symmetry_breaking, res, stage)
        except SearchTimeout:
            return finish(TIMEOUT, "timeout")
        if status == YES:
            break
    else:
        return finish(NO, status)
    res.budget_used = b
    B, W = found
    if kr is not None:
        B, W = lift(kr, B, W)
    return done(decomposition_from(B, W))


def _attempt(sub_g, b, alg, mode, eps, use_kernel, deadline, symmetry_breaking, res, stage):
    """Kernelize and search at budget ``b``: ``(YES, (B, W), kernel)`` or ``(decider, None, None)``."""
    inst = _graph_matrix(sub_g, b, mode, eps)
    if use_kernel:
        kr = stage("kernel", kernelize, inst, b)
        if kr is None:
            return "kernel", None, None
        red = kr.reduced
    else:
        times = res.times
        times.setdefault("kernel", 0.0)
        kr, red = None, inst
    res.n_ker = red.n
    found = stage("decompose", _decompose, red, alg, b, deadline, symmetry_breaking, res.stats)
    if found is None:
        return "search", None, None
    return YES, found, kr


def _decompose(inst, alg, budget, deadline, symmetry_breaking, stats):
    if alg == "wecp":
        from .baseline import solve_wecp

        return solve_wecp(inst, budget, symmetry_breaking=symmetry_breaking, deadline=deadline, stats=stats)
    if alg == "milp":
        from .milp import decide_milp

        limit = None if deadline is None else deadline - time.monotonic()
        if limit is not None and limit <= 0:
            raise SearchTimeout()
        return decide_milp(inst, limit)
    return drive_search(inst, _engine(alg, inst), symmetry_breaking=symmetry_breaking, deadline=deadline, stats=stats)


def sweep_k(g: AnnotatedGraph, lo: int, hi: int, alg: str = "lp", **opts):
    """Solve with budgets ``lo..hi`` in order; ``(budget, result)`` of the first YES, else the last result.

    For ``alg="wecp"`` the swept value is ``K``.
    """
    if lo > hi:
        raise ValueError(f"empty sweep range {lo}..{hi}")
    res = None
    for b in range(lo, hi + 1):
        if alg == "wecp":
            res = solve_graph(g, alg=alg, K=b, **opts)
        else:
            res = solve_graph(g, b, alg, **opts)
        if res.status == YES:
            return b, res
    return hi, res


def total_weight_budget(g: AnnotatedGraph, truth: Decomposition) -> int:
    """``K`` implied by a decomposition (sum of clique weights), as an int."""
    K = truth.total_weight()
    if not is_integral(K):
        raise InstanceError("total weight is not an integer")
    return int(K)
