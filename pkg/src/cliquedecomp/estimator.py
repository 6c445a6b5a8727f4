"""scikit-learn style front end.

``WeightedCliqueDecomposition().fit(A)`` decomposes a symmetric non-negative
matrix ``A`` into weighted cliques.  ``transform`` returns the membership
matrix ``B`` (vertices by cliques) and ``weights_`` holds the clique
weights, so ``B @ diag(weights_) @ B.T`` reproduces ``A`` off the diagonal
(and on it, when ``diagonal="fixed"``).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .core import EXACT, FLOAT, DEFAULT_EPS, AnnotatedGraph, normalize_number
from .pipeline import ALGORITHMS, YES, solve_graph


class WeightedCliqueDecomposition(TransformerMixin, BaseEstimator):
    """Exact decomposition of a weighted adjacency matrix into at most ``n_cliques`` cliques.

    Parameters
    ----------
    n_cliques : int or None
        Clique budget ``k``.  ``None`` tries ``0, 1, ..., max_cliques`` and
        keeps the first budget that succeeds.
    algorithm : {"lp", "ip", "wecp", "milp"}
        Weight-inference engine; ``wecp`` needs ``total_weight``.
    total_weight : int or None
        Budget ``K`` for the unweighted baseline.
    diagonal : {"wildcard", "fixed"}
        ``wildcard`` ignores the diagonal; ``fixed`` requires each vertex's
        clique weights to sum to its diagonal entry (NaN still means wildcard).
    mode : {"exact", "float"}
    eps : float
        Tolerance used in float mode.
    timeout : float or None
        Seconds per solve.
    max_cliques : int
        Upper end of the budget sweep when ``n_cliques`` is ``None``.
    symmetry_breaking, deepening, preprocess, kernel : bool
        Pipeline switches.
    """

    def __init__(
        self,
        n_cliques=None,
        algorithm="lp",
        total_weight=None,
        diagonal="wildcard",
        mode=EXACT,
        eps=DEFAULT_EPS,
        timeout=None,
        max_cliques=8,
        symmetry_breaking=True,
        deepening=True,
        preprocess=True,
        kernel=True,
    ):
        self.n_cliques = n_cliques
        self.algorithm = algorithm
        self.total_weight = total_weight
        self.diagonal = diagonal
        self.mode = mode
        self.eps = eps
        self.timeout = timeout
        self.max_cliques = max_cliques
        self.symmetry_breaking = symmetry_breaking
        self.deepening = deepening
        self.preprocess = preprocess
        self.kernel = kernel

    def _validate_params(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.diagonal not in ("wildcard", "fixed"):
            raise ValueError(f"diagonal must be 'wildcard' or 'fixed', got {self.diagonal!r}")
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"mode must be '{EXACT}' or '{FLOAT}', got {self.mode!r}")
        if self.algorithm == "wecp" and self.total_weight is None:
            raise ValueError("algorithm='wecp' needs total_weight")
        if self.n_cliques is not None and (not isinstance(self.n_cliques, (int, np.integer)) or self.n_cliques < 0):
            raise ValueError(f"n_cliques must be a non-negative integer or None, got {self.n_cliques!r}")

    def _graph(self, X) -> AnnotatedGraph:
        exact_input = isinstance(X, (list, tuple)) and any(
            isinstance(a, Fraction) for row in X for a in (row if isinstance(row, (list, tuple)) else ())
        )
        arr = check_array(X, dtype=object if exact_input else "numeric", ensure_all_finite=False)
        n, m = arr.shape
        if n != m:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        diag_nan = np.array([_isnan(arr[i, i]) for i in range(n)], dtype=bool)
        off = arr.copy()
        for i in range(n):
            off[i, i] = 0
        if any(_isnan(a) for a in off.ravel()):
            raise ValueError("NaN is only allowed on the diagonal")
        if exact_input:
            bad = any(off[i, j] != off[j, i] for i in range(n) for j in range(i + 1, n))
        else:
            bad = not np.allclose(off, off.T, rtol=0, atol=self.eps if self.mode == FLOAT else 0)
        if bad:
            raise ValueError("matrix must be symmetric")
        if any(a < 0 for a in off.ravel()):
            raise ValueError("matrix entries must be non-negative")
        edges = {}
        for i in range(n):
            for j in range(i + 1, n):
                if off[i, j] != 0:
                    edges[(i, j)] = normalize_number(arr[i, j].item() if hasattr(arr[i, j], "item") else arr[i, j], self.mode)
        annotated = {}
        if self.diagonal == "fixed":
            for i in range(n):
                if not diag_nan[i]:
                    a = arr[i, i]
                    if a < 0:
                        raise ValueError("diagonal entries must be non-negative")
                    annotated[i] = normalize_number(a.item() if hasattr(a, "item") else a, self.mode)
        return AnnotatedGraph(n, edges, annotated)

    def fit(self, X, y=None):
        """Decompose ``X``; sets ``status_``, ``membership_``, ``weights_`` and ``n_cliques_``."""
        self._validate_params()
        g = self._graph(X)
        self.n_features_in_ = g.n
        opts = dict(mode=self.mode, eps=self.eps, timeout=self.timeout,
                    symmetry_breaking=self.symmetry_breaking, deepening=self.deepening,
                    use_preprocess=self.preprocess,
                    use_kernel=self.kernel)
        if self.algorithm == "wecp":
            res = solve_graph(g, alg="wecp", K=int(self.total_weight), **opts)
            budget = None
        elif self.n_cliques is not None:
            budget = int(self.n_cliques)
            res = solve_graph(g, budget, self.algorithm, **opts)
        else:
            for budget in range(0, self.max_cliques + 1):
                res = solve_graph(g, budget, self.algorithm, **opts)
                if res.status != "no":
                    break
        self.status_ = res.status
        self.budget_ = budget
        self.times_ = dict(res.time_ms)
        self.n_ker_ = res.n_ker
        if res.status == YES:
            cliques = sorted(res.decomposition.cliques, key=lambda cw: (sorted(cw[0]), cw[1]))
            self.decomposition_ = res.decomposition
            self.n_cliques_ = len(cliques)
            B = np.zeros((g.n, len(cliques)), dtype=np.int8)
            for q, (c, _) in enumerate(cliques):
                B[sorted(c), q] = 1
            self.membership_ = B
            self.weights_exact_ = [w for _, w in cliques]
            self.weights_ = np.array([float(w) for w in self.weights_exact_], dtype=float)
        else:
            self.decomposition_ = None
            self.n_cliques_ = None
            self.membership_ = None
            self.weights_exact_ = None
            self.weights_ = None
        return self

    def transform(self, X):
        """Membership matrix ``B`` of the fitted decomposition (``X`` must match the fitted size)."""
        check_is_fitted(self, "status_")
        n = np.shape(X)[0]
        if n != self.n_features_in_:
            raise ValueError(f"fitted on {self.n_features_in_} vertices, got {n}")
        return self._membership()

    def _membership(self):
        check_is_fitted(self, "status_")
        if self.membership_ is None:
            raise ValueError(f"no decomposition available (status: {self.status_})")
        return self.membership_.copy()

    def reconstruct(self):
        """``B diag(w) B^T`` as a float array."""
        B = self._membership()
        return B @ np.diag(self.weights_) @ B.T


def _isnan(a) -> bool:
    try:
        return bool(np.isnan(a))
    except TypeError:
        return False
