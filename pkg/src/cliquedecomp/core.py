"""Domain types and the wildcard-equality semantics shared by every solver.

An instance is a symmetric matrix ``A`` whose off-diagonal entries are
non-negative weights and whose diagonal entries are either weights or the
wildcard :data:`STAR`.  A solution is a binary membership matrix ``B`` (one
column per clique) together with non-negative clique weights ``W`` such that
``B diag(W) B^T`` agrees with ``A`` everywhere except at wildcards.

Rows of ``B`` are stored as integer bit masks: bit ``q`` set means the vertex
belongs to clique ``q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

Number = Union[int, Fraction, float]

EXACT = "exact"
FLOAT = "float"
DEFAULT_EPS = 1e-9


class _Star:
    """The wildcard marker; equal (under ``star_eq``) to anything."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"

    def __reduce__(self):
        return (_Star, ())


STAR = _Star()


class InstanceError(ValueError):
    """Raised for malformed instances, assignments or weight vectors."""


class IntegralityError(InstanceError):
    """Raised when an integral-only solver receives fractional data."""


def normalize_number(x, mode: str = EXACT) -> Number:
    """Coerce ``x`` into the arithmetic of ``mode``.

    Exact mode keeps integers as ``int`` (fast path) and everything else as
    ``Fraction``.  Strings such as ``"1.5"`` and ``"3/2"`` are accepted.
    """
    if mode == FLOAT:
        if isinstance(x, str):
            return float(Fraction(x))
        return float(x)
    if isinstance(x, bool):
        raise InstanceError(f"not a weight: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InstanceError(f"non-finite weight {x!r}")
        f = Fraction(x).limit_denominator(10**12)
    else:
        f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


def is_integral(x: Number) -> bool:
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        return x.denominator == 1
    return float(x).is_integer()


def star_eq(a, b, mode: str = EXACT, eps: float = DEFAULT_EPS) -> bool:
    """Wildcard equality: true if either side is ``STAR`` or the values agree."""
    if a is STAR or b is STAR:
        return True
    if mode == FLOAT:
        return abs(a - b) <= eps
    return a == b


def format_number(x: Number) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


# --------------------------------------------------------------------------
# bit-vector helpers


def mask_from_vector(v: Sequence[int]) -> int:
    m = 0
    for q, bit in enumerate(v):
        if bit not in (0, 1):
            raise InstanceError(f"binary entry expected, got {bit!r}")
        if bit:
            m |= 1 << q
    return m


def vector_from_mask(m: int, k: int) -> tuple[int, ...]:
    return tuple((m >> q) & 1 for q in range(k))


def mask_bits(m: int) -> list[int]:
    out = []
    q = 0
    while m:
        if m & 1:
            out.append(q)
        m >>= 1
        q += 1
    return out


# --------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Instance:
    """Symmetric wildcard-diagonal matrix plus clique budget ``k``."""

    A: tuple
    k: int
    mode: str = EXACT
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if self.mode not in (EXACT, FLOAT):
            raise InstanceError(f"unknown arithmetic mode {self.mode!r}")
        if not isinstance(self.k, int) or self.k < 0:
            raise InstanceError(f"budget must be a non-negative integer, got {self.k!r}")
        rows = tuple(
            tuple(a if a is STAR else normalize_number(a, self.mode) for a in row)
            for row in self.A
        )
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InstanceError("matrix is not square")
            for j, a in enumerate(row):
                if a is STAR:
                    if i != j:
                        raise InstanceError(f"wildcard off the diagonal at ({i}, {j})")
                    continue
                if a < 0:
                    raise InstanceError(f"negative entry at ({i}, {j})")
                if j < i and not star_eq(a, rows[j][i], self.mode, self.eps):
                    raise InstanceError(f"matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "A", rows)

    @property
    def n(self) -> int:
        return len(self.A)

    def eq(self, a, b) -> bool:
        return star_eq(a, b, self.mode, self.eps)

    def with_k(self, k: int) -> "Instance":
        return Instance(self.A, k, self.mode, self.eps)

    def max_entry(self) -> Number:
        vals = [a for row in self.A for a in row if a is not STAR]
        return max(vals) if vals else 0

    def is_integral(self) -> bool:
        return all(a is STAR or is_integral(a) for row in self.A for a in row)


@dataclass
class AnnotatedGraph:
    """Edge-weighted graph with optional vertex annotations.

    ``edges`` maps ``(u, v)`` with ``u < v`` to a positive weight; pairs not
    listed are non-adjacent (weight 0).  ``annotated`` maps a vertex to the
    total clique weight it must carry.  ``labels`` keeps the user's vertex
    names in index order.
    """

    n: int
    edges: dict = field(default_factory=dict)
    annotated: dict = field(default_factory=dict)
    labels: Optional[list] = None

    def __post_init__(self):
        clean = {}
        for (u, v), w in dict(self.edges).items():
            if u == v:
                raise InstanceError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InstanceError(f"edge ({u}, {v}) out of range for n={self.n}")
            key = (min(u, v), max(u, v))
            if key in clean:
                raise InstanceError(f"duplicate edge {key}")
            if w < 0:
                raise InstanceError(f"negative weight on edge {key}")
            if w != 0:
                clean[key] = w
        self.edges = clean
        for v, w in self.annotated.items():
            if not 0 <= v < self.n:
                raise InstanceError(f"annotated vertex {v} out of range")
            if w < 0:
                raise InstanceError(f"negative annotation on vertex {v}")
        if self.labels is None:
            self.labels = [str(i) for i in range(self.n)]
        elif len(self.labels) != self.n or len(set(self.labels)) != self.n:
            raise InstanceError("labels must be distinct, one per vertex")

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight(self, u: int, v: int) -> Number:
        return self.edges.get((min(u, v), max(u, v)), 0)

    def adjacency(self) -> list[set]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def is_integral(self) -> bool:
        return all(is_integral(w) for w in self.edges.values()) and all(
            is_integral(w) for w in self.annotated.values()
        )


@dataclass(frozen=True)
class PartialAssignment:
    """``n`` rows over ``k`` cliques; a row is a bit mask or ``None`` (null)."""

    k: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        limit = 1 << self.k
        for r in rows:
            if r is not None and not (isinstance(r, int) and 0 <= r < limit):
                raise InstanceError(f"row {r!r} is not a {self.k}-bit mask")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_vectors(cls, vectors: Iterable, k: Optional[int] = None) -> "PartialAssignment":
        vectors = list(vectors)
        if k is None:
            k = next((len(v) for v in vectors if v is not None), 0)
        rows = []
        for v in vectors:
            if v is None:
                rows.append(None)
            else:
                if len(v) != k:
                    raise InstanceError(f"row of length {len(v)}, expected {k}")
                rows.append(mask_from_vector(v))
        return cls(k, tuple(rows))

    @classmethod
    def null(cls, n: int, k: int) -> "PartialAssignment":
        return cls(k, (None,) * n)

    @property
    def n(self) -> int:
        return len(self.rows)

    def vectors(self) -> list:
        return [None if r is None else vector_from_mask(r, self.k) for r in self.rows]

    def is_complete(self) -> bool:
        return all(r is not None for r in self.rows)


def products(W: Sequence, k: int):
    """Table of ``sum(W[q] for q in mask)`` over all ``2**k`` masks.

    Entries touching a null weight are ``None``.
    """
    table = [0] * (1 << k)
    for m in range(1, 1 << k):
        low = m & -m
        q = low.bit_length() - 1
        rest = table[m ^ low]
        table[m] = None if (rest is None or W[q] is None) else rest + W[q]
    return table


@dataclass(frozen=True)
class Decomposition:
    """Weighted cliques as ``(frozenset_of_vertices, weight)`` pairs."""

    cliques: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "cliques", tuple((frozenset(c), w) for c, w in self.cliques)
        )

    def __len__(self):
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)

    def canonical(self) -> tuple:
        """Order-free form, for comparing clique families."""
        return tuple(sorted((tuple(sorted(c)), w) for c, w in self.cliques))

    def total_weight(self) -> Number:
        return sum((w for _, w in self.cliques), 0)


# --------------------------------------------------------------------------
# conversions and verification


def graph_to_instance(g: AnnotatedGraph, k: int, mode: str = EXACT, eps: float = DEFAULT_EPS) -> Instance:
    """Matrix form of an (annotated) graph: edges off-diagonal, ``STAR`` on free vertices."""
    if not isinstance(k, int) or k <= 0:
        raise InstanceError(f"budget k must be a positive integer, got {k!r}")
    return _graph_matrix(g, k, mode, eps)


def _graph_matrix(g: AnnotatedGraph, k: int, mode: str, eps: float) -> Instance:
    n = g.n
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = g.annotated.get(i, STAR)
    for (u, v), w in g.edges.items():
        A[u][v] = A[v][u] = w
    return Instance(tuple(tuple(r) for r in A), k, mode, eps)


def instance_to_graph(inst: Instance, labels: Optional[list] = None) -> AnnotatedGraph:
    n = inst.n
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if inst.A[i][j] != 0:
                edges[(i, j)] = inst.A[i][j]
    annotated = {i: inst.A[i][i] for i in range(n) if inst.A[i][i] is not STAR}
    return AnnotatedGraph(n, edges, annotated, labels)


def _check_dims(inst: Instance, B: PartialAssignment, W: Sequence):
    if B.n != inst.n:
        raise InstanceError(f"B has {B.n} rows, instance has {inst.n}")
    if len(W) != B.k:
        raise InstanceError(f"W has {len(W)} entries, B has {B.k} columns")


def verify(inst: Instance, B: PartialAssignment, W: Sequence) -> bool:
    """True iff ``B diag(W) B^T`` star-equals ``A``.

    Requires a complete ``B`` and a fully specified ``W``; dimension
    mismatches raise :class:`InstanceError`.
    """
    _check_dims(inst, B, W)
    if not B.is_complete():
        raise InstanceError("verify needs a complete assignment")
    if any(w is None for w in W):
        raise InstanceError("verify needs fully specified weights")
    if any(w < 0 for w in W):
        return False
    return first_violation(inst, B, W) is None


def first_violation(inst: Instance, B: PartialAssignment, W: Sequence):
    """First ``(i, j, expected, got)`` with ``i <= j`` that breaks star-equality."""
    table = products(W, B.k)
    rows = B.rows
    for i in range(inst.n):
        Ai = inst.A[i]
        bi = rows[i]
        for j in range(i, inst.n):
            got = table[bi & rows[j]]
            if not inst.eq(Ai[j], got):
                return (i, j, Ai[j], got)
    return None


def decomposition_from(B: PartialAssignment, W: Sequence, drop_trivial: bool = False) -> Decomposition:
    """Clique list from ``(B, W)``: column ``q`` with positive weight becomes a clique.

    Zero-weight and empty columns are dropped.  With ``drop_trivial`` the
    single-vertex cliques go too (they only matter for annotated vertices).
    """
    cliques = []
    for q in range(B.k):
        w = W[q]
        if w is None or w == 0:
            continue
        members = frozenset(i for i, r in enumerate(B.rows) if r is not None and (r >> q) & 1)
        if not members or (drop_trivial and len(members) < 2):
            continue
        cliques.append((members, w))
    return Decomposition(tuple(cliques))


def assignment_from(d: Decomposition, n: int, k: Optional[int] = None):
    """Inverse of :func:`decomposition_from`: ``(B, W)`` padded to ``k`` columns."""
    k = len(d) if k is None else k
    if len(d) > k:
        raise InstanceError(f"{len(d)} cliques exceed budget {k}")
    rows = [0] * n
    W = [0] * k
    for q, (members, w) in enumerate(d.cliques):
        W[q] = w
        for v in members:
            rows[v] |= 1 << q
    return PartialAssignment(k, tuple(rows)), W


def edge_violation(g: AnnotatedGraph, d: Decomposition, eps: Optional[float] = None):
    """First violated constraint as ``(kind, item, expected, got)`` or ``None``.

    ``kind`` is ``"edge"`` (including non-edges, expected 0) or ``"vertex"``.
    Comparisons are exact unless ``eps`` is given.
    """

    def same(a, b):
        return a == b if eps is None else abs(a - b) <= eps

    for c, w in d.cliques:
        if w < 0:
            return ("clique", tuple(sorted(c)), ">= 0", w)
        if any(not 0 <= v < g.n for v in c):
            return ("clique", tuple(sorted(c)), "vertices in range", None)
    sums: dict = {}
    vsums: dict = {}
    for c, w in d.cliques:
        members = sorted(c)
        for a in range(len(members)):
            u = members[a]
            vsums[u] = vsums.get(u, 0) + w
            for b in range(a + 1, len(members)):
                key = (u, members[b])
                sums[key] = sums.get(key, 0) + w
    for key in sorted(set(g.edges) | set(sums)):
        want = g.edges.get(key, 0)
        got = sums.get(key, 0)
        if not same(want, got):
            return ("edge", key, want, got)
    for v in sorted(g.annotated):
        want = g.annotated[v]
        got = vsums.get(v, 0)
        if not same(want, got):
            return ("vertex", v, want, got)
    return None


def verify_decomposition(g: AnnotatedGraph, d: Decomposition, eps: Optional[float] = None) -> bool:
    """Edge sums match every edge weight, 0 on non-edges, vertex sums on ``S``."""
    return edge_violation(g, d, eps) is None


def relabel(d: Decomposition, mapping: Mapping[int, int]) -> Decomposition:
    return Decomposition(tuple((frozenset(mapping[v] for v in c), w) for c, w in d.cliques))
