"""Planted-instance generators.

Every generator is a pure function of its parameters and seed (numpy's
``default_rng``), and records the decomposition it planted so solvers can be
checked against it.

* :func:`gen_tf` draws heavy-tailed module weights (one module always gets
  the maximum weight ``delta``).
* :func:`gen_lv` keeps genes scoring above a threshold and weights a module by
  ``ceil(scale * mean score)``.
* :func:`gen_random_planted` samples clique supports with a controlled
  overlap, for corpora without membership data.
* :func:`gen_e3c` builds the unit-weight, ``K4``-free hardness gadget from an
  exact 3-cover instance.

Membership data is read from a four-column TSV (module-id, gene, score,
pathway-flag); :func:`random_membership` produces a synthetic stand-in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import EXACT, DEFAULT_EPS, AnnotatedGraph, Decomposition, graph_to_instance

TF_SCALES = {"small": 1, "medium": 4, "large": 16}
LV_SCALES = {"small": 1, "medium": 2, "large": 4}


# --------------------------------------------------------------------------
# heavy-tailed weights


@dataclass(frozen=True)
class HeavyTailConfig:
    """Three weight intervals ``L``, ``M``, ``H`` inside ``[1, delta]`` and their probabilities."""

    delta: int
    l: float = 0.14
    m_l: float = 0.20
    m_r: float = 0.28
    h: float = 0.90
    p_l: float = 0.75
    p_m: float = 0.15
    p_h: float = 0.10

    def __post_init__(self):
        if not isinstance(self.delta, (int, np.integer)) or self.delta < 1:
            raise ValueError(f"delta must be a positive integer, got {self.delta!r}")
        if min(self.p_l, self.p_m, self.p_h) < 0 or abs(self.p_l + self.p_m + self.p_h - 1) > 1e-12:
            raise ValueError("interval probabilities must be non-negative and sum to 1")
        if not 0 < self.l < self.m_l <= self.m_r < self.h <= 1:
            raise ValueError("interval fractions must satisfy 0 < l < m_l <= m_r < h <= 1")

    def intervals(self) -> tuple:
        """Integer ``(lo, hi)`` for L, M, H; a degenerate interval collapses to one integer."""
        d = self.delta
        raw = (
            (1, math.floor(self.l * d)),
            (math.ceil(self.m_l * d), math.floor(self.m_r * d)),
            (math.ceil(self.h * d), d),
        )
        out = []
        for lo, hi in raw:
            lo = min(max(lo, 1), d)
            if hi < lo:
                hi = lo
            out.append((lo, hi))
        return tuple(out)

    @property
    def probabilities(self) -> tuple:
        return (self.p_l, self.p_m, self.p_h)


def heavy_tail_interval(cfg: HeavyTailConfig, rng) -> int:
    """Index of the interval drawn (0 = L, 1 = M, 2 = H)."""
    u = rng.random()
    if u < cfg.p_l:
        return 0
    if u < cfg.p_l + cfg.p_m:
        return 1
    return 2


def heavy_tail_weight(cfg: HeavyTailConfig, rng) -> int:
    """Pick an interval by probability, then a uniform integer inside it."""
    lo, hi = cfg.intervals()[heavy_tail_interval(cfg, rng)]
    return int(rng.integers(lo, hi + 1))


def heavy_tail_weights(cfg: HeavyTailConfig, k: int, rng) -> list:
    """``k`` heavy-tailed weights with one uniformly chosen position forced to ``delta``."""
    ws = [heavy_tail_weight(cfg, rng) for _ in range(k)]
    if k:
        ws[int(rng.integers(k))] = cfg.delta
    return ws


# --------------------------------------------------------------------------
# membership tables


@dataclass(frozen=True)
class Module:
    id: str
    genes: tuple  # of (label, score or None)
    flagged: bool = False

    def __post_init__(self):
        for g, s in self.genes:
            if s is not None and not 0 <= s <= 1:
                raise ValueError(f"score {s} of gene {g} in module {self.id} outside [0, 1]")


@dataclass(frozen=True)
class MembershipTable:
    modules: tuple = ()

    def __len__(self):
        return len(self.modules)

    @property
    def scored(self) -> bool:
        return all(s is not None for m in self.modules for _, s in m.genes)


def _flag(tok: str) -> bool:
    t = tok.strip().lower()
    if t in ("1", "true", "yes", "y", "t"):
        return True
    if t in ("", "0", "false", "no", "n", "f", "na"):
        return False
    raise ValueError(f"bad pathway flag {tok!r}")


def parse_membership(text: str) -> MembershipTable:
    """TSV rows ``module-id <TAB> gene [<TAB> score [<TAB> pathway-flag]]``; ``#`` starts a comment.

    A module is flagged if any of its rows carries a true flag.  Score ``NA``
    or an empty field means no score.
    """
    order: list = []
    genes: dict = {}
    flags: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip("\r\n")
        if not line.strip():
            continue
        cols = [c.strip() for c in line.split("\t")]
        if len(cols) < 2 or len(cols) > 4:
            raise ValueError(f"line {lineno}: expected 2 to 4 tab-separated columns")
        mid, gene = cols[0], cols[1]
        score = None
        if len(cols) > 2 and cols[2] and cols[2].upper() != "NA":
            score = float(cols[2])
        if mid not in genes:
            order.append(mid)
            genes[mid] = {}
            flags[mid] = False
        if gene in genes[mid]:
            raise ValueError(f"line {lineno}: gene {gene} listed twice in module {mid}")
        genes[mid][gene] = score
        if len(cols) > 3:
            flags[mid] = flags[mid] or _flag(cols[3])
    return MembershipTable(
        tuple(Module(m, tuple(genes[m].items()), flags[m]) for m in order)
    )


def read_membership(path) -> MembershipTable:
    return parse_membership(Path(path).read_text(encoding="utf-8"))


def format_membership(table: MembershipTable) -> str:
    out = []
    for m in table.modules:
        for g, s in m.genes:
            out.append(f"{m.id}\t{g}\t{'NA' if s is None else repr(s)}\t{int(m.flagged)}")
    return "".join(line + "\n" for line in out)


def random_membership(
    n_modules: int = 40,
    n_genes: int = 60,
    size_range: tuple = (3, 8),
    hub_exponent: float = 0.8,
    flagged_fraction: float = 0.5,
    core_fraction: float = 0.8,
    seed=None,
) -> MembershipTable:
    """Synthetic membership: modules of random size over a shared gene pool.

    Gene ``r`` (0-based) is drawn with probability proportional to
    ``(r + 1) ** -hub_exponent``, so a few hub genes sit in many modules and
    modules overlap in more than one gene; 0 gives a uniform pool.
    Roughly ``core_fraction`` of each module's genes score above 0.6, the
    rest below, so thresholding keeps most of every module.
    """
    lo, hi = size_range
    if not 1 <= lo <= hi <= n_genes:
        raise ValueError(f"size range {size_range} incompatible with {n_genes} genes")
    rng = np.random.default_rng(seed)
    width = len(str(n_genes - 1))
    popularity = np.arange(1, n_genes + 1, dtype=float) ** -hub_exponent
    popularity /= popularity.sum()
    modules = []
    for i in range(n_modules):
        size = int(rng.integers(lo, hi + 1))
        members = sorted(int(x) for x in rng.choice(n_genes, size=size, replace=False, p=popularity))
        genes = []
        for j, g in enumerate(members):
            core = j == 0 or rng.random() < core_fraction
            s = float(rng.uniform(0.61, 1.0)) if core else float(rng.uniform(0.0, 0.6))
            genes.append((f"g{g:0{width}d}", round(s, 3)))
        modules.append(Module(f"M{i}", tuple(genes), bool(rng.random() < flagged_fraction)))
    return MembershipTable(tuple(modules))


# --------------------------------------------------------------------------
# planted instances


@dataclass
class PlantedInstance:
    """A graph with its ground-truth decomposition and generator provenance."""

    graph: AnnotatedGraph
    k: int
    truth: Optional[Decomposition]
    provenance: dict = field(default_factory=dict)

    def instance(self, k: Optional[int] = None, mode: str = EXACT, eps: float = DEFAULT_EPS):
        return graph_to_instance(self.graph, self.k if k is None else k, mode, eps)


def _assemble(supports: Sequence, weights: Sequence, labels: Optional[Sequence] = None):
    """Graph whose edge weights are the summed weights of the supports containing both ends."""
    if labels is None:
        labels = sorted({g for s in supports for g in s})
    index = {g: i for i, g in enumerate(labels)}
    edges: dict = {}
    cliques = []
    for s, w in zip(supports, weights):
        members = sorted(index[g] for g in s)
        for a, b in combinations(members, 2):
            edges[(a, b)] = edges.get((a, b), 0) + w
        cliques.append((frozenset(members), w))
    return AnnotatedGraph(len(labels), edges, {}, list(labels)), Decomposition(tuple(cliques))


def _scale_value(scale, table: dict) -> int:
    if isinstance(scale, str) and not scale.isdigit():
        if scale not in table:
            raise ValueError(f"unknown scale {scale!r}; expected one of {sorted(table)}")
        return table[scale]
    return int(scale)


def gen_tf(
    k: int,
    scale="small",
    seed=None,
    membership: Optional[MembershipTable] = None,
    **mimic,
) -> PlantedInstance:
    """TF-style instance: ``k`` random modules with heavy-tailed weights.

    ``scale`` is ``small``/``medium``/``large`` (max weight 1/4/16) or an
    integer max weight.  Without ``membership`` a :func:`random_membership`
    mimic is drawn from the same seed (``mimic`` overrides its parameters).
    """
    delta = _scale_value(scale, TF_SCALES)
    rng = np.random.default_rng(seed)
    if membership is None:
        membership = random_membership(seed=rng.integers(2**32), **mimic)
    if k < 1 or len(membership) < k:
        raise ValueError(f"need at least k={k} modules, table has {len(membership)}")
    picks = sorted(int(i) for i in rng.choice(len(membership), size=k, replace=False))
    cfg = HeavyTailConfig(delta)
    weights = heavy_tail_weights(cfg, k, rng)
    mods = [membership.modules[i] for i in picks]
    graph, truth = _assemble([[g for g, _ in m.genes] for m in mods], weights)
    prov = {
        "model": "tf",
        "seed": seed,
        "k": k,
        "scale": scale,
        "delta": delta,
        "modules": ",".join(m.id for m in mods),
        "weights": ",".join(map(str, weights)),
    }
    return PlantedInstance(graph, k, truth, prov)


def _exact_score(s: float) -> Fraction:
    # decimal reading of the score, so ceil(scale * mean) is not hit by binary rounding
    return Fraction(repr(s))


def gen_lv(
    k: int,
    scale=1,
    seed=None,
    membership: Optional[MembershipTable] = None,
    pathway_fraction: float = 0.8,
    threshold: float = 0.6,
    max_retries: int = 100,
    **mimic,
) -> PlantedInstance:
    """LV-style instance from scored modules.

    ``round(pathway_fraction * k)`` modules come from the flagged ones, the
    rest from all remaining modules.  Genes scoring above ``threshold`` are
    kept and a module weighs ``ceil(scale * mean kept score)``.  A module
    with no kept gene is replaced by another draw from the same pool.
    """
    s = _scale_value(scale, LV_SCALES)
    rng = np.random.default_rng(seed)
    if membership is None:
        membership = random_membership(seed=rng.integers(2**32), **mimic)
    if not membership.scored:
        raise ValueError("LV generation needs a score for every gene")
    if k < 1 or len(membership) < k:
        raise ValueError(f"need at least k={k} modules, table has {len(membership)}")
    n_flag = math.floor(pathway_fraction * k + 0.5)
    flagged = [i for i, m in enumerate(membership.modules) if m.flagged]
    if len(flagged) < n_flag:
        raise ValueError(f"need {n_flag} pathway-flagged modules, table has {len(flagged)}")

    taken: set = set()
    picks: list = []
    retries = 0

    def draw(pool):
        nonlocal retries
        while True:
            free = [i for i in pool if i not in taken]
            if not free:
                raise ValueError("ran out of modules with a gene above the threshold")
            i = free[int(rng.integers(len(free)))]
            taken.add(i)
            if any(sc > threshold for _, sc in membership.modules[i].genes):
                picks.append(i)
                return
            retries += 1
            if retries > max_retries:
                raise ValueError(f"no gene above threshold after {max_retries} resamples")

    for _ in range(n_flag):
        draw(flagged)
    for _ in range(k - n_flag):
        draw(range(len(membership)))

    supports, weights, ids = [], [], []
    for i in picks:
        m = membership.modules[i]
        kept = [(g, sc) for g, sc in m.genes if sc > threshold]
        mean = sum(_exact_score(sc) for _, sc in kept) / len(kept)
        weights.append(math.ceil(s * mean))
        supports.append([g for g, _ in kept])
        ids.append(m.id)
    graph, truth = _assemble(supports, weights)
    prov = {
        "model": "lv",
        "seed": seed,
        "k": k,
        "scale": scale,
        "multiplier": s,
        "threshold": threshold,
        "flagged": n_flag,
        "modules": ",".join(ids),
        "weights": ",".join(map(str, weights)),
    }
    return PlantedInstance(graph, k, truth, prov)


def gen_random_planted(
    k: int,
    n: int,
    size_range: tuple = (2, 5),
    overlap: float = 0.3,
    weight_model: str = "uniform:4",
    seed=None,
    max_tries: int = 1000,
) -> PlantedInstance:
    """``k`` clique supports over ``n`` vertices.

    Each new support (after the first) shares vertices with the ones before
    it with probability ``overlap``; otherwise it uses fresh vertices only.
    ``weight_model`` is ``unit``, ``uniform:W`` (integers in ``[1, W]``) or
    ``heavy:D`` (heavy-tailed with maximum ``D``).  Vertices left unused are
    isolated.
    """
    lo, hi = size_range
    if k < 1 or not 2 <= lo <= hi:
        raise ValueError("need k >= 1 and 2 <= min size <= max size")
    if hi > n:
        raise ValueError(f"cliques of size {hi} do not fit in {n} vertices")
    if not 0 <= overlap <= 1:
        raise ValueError("overlap must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    supports: list = []
    used: set = set()
    for q in range(k):
        for _ in range(max_tries):
            size = int(rng.integers(lo, hi + 1))
            share = bool(supports) and rng.random() < overlap
            fresh = [v for v in range(n) if v not in used]
            if share:
                t = int(rng.integers(1, size))  # shared vertices; at least one other
                old = sorted(used)
                if t > len(old):
                    continue
                pick = list(rng.choice(old, size=t, replace=False))
                rest = [v for v in range(n) if v not in pick]
                pick += list(rng.choice(rest, size=size - t, replace=False))
            else:
                if len(fresh) < size:
                    continue
                pick = list(rng.choice(fresh, size=size, replace=False))
            s = frozenset(int(v) for v in pick)
            if s in supports:
                continue
            supports.append(s)
            used |= s
            break
        else:
            raise ValueError(f"infeasible overlap demands: could not place clique {q}")
    weights = _weights(weight_model, k, rng)
    labels = [str(i) for i in range(n)]
    graph, truth = _assemble([[str(v) for v in sorted(s)] for s in supports], weights, labels)
    prov = {
        "model": "random",
        "seed": seed,
        "k": k,
        "n": n,
        "size_range": f"{lo}-{hi}",
        "overlap": overlap,
        "weight_model": weight_model,
        "weights": ",".join(map(str, weights)),
    }
    return PlantedInstance(graph, k, truth, prov)


def _weights(model: str, k: int, rng) -> list:
    name, _, arg = model.partition(":")
    if name == "unit":
        return [1] * k
    if name == "uniform":
        top = int(arg or 4)
        return [int(x) for x in rng.integers(1, top + 1, size=k)]
    if name == "heavy":
        return heavy_tail_weights(HeavyTailConfig(int(arg or 16)), k, rng)
    raise ValueError(f"unknown weight model {model!r}")


def gen_articulated(
    k_core: int = 2,
    k_pendant: int = 4,
    seed=None,
    core_size: tuple = (4, 6),
    pendant_size: tuple = (2, 4),
    p_disjoint: float = 0.25,
    weight_model: str = "uniform:4",
) -> PlantedInstance:
    """A core of cliques meeting in two vertices, plus pendant cliques.

    Consecutive core cliques share exactly two vertices, so none of them is
    edge-isolated.  Each pendant clique either stands alone (probability
    ``p_disjoint``) or shares exactly one vertex with what was built before
    it, so pendants hang off the core in a tree-like way.  The provenance
    key ``pendant`` lists the truth indices of the pendant cliques.
    """
    if k_core == 1 or k_core < 0 or k_pendant < 0 or k_core + k_pendant < 1:
        raise ValueError("need k_core = 0 or k_core >= 2, and at least one clique")
    if core_size[0] < 3 or pendant_size[0] < 2:
        raise ValueError("core cliques need >= 3 vertices, pendant cliques >= 2")
    rng = np.random.default_rng(seed)
    supports: list = []
    n = 0

    def fresh(c):
        nonlocal n
        out = list(range(n, n + c))
        n += c
        return out

    for q in range(k_core):
        size = int(rng.integers(core_size[0], core_size[1] + 1))
        if q == 0:
            supports.append(fresh(size))
        else:
            prev = supports[-1]
            shared = sorted(int(x) for x in rng.choice(prev, size=2, replace=False))
            supports.append(shared + fresh(size - 2))
    for _ in range(k_pendant):
        size = int(rng.integers(pendant_size[0], pendant_size[1] + 1))
        if n == 0 or rng.random() < p_disjoint:
            supports.append(fresh(size))
        else:
            anchor = int(rng.integers(n))
            supports.append([anchor] + fresh(size - 1))
    k = k_core + k_pendant
    weights = _weights(weight_model, k, rng)
    labels = [str(i) for i in range(n)]
    graph, truth = _assemble([[str(v) for v in s] for s in supports], weights, labels)
    prov = {
        "model": "articulated",
        "seed": seed,
        "k": k,
        "k_core": k_core,
        "pendant": ",".join(str(i) for i in range(k_core, k)),
        "weight_model": weight_model,
    }
    return PlantedInstance(graph, k, truth, prov)


# --------------------------------------------------------------------------
# exact 3-cover gadget


@dataclass(frozen=True)
class E3CInstance:
    """Universe ``{0, ..., 3q-1}`` and ``m`` triples over it."""

    q: int
    sets: tuple

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be positive")
        sets = tuple(tuple(int(x) for x in s) for s in self.sets)
        for i, s in enumerate(sets):
            if len(s) != 3 or len(set(s)) != 3:
                raise ValueError(f"set {i} must have exactly 3 distinct elements, got {s}")
            if any(not 0 <= x < 3 * self.q for x in s):
                raise ValueError(f"set {i} has an element outside [0, {3 * self.q})")
        object.__setattr__(self, "sets", sets)

    @property
    def m(self) -> int:
        return len(self.sets)


def e3c_solve(e: E3CInstance) -> Optional[tuple]:
    """Indices of ``q`` sets covering the universe exactly, or ``None`` (brute force)."""
    full = set(range(3 * e.q))
    for combo in combinations(range(e.m), e.q):
        covered = [x for i in combo for x in e.sets[i]]
        if len(covered) == len(full) and set(covered) == full:
            return combo
    return None


def random_e3c(q: int, m: int, seed=None) -> E3CInstance:
    rng = np.random.default_rng(seed)
    sets = [tuple(sorted(int(x) for x in rng.choice(3 * q, size=3, replace=False))) for _ in range(m)]
    return E3CInstance(q, tuple(sets))


def gen_e3c(e: E3CInstance) -> PlantedInstance:
    """Unit-weight instance with budget ``6m + q``; YES iff ``e`` has an exact cover.

    Element ``x`` gives the edge ``x x'``.  Set ``i = {u, v, w}`` gives a
    triangle ``a_i b_i c_i`` wired as ``a u b``, ``a v c``, ``b w c`` plus the
    edges ``a u'``, ``c v'``, ``b w'``.  When a cover exists the planted truth
    is the cover's 7 cliques per chosen set and 6 per other set.
    """
    labels = []
    for x in range(3 * e.q):
        labels += [f"e{x}", f"e{x}p"]
    for i in range(e.m):
        labels += [f"a{i}", f"b{i}", f"c{i}"]
    idx = {lab: j for j, lab in enumerate(labels)}
    edges = {}

    def add(x, y):
        u, v = sorted((idx[x], idx[y]))
        edges[(u, v)] = 1

    for x in range(3 * e.q):
        add(f"e{x}", f"e{x}p")
    for i, (u, v, w) in enumerate(e.sets):
        a, b, c = f"a{i}", f"b{i}", f"c{i}"
        U, V, Wn = f"e{u}", f"e{v}", f"e{w}"
        for x, y in [(a, b), (b, c), (a, c), (a, U), (U, b), (a, V), (c, V), (b, Wn), (Wn, c),
                     (a, U + "p"), (c, V + "p"), (b, Wn + "p")]:
            add(x, y)
    graph = AnnotatedGraph(len(labels), edges, {}, labels)
    k = 6 * e.m + e.q
    cover = e3c_solve(e)
    truth = None
    if cover is not None:
        groups = []
        for i, (u, v, w) in enumerate(e.sets):
            a, b, c = f"a{i}", f"b{i}", f"c{i}"
            U, V, Wn = f"e{u}", f"e{v}", f"e{w}"
            if i in cover:
                groups += [(U, U + "p", a), (V, V + "p", c), (Wn, Wn + "p", b), (a, b, c),
                           (U, b), (V, a), (Wn, c)]
            else:
                groups += [(U, a, b), (V, a, c), (Wn, c, b), (U + "p", a), (V + "p", c), (Wn + "p", b)]
        truth = Decomposition(tuple((frozenset(idx[x] for x in g), 1) for g in groups))
    prov = {
        "model": "e3c",
        "q": e.q,
        "m": e.m,
        "sets": ";".join(",".join(map(str, s)) for s in e.sets),
        "cover": "none" if cover is None else ",".join(map(str, cover)),
    }
    return PlantedInstance(graph, k, truth, prov)
