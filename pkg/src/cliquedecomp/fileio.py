"""Plain-text instance, solution and sidecar files.

Instance file::

    # comment
    n m k
    u v w          (m edge lines)
    v u w          (optional: vertex u must carry total clique weight w)

Weights are non-negative decimals or rationals ``p/q``.  Vertex tokens are
labels: if every label is an integer in ``[0, n)`` it is used as the index,
otherwise labels are numbered in order of first appearance.

Solution file: one clique per line, ``w: v1 v2 ... vt`` with vertices in
ascending index order.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Optional

from .core import (
    EXACT,
    AnnotatedGraph,
    Decomposition,
    format_number,
    normalize_number,
)


class ParseError(ValueError):
    def __init__(self, path, lineno, msg):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.lineno = lineno


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _weight(tok, path, lineno, mode):
    try:
        w = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(path, lineno, f"bad weight {tok!r}") from None
    if w < 0:
        raise ParseError(path, lineno, f"negative weight {tok!r}")
    return normalize_number(w, mode)


def _int(tok, path, lineno, what):
    try:
        x = int(tok)
    except ValueError:
        raise ParseError(path, lineno, f"{what} must be an integer, got {tok!r}") from None
    if x < 0:
        raise ParseError(path, lineno, f"{what} must be non-negative")
    return x


def parse_instance(text: str, path: str = "<string>", mode: str = EXACT):
    """Parse instance text into ``(AnnotatedGraph, k)``."""
    lines = list(_lines(text))
    if not lines:
        raise ParseError(path, 0, "empty instance file")
    lineno, head = lines[0]
    if len(head) != 3:
        raise ParseError(path, lineno, "header must be 'n m k'")
    n, m, k = (_int(t, path, lineno, name) for t, name in zip(head, "nmk"))
    body = lines[1:]
    if len(body) < m:
        raise ParseError(path, body[-1][0] if body else lineno, f"expected {m} edge lines, found {len(body)}")

    raw_edges = []
    raw_ann = []
    for idx, (lineno, toks) in enumerate(body):
        if idx < m:
            if len(toks) != 3:
                raise ParseError(path, lineno, "edge line must be 'u v w'")
            raw_edges.append((lineno, toks[0], toks[1], _weight(toks[2], path, lineno, mode)))
        else:
            if len(toks) != 3 or toks[0] != "v":
                raise ParseError(path, lineno, "annotation line must be 'v u w'")
            raw_ann.append((lineno, toks[1], _weight(toks[2], path, lineno, mode)))

    tokens = [t for _, u, v, _ in raw_edges for t in (u, v)] + [u for _, u, _ in raw_ann]
    if all(t.isdigit() and int(t) < n for t in tokens):
        labels = [str(i) for i in range(n)]
        index = {str(i): i for i in range(n)}
        index.update({t: int(t) for t in tokens})
    else:
        labels = []
        index = {}
        for t in tokens:
            if t not in index:
                index[t] = len(labels)
                labels.append(t)
        if len(labels) > n:
            raise ParseError(path, lines[0][0], f"{len(labels)} distinct vertices but n={n}")
        taken = set(labels)
        i = 0
        while len(labels) < n:
            name = f"_{i}"
            i += 1
            if name not in taken:
                labels.append(name)

    edges = {}
    for lineno, a, b, w in raw_edges:
        u, v = index[a], index[b]
        if u == v:
            raise ParseError(path, lineno, f"self-loop at {a}")
        key = (min(u, v), max(u, v))
        if key in edges:
            raise ParseError(path, lineno, f"duplicate edge {a} {b}")
        edges[key] = w
    annotated = {}
    for lineno, a, w in raw_ann:
        u = index[a]
        if u in annotated:
            raise ParseError(path, lineno, f"vertex {a} annotated twice")
        annotated[u] = w
    return AnnotatedGraph(n, edges, annotated, labels), k


def read_instance(path, mode: str = EXACT):
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), str(path), mode)


def format_instance(g: AnnotatedGraph, k: int) -> str:
    labels = g.labels
    out = [f"{g.n} {g.m} {k}"]
    for (u, v) in sorted(g.edges):
        out.append(f"{labels[u]} {labels[v]} {format_number(g.edges[(u, v)])}")
    for u in sorted(g.annotated):
        out.append(f"v {labels[u]} {format_number(g.annotated[u])}")
    return "\n".join(out) + "\n"


def write_instance(path, g: AnnotatedGraph, k: int):
    Path(path).write_text(format_instance(g, k), encoding="utf-8")


def format_solution(d: Decomposition, labels: Optional[list] = None) -> str:
    out = []
    for members, w in d.canonical():
        names = [labels[v] if labels else str(v) for v in members]
        out.append(f"{format_number(w)}: {' '.join(names)}".rstrip())
    return "".join(line + "\n" for line in out)


def write_solution(path, d: Decomposition, labels: Optional[list] = None):
    Path(path).write_text(format_solution(d, labels), encoding="utf-8")


def parse_solution(text: str, labels: Optional[list] = None, path: str = "<string>", mode: str = EXACT) -> Decomposition:
    index = {lab: i for i, lab in enumerate(labels)} if labels else None
    cliques = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(path, lineno, "solution line must be 'w: v1 v2 ...'")
        wtok, rest = line.split(":", 1)
        w = _weight(wtok.strip(), path, lineno, mode)
        members = set()
        for tok in rest.split():
            if index is not None:
                if tok not in index:
                    raise ParseError(path, lineno, f"unknown vertex {tok!r}")
                members.add(index[tok])
            else:
                members.add(_int(tok, path, lineno, "vertex"))
        cliques.append((frozenset(members), w))
    return Decomposition(tuple(cliques))


def read_solution(path, labels: Optional[list] = None, mode: str = EXACT) -> Decomposition:
    path = Path(path)
    return parse_solution(path.read_text(encoding="utf-8"), labels, str(path), mode)


def write_keyvalue(path, data: dict):
    Path(path).write_text("".join(f"{k}={v}\n" for k, v in data.items()), encoding="utf-8")


def read_keyvalue(path) -> dict:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#") and "=" in line:
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out
