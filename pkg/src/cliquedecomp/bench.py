"""Corpus benchmark: run the pipeline over instance files and emit one CSV row per phase.

A corpus directory holds ``NAME.inst`` instance files, optionally with a
planted solution ``NAME.sol`` and a provenance sidecar ``NAME.prov``
(``key=value`` lines; ``K`` there gives the baseline's total-weight budget).
"""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .core import EXACT, DEFAULT_EPS
from .fileio import read_instance, read_keyvalue, read_solution, write_solution
from .pipeline import YES, same_family, solve_graph

log = logging.getLogger(__name__)

COLUMNS = ("instance", "n", "m", "k", "K", "alg", "phase", "time_ms", "result", "n_ker", "recovered_ground_truth")
PHASES = ("preprocess", "kernel", "decompose", "total")


@dataclass(frozen=True)
class Job:
    name: str
    path: str
    alg: str
    timeout: Optional[float]
    mode: str
    eps: float
    K: Optional[int]
    solutions_dir: Optional[str]
    symmetry_breaking: bool
    deepening: bool = True


def corpus_files(corpus_dir) -> list:
    return sorted(Path(corpus_dir).glob("*.inst"))


def _budget_K(path: Path, g, override: Optional[int]) -> Optional[int]:
    if override is not None:
        return override
    prov = path.with_suffix(".prov")
    if prov.exists():
        kv = read_keyvalue(prov)
        if kv.get("K", "").isdigit():
            return int(kv["K"])
    sol = path.with_suffix(".sol")
    if sol.exists():
        w = read_solution(sol, g.labels).total_weight()
        if w == int(w):
            return int(w)
    return None


def run_job(job: Job) -> list:
    """Rows for one (instance, algorithm) pair; failures become ``error`` rows."""
    path = Path(job.path)
    base = {"instance": job.name, "alg": job.alg, "n": "", "m": "", "k": "", "K": "", "n_ker": "",
            "recovered_ground_truth": "na"}
    try:
        g, k = read_instance(path, job.mode)
        K = _budget_K(path, g, job.K)
        base.update(n=g.n, m=g.m, k=k, K="" if K is None else K)
        if job.alg == "wecp" and K is None:
            raise ValueError("no total-weight budget K for the baseline")
        res = solve_graph(g, k, job.alg, K=K, mode=job.mode, eps=job.eps, timeout=job.timeout,
                          symmetry_breaking=job.symmetry_breaking, deepening=job.deepening)
    except Exception as err:  # noqa: BLE001 - recorded, the run continues
        log.warning("%s/%s failed: %s", job.name, job.alg, err)
        return [dict(base, phase=p, time_ms="", result="error") for p in PHASES]
    recovered = "na"
    sol = path.with_suffix(".sol")
    if res.status == YES:
        if sol.exists():
            truth = read_solution(sol, g.labels, job.mode)
            recovered = str(same_family(res.decomposition, truth, g)).lower()
        if job.solutions_dir:
            out = Path(job.solutions_dir) / f"{job.name}.{job.alg}.sol"
            write_solution(out, res.decomposition, g.labels)
    elif sol.exists():
        recovered = "false"
    base.update(n_ker="" if res.n_ker is None else res.n_ker, recovered_ground_truth=recovered)
    ms = res.time_ms
    return [dict(base, phase=p, time_ms=f"{ms.get(p, 0.0):.3f}", result=res.status) for p in PHASES]


def bench(
    corpus_dir,
    algs: Sequence[str] = ("lp", "ip"),
    timeout: Optional[float] = None,
    out=None,
    *,
    mode: str = EXACT,
    eps: float = DEFAULT_EPS,
    K: Optional[int] = None,
    parallel: int = 1,
    solutions_dir=None,
    symmetry_breaking: bool = True,
    deepening: bool = True,
) -> str:
    """Run every instance with every algorithm; returns the CSV text (also written to ``out``).

    Row order is instance name, then ``algs`` order, then phase, whatever
    ``parallel`` is.
    """
    if solutions_dir:
        Path(solutions_dir).mkdir(parents=True, exist_ok=True)
    jobs = [
        Job(p.stem, str(p), a, timeout, mode, eps, K, None if solutions_dir is None else str(solutions_dir),
            symmetry_breaking, deepening)
        for p in corpus_files(corpus_dir)
        for a in algs
    ]
    if parallel > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(run_job, jobs))
    else:
        results = [run_job(j) for j in jobs]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for rows in results:
        w.writerows(rows)
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text


def read_bench(path_or_text) -> list:
    text = path_or_text
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and "\n" not in path_or_text):
        text = Path(path_or_text).read_text(encoding="utf-8")
    return list(csv.DictReader(io.StringIO(text)))
