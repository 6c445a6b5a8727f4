"""Command line: ``cliquedecomp <subcommand> ...``.

Exit codes: 0 yes/ok, 1 no (or failed verification), 2 timeout, 3 error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .core import EXACT, FLOAT, DEFAULT_EPS, Decomposition, edge_violation, format_number, instance_to_graph
from .fileio import (
    ParseError,
    format_solution,
    read_instance,
    read_solution,
    write_instance,
    write_keyvalue,
    write_solution,
)

EXIT_YES, EXIT_NO, EXIT_TIMEOUT, EXIT_ERROR = 0, 1, 2, 3

log = logging.getLogger("cliquedecomp")


def _range(text: str) -> tuple:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}")
    return int(lo), int(hi)


def _budget(args, k_file):
    return args.k if args.k is not None else k_file


# --------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    from . import gen

    if args.corpus:
        return _gen_corpus(args)
    seed = args.seed
    if args.model == "tf":
        mem = gen.read_membership(args.membership) if args.membership else None
        p = gen.gen_tf(args.k, args.scale, seed, mem)
    elif args.model == "lv":
        mem = gen.read_membership(args.membership) if args.membership else None
        p = gen.gen_lv(args.k, args.scale, seed, mem)
    elif args.model == "random":
        p = gen.gen_random_planted(args.k, args.n, tuple(args.sizes), args.overlap, args.weights, seed)
    elif args.model == "articulated":
        p = gen.gen_articulated(args.k_core, args.k - args.k_core, seed, weight_model=args.weights)
    else:
        if args.sets:
            sets = [tuple(int(x) for x in s.split(",")) for s in args.sets.split(";")]
            e = gen.E3CInstance(args.q, tuple(sets))
        else:
            e = gen.random_e3c(args.q, args.m, seed)
        p = gen.gen_e3c(e)
    _write_planted(p, args.out)
    print(f"{args.out}.inst n={p.graph.n} m={p.graph.m} k={p.k}")
    return EXIT_YES


def _write_planted(p, prefix):
    prefix = str(prefix)
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    write_instance(prefix + ".inst", p.graph, p.k)
    prov = dict(p.provenance)
    if p.truth is not None:
        write_solution(prefix + ".sol", p.truth, p.graph.labels)
        K = p.truth.total_weight()
        if K == int(K):
            prov["K"] = int(K)
    write_keyvalue(prefix + ".prov", prov)


def _gen_corpus(args) -> int:
    from . import gen

    out = Path(args.corpus)
    out.mkdir(parents=True, exist_ok=True)
    lo, hi = args.k_range
    count = 0
    for model in args.models.split(","):
        for scale in args.scales.split(","):
            for k in range(lo, hi + 1):
                for s in range(args.seeds):
                    seed = (args.seed or 0) + s
                    fn = gen.gen_tf if model == "tf" else gen.gen_lv
                    p = fn(k, scale, seed)
                    _write_planted(p, out / f"{model}_{scale}_k{k:02d}_s{seed:03d}")
                    count += 1
    print(f"{count} instances in {out}")
    return EXIT_YES


def cmd_preprocess(args) -> int:
    from .preprocess import preprocess

    g, k = read_instance(args.instance, args.mode)
    k = _budget(args, k)
    res = preprocess(g, k)
    if res is None:
        print("no: removed cliques alone exceed the budget")
        return EXIT_NO
    removed = Decomposition(res.removed)
    print(f"removed={len(res.removed)} n={res.reduced.n} m={res.reduced.m} k={res.k_reduced}")
    if args.out:
        write_instance(args.out + ".inst", res.reduced, res.k_reduced)
        write_solution(args.out + ".removed", removed, g.labels)
    else:
        sys.stdout.write(format_solution(removed, g.labels))
    return EXIT_YES


def cmd_kernelize(args) -> int:
    from .core import _graph_matrix
    from .kernel import format_lift_data, kernelize

    g, k = read_instance(args.instance, args.mode)
    k = _budget(args, k)
    kr = kernelize(_graph_matrix(g, k, args.mode, args.eps))
    if kr is None:
        print(f"no: more than 2^{k} blocks")
        return EXIT_NO
    labels = [g.labels[v] for v in kr.kept]
    red = instance_to_graph(kr.reduced, labels)
    print(f"blocks={len(kr.blocks)} n_ker={kr.n_ker} collapsed={len(kr.lift_data)}")
    if args.out:
        write_instance(args.out + ".inst", red, k)
        Path(args.out + ".lift").write_text(format_lift_data(kr, g.labels), encoding="utf-8")
    return EXIT_YES


def cmd_solve(args) -> int:
    from .pipeline import TIMEOUT, YES, solve_graph, sweep_k

    g, k = read_instance(args.instance, args.mode)
    opts = dict(mode=args.mode, eps=args.eps, timeout=args.timeout,
                symmetry_breaking=not args.no_symmetry, deepening=not args.no_deepening,
                use_preprocess=not args.no_preprocess,
                use_kernel=not args.no_kernel)
    if args.sweep_k:
        lo, hi = args.sweep_k
        budget, res = sweep_k(g, lo, hi, args.alg, **opts)
    elif args.alg == "wecp":
        if args.K is None:
            raise ValueError("--K is required for the wecp baseline")
        budget, res = args.K, solve_graph(g, alg="wecp", K=args.K, **opts)
    else:
        budget = _budget(args, k)
        res = solve_graph(g, budget, args.alg, **opts)
    times = " ".join(f"{s}_ms={t:.1f}" for s, t in res.time_ms.items() if s != "verify")
    print(f"{res.status} budget={budget} n_ker={res.n_ker} {times}")
    if res.status == YES:
        text = format_solution(res.decomposition, g.labels)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_YES
    return EXIT_TIMEOUT if res.status == TIMEOUT else EXIT_NO


def cmd_oracle(args) -> int:
    from .core import _graph_matrix, decomposition_from
    from .oracle import oracle_decide

    g, k = read_instance(args.instance, args.mode)
    inst = _graph_matrix(g, _budget(args, k), args.mode, args.eps)
    found = oracle_decide(inst, integral=args.integral)
    if found is None:
        print("no")
        return EXIT_NO
    print("yes")
    sys.stdout.write(format_solution(decomposition_from(*found, drop_trivial=not g.annotated), g.labels))
    return EXIT_YES


def cmd_verify(args) -> int:
    g, _ = read_instance(args.instance, args.mode)
    d = read_solution(args.solution, g.labels, args.mode)
    bad = edge_violation(g, d, args.eps if args.mode == FLOAT else None)
    if bad is None:
        print(f"ok: {len(d)} cliques, total weight {format_number(d.total_weight())}")
        return EXIT_YES
    kind, item, want, got = bad
    if kind == "edge":
        where = f"edge {g.labels[item[0]]} {g.labels[item[1]]}"
    elif kind == "vertex":
        where = f"vertex {g.labels[item]}"
    else:
        where = f"clique {' '.join(str(v) for v in item)}"
    print(f"fail: {where} expected {want} got {got}")
    return EXIT_NO


def cmd_bench(args) -> int:
    from .bench import bench

    corpus = args.corpus
    if args.full_corpus:
        ns = argparse.Namespace(corpus=corpus, models="tf,lv", scales="small,medium,large",
                                k_range=(2, 20), seeds=20, seed=args.seed)
        if not any(Path(corpus).glob("*.inst")):
            _gen_corpus(ns)
    text = bench(corpus, args.algs.split(","), args.timeout, args.out, mode=args.mode, eps=args.eps,
                 K=args.K, parallel=args.parallel, solutions_dir=args.solutions,
                 symmetry_breaking=not args.no_symmetry, deepening=not args.no_deepening)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_YES


# --------------------------------------------------------------------------
# parser


def _common_flags(p: argparse.ArgumentParser, suppress: bool) -> argparse.ArgumentParser:
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--mode", choices=(EXACT, FLOAT), default=d(EXACT), help="arithmetic (default exact)")
    p.add_argument("--eps", type=float, default=d(DEFAULT_EPS), help="tolerance in float mode")
    p.add_argument("--seed", type=int, default=d(None))
    p.add_argument("--timeout", type=float, default=d(None), help="seconds per solve")
    p.add_argument("--parallel", type=int, default=d(1), help="worker processes for bench")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return p


def build_parser() -> argparse.ArgumentParser:
    top = _common_flags(argparse.ArgumentParser(add_help=False), suppress=False)
    # subcommands accept the same flags; SUPPRESS keeps them from clobbering values given before the subcommand
    common = _common_flags(argparse.ArgumentParser(add_help=False), suppress=True)

    p = argparse.ArgumentParser(prog="cliquedecomp", description="Exact weighted clique decomposition.",
                                parents=[top])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a planted instance or corpus")
    g.add_argument("--model", choices=("tf", "lv", "random", "e3c", "articulated"), default="tf")
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--scale", default="small", help="small|medium|large (or an integer)")
    g.add_argument("--membership", help="TSV: module-id, gene, score, pathway-flag")
    g.add_argument("--n", type=int, default=12, help="vertices (random model)")
    g.add_argument("--sizes", type=int, nargs=2, default=(2, 5), metavar=("MIN", "MAX"))
    g.add_argument("--overlap", type=float, default=0.3)
    g.add_argument("--weights", default="uniform:4", help="unit | uniform:W | heavy:D")
    g.add_argument("--k-core", type=int, default=2, help="core cliques (articulated model)")
    g.add_argument("--q", type=int, default=1)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--sets", help="e3c triples, e.g. '0,1,2;1,2,3'")
    g.add_argument("--out", default="instance", help="output prefix")
    g.add_argument("--corpus", help="write a TF/LV corpus into this directory instead")
    g.add_argument("--models", default="tf,lv")
    g.add_argument("--scales", default="small,medium")
    g.add_argument("--k-range", type=_range, default=(2, 6))
    g.add_argument("--seeds", type=int, default=10)
    g.set_defaults(func=cmd_gen)

    pp = sub.add_parser("preprocess", parents=[common], help="remove edge-isolated cliques")
    pp.add_argument("instance")
    pp.add_argument("--k", type=int)
    pp.add_argument("--out", help="output prefix for .inst and .removed")
    pp.set_defaults(func=cmd_preprocess)

    kz = sub.add_parser("kernelize", parents=[common], help="reduce to at most 4^k rows")
    kz.add_argument("instance")
    kz.add_argument("--k", type=int)
    kz.add_argument("--out", help="output prefix for .inst and .lift")
    kz.set_defaults(func=cmd_kernelize)

    s = sub.add_parser("solve", parents=[common], help="run the full pipeline")
    s.add_argument("instance")
    s.add_argument("--alg", choices=("lp", "ip", "wecp", "milp"), default="lp")
    s.add_argument("--k", type=int, help="clique budget (default: from the file)")
    s.add_argument("--K", type=int, help="total weight budget for wecp")
    s.add_argument("--sweep-k", type=_range, help="lo..hi: report the first budget that is YES")
    s.add_argument("--out", help="solution file")
    s.add_argument("--no-preprocess", action="store_true")
    s.add_argument("--no-kernel", action="store_true")
    s.add_argument("--no-symmetry", action="store_true", help="disable column symmetry breaking")
    s.add_argument("--no-deepening", action="store_true", help="search only the given budget, not 0..k first")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", parents=[common], help="brute force (tiny instances)")
    o.add_argument("instance")
    o.add_argument("--k", type=int)
    o.add_argument("--integral", action="store_true", help="integral weights only")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", parents=[common], help="check a solution file")
    v.add_argument("instance")
    v.add_argument("solution")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", parents=[common], help="benchmark a corpus, CSV out")
    b.add_argument("corpus")
    b.add_argument("--algs", default="lp,ip")
    b.add_argument("--K", type=int, help="override the wecp budget")
    b.add_argument("--out", help="CSV path (default stdout)")
    b.add_argument("--solutions", help="directory for solution files of YES rows")
    b.add_argument("--full-corpus", action="store_true",
                   help="first fill an empty corpus dir with TF/LV, k 2..20, 3 scales, 20 seeds")
    b.add_argument("--no-symmetry", action="store_true")
    b.add_argument("--no-deepening", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as err:  # noqa: BLE001 - any failure maps to the error exit code
        log.debug("unhandled", exc_info=True)
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
