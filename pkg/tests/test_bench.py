import csv
import io

from cliquedecomp.bench import COLUMNS, PHASES, bench, read_bench
from cliquedecomp.cli import main


def test_empty_corpus_header_only(tmp_path):
    text = bench(tmp_path, ["lp"], None, None)
    assert text.strip() == ",".join(COLUMNS)


def test_three_instances_two_algs(tmp_path):
    corpus = tmp_path / "c"
    for seed in range(3):
        assert main(["gen", "--model", "random", "--k", "2", "--n", "7", "--seed", str(seed),
                     "--out", str(corpus / f"r{seed}")]) == 0
    out = tmp_path / "out.csv"
    sols = tmp_path / "sols"
    bench(corpus, ["lp", "ip"], 30, out, solutions_dir=sols)
    rows = read_bench(out)
    assert len(rows) == 3 * 2 * 4
    assert [r["phase"] for r in rows[:4]] == list(PHASES)
    assert {r["result"] for r in rows} == {"yes"}
    assert {r["recovered_ground_truth"] for r in rows} <= {"true", "false"}
    assert len(list(sols.glob("*.sol"))) == 6


def test_parallel_matches_serial_order(tmp_path):
    corpus = tmp_path / "c"
    for seed in range(3):
        main(["gen", "--model", "random", "--k", "2", "--n", "6", "--seed", str(seed), "--out", str(corpus / f"r{seed}")])
    a = read_bench(bench(corpus, ["lp", "wecp"], 30, None))
    b = read_bench(bench(corpus, ["lp", "wecp"], 30, None, parallel=2))
    key = lambda r: (r["instance"], r["alg"], r["phase"], r["result"])
    assert [key(r) for r in a] == [key(r) for r in b]


def test_failed_job_recorded(tmp_path):
    (tmp_path / "bad.inst").write_text("2 1 1\n0 1 oops\n")
    rows = read_bench(bench(tmp_path, ["lp"], None, None))
    assert len(rows) == 4 and {r["result"] for r in rows} == {"error"}


def test_cli_bench_stdout(tmp_path, capsys):
    main(["gen", "--model", "tf", "--k", "2", "--seed", "0", "--out", str(tmp_path / "t")])
    capsys.readouterr()
    assert main(["bench", str(tmp_path), "--algs", "lp"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 4 and rows[-1]["phase"] == "total"
