import subprocess
import sys

import pytest

from fle import PolygonalCurve, parse_curve, write_curve
from fle.bench import HEADER, read_csv
from fle.cli import main


@pytest.fixture
def files(tmp_path):
    def make(name, pts):
        path = tmp_path / name
        write_curve(PolygonalCurve(pts), path)
        return str(path)
    return make


@pytest.fixture
def line_pair(files):
    return files("line.txt", [(0, 0), (10, 0)]), files("offset.txt", [(0, 0.5), (10, 0.5)])


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decide_yes_prints_witness(capsys, line_pair):
    code, out, err = run(capsys, "decide", "-p", line_pair[0], "-q", line_pair[1], "-e", "1")
    assert code == 0
    assert out.splitlines() == ["yes", "1.00000000000 2.00000000000"]
    assert err == ""


def test_decide_no(capsys, files, line_pair):
    far = files("far.txt", [(0, 3), (10, 3)])
    code, out, err = run(capsys, "decide", "-p", line_pair[0], "-q", far, "-e", "1")
    assert (code, out, err) == (1, "no\n", "")


def test_decide_precondition_failure(capsys, files, line_pair):
    short = files("short.txt", [(0, 0), (1, 0), (2, 0)])
    code, out, err = run(capsys, "decide", "-p", short, "-q", line_pair[1], "-e", "1")
    assert code == 2 and out == "" and "longer edges" in err


def test_decide_nonstrict_mode(capsys, files):
    p = files("p.txt", [(0, 0), (2, 0), (4, 0)])
    q = files("q.txt", [(0, 0), (4, 0)])
    assert run(capsys, "decide", "-p", p, "-q", q, "-e", "1")[0] == 2
    assert run(capsys, "decide", "-p", p, "-q", q, "-e", "1", "--mode", "nonstrict")[0] == 0


def test_compute_and_approx(capsys, line_pair):
    assert run(capsys, "compute", "-p", line_pair[0], "-q", line_pair[1])[:2] == (0, "0.500000000000\n")
    assert run(capsys, "approx", "-p", line_pair[0], "-q", line_pair[1])[:2] == (0, "0.500000000000\n")


def test_outcomes_print_words(capsys, files, line_pair):
    far = files("far.txt", [(0, 9), (10, 9)])
    assert run(capsys, "compute", "-p", line_pair[0], "-q", far)[1] == "above-threshold\n"
    assert run(capsys, "approx", "-p", line_pair[0], "-q", far)[1] == "unknown\n"


def test_oracle(capsys, line_pair):
    assert run(capsys, "oracle", "exact", "-p", line_pair[0], "-q", line_pair[1])[1] == "0.500000000000\n"
    assert run(capsys, "oracle", "decide", "-p", line_pair[0], "-q", line_pair[1], "-e", "0.4")[:2] == (1, "no\n")
    assert run(capsys, "oracle", "decide", "-p", line_pair[0], "-q", line_pair[1])[0] == 64


def test_index_build_and_query(capsys, tmp_path, line_pair):
    idx = str(tmp_path / "p.idx")
    assert run(capsys, "index", "build", "-p", line_pair[0], "-o", idx)[0] == 0
    assert open(idx, "rb").read(7) == b"FLEIDX1"
    code, out, _ = run(capsys, "index", "query", "-i", idx, "-q", line_pair[1], "-e", "1")
    assert code == 0 and out.splitlines() == ["yes", "1.00000000000 2.00000000000"]


def test_index_query_rejects_corrupt_file(capsys, tmp_path, line_pair):
    bad = tmp_path / "bad.idx"
    bad.write_bytes(b"NOTANIDX")
    code, _, err = run(capsys, "index", "query", "-i", str(bad), "-q", line_pair[1], "-e", "1")
    assert code == 2 and "FLEIDX1" in err


def test_gen_walk_is_seeded(capsys, monkeypatch):
    a = run(capsys, "gen", "--n", "5", "--seed", "3")[1]
    b = run(capsys, "gen", "--n", "5", "--seed", "3")[1]
    c = run(capsys, "gen", "--n", "5", "--seed", "4")[1]
    assert a == b != c
    monkeypatch.setenv("FLE_SEED", "3")
    assert run(capsys, "gen", "--n", "5", "--seed", "4")[1] == a


def test_gen_pair(capsys, tmp_path):
    p, q = str(tmp_path / "p.txt"), str(tmp_path / "q.txt")
    code = run(capsys, "gen", "--n", "20", "--m", "6", "--min-edge", "3", "--q-min-edge", "4",
               "--max-edge", "6", "-o", p, "--q-out", q)[0]
    assert code == 0
    P, Q = parse_curve(p), parse_curve(q)
    assert (P.n, Q.n) == (20, 6)
    assert run(capsys, "decide", "-p", p, "-q", q, "-e", "1")[0] in (0, 1)


def test_gen_pair_needs_outputs(capsys):
    assert run(capsys, "gen", "--n", "20", "--m", "6")[0] == 64


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "64,128", "--reps", "1", "--algos", "greedy,oracle,query")
    assert code == 0
    assert out.splitlines()[0] == ",".join(HEADER)
    recs = read_csv(out)
    assert [(r.algo, r.n) for r in recs] == [(a, n) for n in (64, 128) for a in ("greedy", "oracle", "query")]
    assert all(r.result == "yes" for r in recs)


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["decide", "-p", "x"],
    ["decide", "--bogus"],
    ["bench", "--algos", "magic"],
    ["bench", "--sizes", "a,b"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 64 and err


def test_parse_error_reports_line(capsys, files, tmp_path):
    dup = tmp_path / "dup.txt"
    dup.write_text("0,0\n0,0\n")
    code, _, err = run(capsys, "decide", "-p", str(dup), "-q", str(dup), "-e", "1")
    assert code == 2 and "duplicate consecutive vertex at line 2" in err


def test_missing_file(capsys, line_pair):
    assert run(capsys, "decide", "-p", "/nonexistent/p.txt", "-q", line_pair[1], "-e", "1")[0] == 2


def test_module_entry_point(line_pair):
    proc = subprocess.run([sys.executable, "-m", "fle", "decide", "-p", line_pair[0], "-q", line_pair[1],
                           "-e", "1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("yes")


def test_compute_matches_oracle_end_to_end(capsys, tmp_path):
    p, q = str(tmp_path / "p.txt"), str(tmp_path / "q.txt")
    compared = 0
    seed = 0
    while compared < 50:
        seed += 1
        run(capsys, "gen", "--n", "12", "--m", "5", "--min-edge", "5", "--max-edge", "8",
            "--q-min-edge", "8", "--seed", str(seed), "-o", p, "--q-out", q)
        value = run(capsys, "compute", "-p", p, "-q", q)[1].strip()
        if value == "above-threshold":
            continue
        exact = run(capsys, "oracle", "exact", "-p", p, "-q", q)[1].strip()
        assert abs(float(value) - float(exact)) <= 1e-9
        compared += 1
    assert seed < 200
