from __future__ import annotations

import csv
import io as stdio
import json

import pytest

from joinwidth import engines
from joinwidth.cli import EXIT_LIMIT, EXIT_NO, EXIT_OK, EXIT_USAGE, EXIT_WIDTH, run_cli
from joinwidth.decomposition import from_shape
from joinwidth.generators import gen_triangle
from joinwidth.io import (
    decomposition_to_text,
    instance_to_text,
    parse_decomposition,
    parse_instance,
    serialize_decomposition,
    serialize_instance,
)


def _run(*argv: str) -> tuple[int, str, str]:
    out, err = stdio.StringIO(), stdio.StringIO()
    code = run_cli([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    inst, dec = tmp_path / "triangle3.json", tmp_path / "tri_tree.json"
    serialize_instance(gen_triangle(3), inst)
    serialize_decomposition(from_shape(((0, 1), 2)), dec)
    return tmp_path, inst, dec


def test_solve_along_decomposition(files):
    _, inst, dec = files
    assert _run("solve", "--instance", inst, "--decomposition", dec) == (EXIT_OK, "SAT width=1.000\n", "")


def test_solve_engines_and_witness(files):
    _, inst, _ = files
    code, out, _ = _run("solve", "--instance", inst, "--witness")
    assert code == EXIT_OK
    first, second = out.splitlines()
    assert first == "SAT width=1.000"
    assert json.loads(second) == engines.extract_witness(gen_triangle(3))
    assert _run("solve", "--instance", inst, "--dp-vars", "--width", "1")[:2] == (EXIT_OK, "SAT\n")
    assert _run("solve", "--instance", inst, "--dp-cons", "--width", "0.5")[:2] == (EXIT_WIDTH, "WIDTH-EXCEEDED\n")


def test_search_not_found(files):
    _, inst, _ = files
    assert _run("search", "--instance", inst, "--max-width", "0.5")[:2] == (EXIT_NO, "NOT-FOUND\n")


def test_search_writes_decomposition(files):
    tmp, inst, _ = files
    out_path = tmp / "found.json"
    code, out, _ = _run("search", "--instance", inst, "--max-width", "1", "--out", out_path)
    direct = engines.find_decomposition_dp(gen_triangle(3), 1)
    assert code == EXIT_OK and out == "FOUND width=1.000\n"
    assert parse_decomposition(out_path) == direct.decomposition


def test_exact_matches_module(files):
    _, inst, _ = files
    res = engines.exact_joinwidth(gen_triangle(3))
    code, out, _ = _run("exact", "--instance", inst)
    assert code == EXIT_OK
    assert out == f"width=1.000 peak=5\n{decomposition_to_text(res.decomposition)}"


def test_width_table_and_cap(files):
    _, inst, dec = files
    code, out, _ = _run("width", "--instance", inst, "--decomposition", dec, "--mode", "naive")
    lines = out.splitlines()
    assert code == EXIT_OK
    assert [int(line.split()[3]) for line in lines[1:-1]] == [5, 5, 11, 5, 7]
    assert lines[-1].startswith("width=") and "peak=11 mode=naive" in lines[-1]
    code, out, _ = _run("width", "--instance", inst, "--decomposition", dec, "--mode", "naive", "--cap", "1")
    assert code == EXIT_WIDTH
    assert out.splitlines()[-1] == "WIDTH-EXCEEDED node=2 tuples=11 cap=5"


def test_gen_then_oracle(tmp_path):
    s = tmp_path / "s.json"
    assert _run("gen", "star", "--omega", "3", "--out", s)[0] == EXIT_OK
    assert _run("oracle", "solve", "--instance", s)[:2] == (EXIT_OK, "SAT solutions=8\n")


def test_gen_stdout_matches_module():
    code, out, _ = _run("gen", "triangle", "--N", "3")
    assert code == EXIT_OK and out == instance_to_text(gen_triangle(3))


def test_gen_from_graph(tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps([["1", "2"], ["2", "3"]]))
    code, out, _ = _run("gen", "bw-reduction", "--graph", g, "--omega", "1")
    assert code == EXIT_OK and '"variables": ["a", "v1", "v2", "v3", "b"]' in out
    assert _run("oracle", "branchwidth", "--graph", g)[:2] == (EXIT_OK, "branchwidth=1\n")


def test_oracle_joinwidth_and_limit(files):
    _, inst, _ = files
    assert _run("oracle", "joinwidth", "--instance", inst)[:2] == (EXIT_OK, "width=1.000 peak=5 trees=3\n")
    code, _, err = _run("oracle", "joinwidth", "--instance", inst, "--max-size", "2")
    assert code == EXIT_LIMIT and "limit exceeded" in err


def test_detect(tmp_path):
    ident = tmp_path / "id.json"
    assert _run("gen", "identity", "--n", "4", "--out", ident)[0] == EXIT_OK
    code, out, _ = _run("detect", "--instance", ident, "--class", "constraint-root", "--k", "1")
    assert code == EXIT_OK and out.startswith("YES class=constraint-root")
    assert json.loads(out.splitlines()[1])["constraints"] == [0]
    assert _run("detect", "--instance", ident, "--class", "fixing", "--k", "1")[:2] == (EXIT_NO, "NO class=fixing\n")
    assert _run("detect", "--instance", ident, "--class", "root-set")[0] == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    [],
    ["solve"],
    ["search", "--instance", "x.json", "--max-width", "-1"],
    ["solve", "--instance", "missing.json"],
])
def test_usage_errors(argv):
    code, out, err = _run(*argv)
    assert code == EXIT_USAGE and out == "" and err


def test_malformed_instance_exits_64(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"variables": ["a"], "domain": ["0"], "constraints": [{"scope": ["a"], "tuples": [["0", "0"]]}]}')
    code, _, err = _run("exact", "--instance", bad)
    assert code == EXIT_USAGE and "constraints[0].tuples[0]" in err


def test_bench(tmp_path):
    out_path = tmp_path / "b.csv"
    code, out, _ = _run("bench", "--suite", "families", "--out", out_path, "--engine", "exact")
    assert code == EXIT_OK and out == f"rows=4 out={out_path}\n"
    with open(out_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["instance_id"] for r in rows] == ["triangle-3", "star-4", "path-4-d2", "star-4-d3"]
    assert rows[0]["width"] == "1.000"


def test_round_trip_through_gen(tmp_path):
    path = tmp_path / "r.json"
    _run("gen", "random", "--seed", "4", "--vars", "5", "--domain", "2", "--constraints", "4", "--out", path)
    inst = parse_instance(path)
    res = engines.exact_joinwidth(inst)
    code, out, _ = _run("exact", "--instance", path)
    assert code == EXIT_OK
    assert out.splitlines()[0] == f"width={res.width:.3f} peak={res.peak_count}"
