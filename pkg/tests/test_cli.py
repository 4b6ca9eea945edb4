import csv
import io
import json

import pytest

from dbmatch.cli import main
from dbmatch.gen import fig4_3dm, gen_tight_gap, star_instance


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def tight2(tmp_path):
    p = tmp_path / "tight.json"
    p.write_text(gen_tight_gap(2).to_json())
    return str(p)


def test_gap(capsys, tight2):
    code, out, _ = run(capsys, "gap", tight2)
    doc = json.loads(out)
    assert code == 0 and (doc["gap_num"], doc["gap_den"]) == (3, 2)


@pytest.mark.parametrize("method", ["brute", "approx", "bmatching"])
def test_solve(capsys, tight2, method):
    code, out, _ = run(capsys, "solve", tight2, "--method", method)
    doc = json.loads(out)
    assert code == 0 and doc["method"] == method and doc["wall_time"] is None
    assert doc["value_num"] == (3 if method == "bmatching" else 1)


def test_solve_timing_flag(capsys, tight2):
    _, out, _ = run(capsys, "--timing", "solve", tight2)
    assert isinstance(json.loads(out)["wall_time"], float)


def test_permute_methods(capsys, tmp_path):
    p = tmp_path / "star.json"
    p.write_text(star_instance(6, 2, False).to_json())
    for m in ("optimal", "rand", "derand", "tgreedy", "brute"):
        code, out, _ = run(capsys, "permute", str(p), "--method", m, "--seed", "3")
        doc = json.loads(out)
        assert code == 0 and sorted(doc["order"]) == list(range(1, 7))
    code, out, _ = run(capsys, "permute", str(p))
    assert json.loads(out)["value_num"] == 3


def test_expect(capsys, tmp_path):
    p = tmp_path / "star.json"
    p.write_text(star_instance(4, 2, True).to_json())
    code, out, _ = run(capsys, "expect", str(p), "--alg", "alg1")
    doc = json.loads(out)
    assert code == 0 and (doc["expectation_num"], doc["expectation_den"]) == (4, 3)


def test_gen_kinds(capsys, tmp_path):
    for argv in (["tight-gap", "--d", "3"], ["star", "--n", "4"], ["fig3"], ["random", "--seed", "2"],
                 ["3dm", "--q", "3"]):
        code, out, _ = run(capsys, "gen", *argv)
        assert code == 0 and json.loads(out)
    h = tmp_path / "h.json"
    h.write_text(fig4_3dm().to_json())
    code, out, _ = run(capsys, "gen", "double", "--from", str(h))
    assert code == 0 and len(json.loads(out)["edges"]) == 20
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"nodes": 3, "edges": [[1, 2]]}))
    code, out, _ = run(capsys, "gen", "hampath", "--from", str(g))
    assert code == 0 and json.loads(out)["b_profile"] == [1, 1, 2]


def test_gen_random_round_trips_into_solve(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    assert run(capsys, "gen", "random", "--n", "5", "--seed", "8", "--out", str(out_file))[0] == 0
    code, out, _ = run(capsys, "solve", str(out_file))
    assert code == 0 and json.loads(out)["command"] == "solve"


def test_outputs_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (a, b):
        assert run(capsys, "bench", "--count", "4", "--seed", "5", "--methods", "brute,approx,rand,derand",
                   "--out", str(f))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(io.StringIO(a.read_text())))
    assert len(rows) == 16
    assert [(r["digest"], r["method"]) for r in rows] == sorted((r["digest"], r["method"]) for r in rows)


def test_bench_marks_precondition_rows(capsys):
    code, out, _ = run(capsys, "bench", "--count", "1", "--n", "4", "--d", "2", "--cyclic", "--methods", "approx")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["status"].startswith("skipped")


def test_csv_format(capsys, tight2):
    code, out, _ = run(capsys, "gap", tight2, "--format", "csv")
    header, row = out.strip().splitlines()
    assert code == 0 and "gap_num" in header.split(",")


def test_exit_code_precondition(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(star_instance(4, 2, True).to_json())
    code, _, err = run(capsys, "solve", str(p), "--method", "approx")
    assert code == 3 and "DivisibilityViolated" in err


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", json.dumps({"n": 2})])
def test_exit_code_bad_input(capsys, tmp_path, content):
    p = tmp_path / "x.json"
    p.write_text(content)
    assert run(capsys, "solve", str(p))[0] == 2


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "gap", str(tmp_path / "nope.json"))[0] == 2


def test_gen_needs_source(capsys):
    assert run(capsys, "gen", "double")[0] == 2


def test_unknown_bench_method(capsys):
    assert run(capsys, "bench", "--methods", "magic")[0] == 2


def test_argparse_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 2
