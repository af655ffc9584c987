import io
import json
import sys

import pytest

from conftest import DATA, cycle
from orthobend.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main

GOLDEN = str(DATA / "golden11.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def square(tmp_path):
    p = tmp_path / "square.json"
    p.write_text(cycle(4).to_json())
    return str(p)


def test_minimize_golden(capsys):
    code, out, _ = run(capsys, "minimize", GOLDEN)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "bends: 5"
    assert lines[1] == "seed: none"
    rep = json.loads("\n".join(lines[2:]))
    assert sum(len(e["bends"]) for e in rep["edges"]) == 5


def test_check_square(capsys, square):
    assert run(capsys, "check", square)[1] == "rectilinear: true\n"


def test_check_golden(capsys):
    assert run(capsys, "check", GOLDEN)[1] == "rectilinear: false\n"


def test_budget_table(capsys):
    code, out, _ = run(capsys, "budget", GOLDEN)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "total bends: 5"
    assert "Pio2_12" in out and "Pio3l_11" in out


def test_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = run(capsys, "minimize", str(tmp_path / "none.json"))
    assert code == EXIT_INPUT and "cannot read" in err


def test_malformed_json_is_input_error(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "check", str(p))[0] == EXIT_INPUT


def test_unknown_reference_edge(capsys):
    code, _, err = run(capsys, "minimize", GOLDEN, "--ref", "99")
    assert code == EXIT_INPUT and "unknown reference edge" in err


def test_bad_bench_sizes(capsys):
    assert run(capsys, "bench", "--sizes", "abc")[0] == EXIT_INPUT


def test_oracle_reports_no_mismatch(capsys):
    code, out, _ = run(capsys, "oracle", "--count", "20", "--seed", "3")
    assert code == EXIT_OK
    assert out.startswith("instances: 20, mismatches: 0")


def test_oracle_mismatch_exit_code(capsys, monkeypatch):
    import orthobend.flow_oracle as fo

    monkeypatch.setattr(fo, "flow_min_bends", lambda g: -1)
    code, out, err = run(capsys, "oracle", "--count", "3")
    assert code == EXIT_MISMATCH
    assert "mismatch at instance 0" in err
    json.loads(out)  # the offending instance


def test_reads_stdin(capsys, monkeypatch):
    data = (DATA / "golden11.json").read_bytes()
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(data)))
    code, out, _ = run(capsys, "minimize", "-")
    assert code == EXIT_OK and out.startswith("bends: 5\n")


def test_output_is_deterministic(capsys):
    a = run(capsys, "draw", GOLDEN, "--seed", "4")[1]
    b = run(capsys, "draw", GOLDEN, "--seed", "4")[1]
    assert a == b and a.startswith("<?xml")


def test_draw_json_to_file(capsys, tmp_path):
    out = tmp_path / "d.json"
    code, text, _ = run(capsys, "draw", GOLDEN, "--format", "json", "--out", str(out))
    assert code == EXIT_OK and text.startswith("bends: 5")
    d = json.loads(out.read_text())
    assert sum(len(e["points"]) - 2 for e in d["edges"]) == 5


def test_gen_is_deterministic(capsys):
    a = run(capsys, "gen", "--n", "12", "--seed", "5")[1]
    b = run(capsys, "gen", "--n", "12", "--seed", "5")[1]
    assert a == b
    assert len(json.loads(a)["vertices"]) >= 12


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "100,1000")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 4
