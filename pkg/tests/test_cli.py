import io
import json
from pathlib import Path

import pytest

from ghostcoal.cli import EXIT_INPUT, EXIT_LIMIT, EXIT_OK, EXIT_VIOLATION, main
from ghostcoal.specfile import SCHEMA

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"
WORKED = ["--model", str(DATA / "worked_model.json"), "--state", str(DATA / "worked_state.json")]
THREE = ["--model", str(DATA / "three_model.json"), "--state", str(DATA / "three_state.json")]
BROWN = ["--model", str(DATA / "brownian_model.json"), "--state", str(DATA / "brownian_state.json")]


def run(*argv):
    buf = io.StringIO()
    status = main(list(argv), stream=buf)
    return status, buf.getvalue()


def records(text):
    lines = [json.loads(l) for l in text.splitlines()]
    assert lines[0]["schema"] == SCHEMA
    return lines[1:]


def test_prob_human():
    status, text = run("prob", *WORKED)
    assert status == EXIT_OK
    assert "Z = 1/16" in text and "I1->2 I2->[1,3]" in text


def test_normalize_check():
    for files in (WORKED, THREE):
        status, text = run("normalize-check", *files)
        assert status == EXIT_OK and "total = 1/1" in text


def test_audit_three_walkers():
    status, text = run("audit", *THREE)
    assert status == EXIT_OK
    assert "candidates: 3" in text and "sign identity: holds" in text and "violations: 0" in text


@pytest.mark.parametrize("cmd", [["prob"], ["symbolic"], ["ghost-free"], ["permuted-set"],
                                 ["audit"], ["planarity"], ["oracle", "perf"], ["oracle", "dp"],
                                 ["oracle", "castings"], ["normalize-check"]])
def test_structured_is_deterministic_and_exact(cmd):
    a = run(*cmd, *WORKED, "--format", "structured")
    b = run(*cmd, *WORKED, "--format", "structured")
    assert a == b and a[0] == EXIT_OK
    for rec in records(a[1]):
        for v in rec.values():
            assert not isinstance(v, float)


def test_structured_prob_fields():
    _, text = run("prob", *WORKED, "--format", "structured")
    result = records(text)[-1]
    assert result == {"record": "result", "Z": "1/16", "candidates": 1}


def test_brownian_reals_carry_errors():
    for mode in ("density", "box"):
        status, text = run("brownian", mode, *BROWN, "--format", "structured")
        assert status == EXIT_OK
        assert any("error" in r for r in records(text))


def test_density_grid_csv():
    status, text = run("density-grid", *BROWN, "--grid=-1:1:0.5")
    lines = text.splitlines()
    assert status == EXIT_OK and lines[0] == "y1,density" and len(lines) == 6
    assert float(lines[3].split(",")[1]) == pytest.approx(0.18427965, abs=1e-8)


def test_lgv(tmp_path):
    st = tmp_path / "s.json"
    st.write_text(json.dumps({"n": 2, "positions": {"[1,2]": -2, "[2,3]": 0}}))
    status, text = run("oracle", "lgv", "--model", str(DATA / "worked_model.json"),
                       "--state", str(st))
    assert status == EXIT_OK and "1/16" in text


def test_bad_input_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    status, _ = run("prob", "--model", str(bad), "--state", str(DATA / "worked_state.json"))
    assert status == EXIT_INPUT
    assert "line 1" in capsys.readouterr().err


def test_cap_exit(capsys):
    status, _ = run("audit", *THREE, "--cap", "2")
    assert status == EXIT_LIMIT
    assert "more than 2" in capsys.readouterr().err


def test_discrepancy_exit(tmp_path):
    # a lazy walk lets walkers swap places without sharing a vertex
    m = tmp_path / "lazy.json"
    m.write_text(json.dumps({"kind": "birth-death", "T": 2, "window": [-4, 5],
                             "parameters": {"up": "1/4", "down": "1/4"}, "sources": [0, 1]}))
    status, text = run("planarity", "--model", str(m), "--format", "structured")
    assert status == EXIT_VIOLATION
    rec = records(text)[-1]
    assert rec["record"] == "discrepancy" and rec["check"] == "P1"


def test_inadmissible_box_exit(tmp_path):
    st = tmp_path / "s.json"
    st.write_text(json.dumps({"n": 2, "ghosts": [2], "positions": {"[1,3]": 0, "2": 2},
                              "box": {"[1,3]": [0, 0], "2": [-10, 0]}}))
    status, _ = run("permuted-set", "--model", str(DATA / "worked_model.json"), "--state", str(st))
    assert status == EXIT_INPUT
