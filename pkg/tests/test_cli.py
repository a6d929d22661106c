import json
import random

import pytest

from sparsegeo import cli
from sparsegeo.benchmarks import unit_square_system
from sparsegeo.errors import RetriesExhausted, SolverError


def write_system(tmp_path, system, name="system.json"):
    path = tmp_path / name
    path.write_text(json.dumps(system.to_json()))
    return str(path)


QUADRATIC = {"n": 1, "polynomials": [{"support": [[0], [1], [2]], "coefficients": ["2", "-3", "1"]}]}


@pytest.fixture
def quadratic(tmp_path):
    path = tmp_path / "quadratic.json"
    path.write_text(json.dumps(QUADRATIC))
    return str(path)


def test_solve_and_verify(tmp_path, quadratic):
    out = tmp_path / "solution.json"
    assert cli.main(["solve", quadratic, "-o", str(out), "--verify"]) == cli.EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["verified"] is True and doc["D"] == 2
    assert cli.main(["verify", quadratic, str(out)]) == cli.EXIT_OK


def test_verify_rejects_a_wrong_solution(tmp_path, quadratic, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"u": ["1"], "minimal_polynomial": ["-1", "0", "1"], "parametrizations": [["0", "1"]]}))
    assert cli.main(["verify", quadratic, str(bad)]) == cli.EXIT_UNVERIFIED
    assert "not verified" in capsys.readouterr().out


def test_mixed_volume(tmp_path, capsys):
    path = write_system(tmp_path, unit_square_system(random.Random(0)))
    assert cli.main(["mixed-volume", path]) == cli.EXIT_OK
    assert cli.main(["mixed-volume", path, "--oracle"]) == cli.EXIT_OK
    assert capsys.readouterr().out.split() == ["2", "2"]


def test_subdivide(tmp_path):
    path = write_system(tmp_path, unit_square_system(random.Random(0)))
    out = tmp_path / "cells.json"
    assert cli.main(["subdivide", path, "-o", str(out), "--seed", "3"]) == cli.EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["mixed_volume"] == 2
    assert len(doc["lifting"]) == 1 and len(doc["lifting"][0]) == 4


def test_missing_origin_exit_code(tmp_path):
    path = tmp_path / "no_origin.json"
    path.write_text(json.dumps({"n": 1, "polynomials": [{"support": [[1], [2]], "coefficients": ["1", "1"]}]}))
    assert cli.main(["solve", str(path)]) == cli.EXIT_PRECONDITION


def test_malformed_input_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "polynomials": [{"support": [[0, 0]], "coefficients": ["1"]}]}))
    assert cli.main(["solve", str(path)]) == cli.EXIT_PRECONDITION


def test_retry_and_error_exit_codes(quadratic, monkeypatch):
    def exhausted(system, config):
        raise RetriesExhausted(SolverError("boom"), {"lifting": 11})
    monkeypatch.setattr(cli, "solve", exhausted)
    assert cli.main(["solve", quadratic]) == cli.EXIT_RETRIES

    def failing(system, config):
        raise SolverError("boom")
    monkeypatch.setattr(cli, "solve", failing)
    assert cli.main(["solve", quadratic]) == cli.EXIT_ERROR


def test_output_is_deterministic(tmp_path, quadratic):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["solve", quadratic, "-o", str(a), "--seed", "7"])
    cli.main(["solve", quadratic, "-o", str(b), "--seed", "7"])
    assert a.read_bytes() == b.read_bytes()
