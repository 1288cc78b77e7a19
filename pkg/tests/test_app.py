"""
================================================================================
TESTS - CLI
================================================================================

Subcomandos de app.py con click.testing.CliRunner: ficheros emitidos,
JSON con "schema": 1 y códigos de salida 0 / 1 / 2.

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import csv
import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from click.testing import CliRunner

import app
from app import cli
from metric_core import dump_space, load_space, validate


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def endpoints(tmp_path):
    a = dump_space(validate([[0, 1], [1, 0]]), tmp_path / "a.json")
    b = dump_space(validate([[0, 2], [2, 0]]), tmp_path / "b.json")
    return str(a), str(b)


# =============================================================================
# CONSTRUCT
# =============================================================================

def test_construct_cantor(runner, tmp_path):
    target = tmp_path / "c.json"
    result = runner.invoke(cli, ["construct", "cantor", "--c", "0.5", "--depth", "3", "-o", str(target)])
    assert result.exit_code == 0, result.stderr
    X = load_space(target)
    assert X.n == 8
    assert json.loads(target.read_text())["schema"] == 1


def test_construct_telescope(runner, tmp_path):
    spec = tmp_path / "t.json"
    spec.write_text(json.dumps({"stages": [{"kind": "point"}, {"kind": "point"}]}))
    target = tmp_path / "t_out.json"
    result = runner.invoke(cli, ["construct", "telescope", str(spec), "-o", str(target)])
    assert result.exit_code == 0, result.stderr
    assert load_space(target).labels == ("inf", "T1/pt", "T2/pt")


def test_construct_u_space(runner, tmp_path):
    spec = tmp_path / "u.json"
    spec.write_text(json.dumps({"q": [0.2, 0.8], "parts": {"kind": "point", "J": 2}}))
    result = runner.invoke(cli, ["construct", "u-space", str(spec)])
    assert result.exit_code == 0, result.stderr
    assert len(json.loads(result.stdout)["labels"]) == 7


def test_construct_triple(runner):
    result = runner.invoke(cli, ["construct", "triple", "--j", "1", "--q", "1.0"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["labels"] == ["a1", "a2", "a3"]


def test_construct_inflate(runner, tmp_path, endpoints):
    target = tmp_path / "inf.json"
    result = runner.invoke(cli, ["construct", "inflate", endpoints[0], "--eps", "0.5", "--depth", "1",
                                 "-o", str(target)])
    assert result.exit_code == 0, result.stderr
    assert load_space(target).n == 4


def test_invalid_stage_exits_2(runner, tmp_path):
    spec = tmp_path / "t.json"
    spec.write_text(json.dumps({"stages": [[[0, 0.9], [0.9, 0]]]}))
    result = runner.invoke(cli, ["construct", "telescope", str(spec)])
    assert result.exit_code == 2
    assert "StageDiameterTooLarge" in result.stderr


# =============================================================================
# GH
# =============================================================================

def test_gh_exact(runner, endpoints):
    result = runner.invoke(cli, ["gh", "exact", *endpoints])
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["schema"] == 1
    assert data["upper"] == 0.5
    assert data["exact"] is True
    assert data["witness_pairs"] == [[0, 0], [1, 1]]


def test_gh_bound(runner, endpoints):
    result = runner.invoke(cli, ["gh", "bound", *endpoints, "--restarts", "4", "--seed", "1"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["lower"] <= data["upper"]


def test_triangle_violation_exits_2(runner, tmp_path, endpoints):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dist": [[0, 1, 3], [1, 0, 1], [3, 1, 0]]}))
    result = runner.invoke(cli, ["gh", "exact", str(bad), endpoints[0]])
    assert result.exit_code == 2
    assert "TriangleViolation" in result.stderr


# =============================================================================
# ANALYZE
# =============================================================================

def test_analyze(runner, tmp_path):
    space = tmp_path / "c.json"
    runner.invoke(cli, ["construct", "cantor", "--depth", "3", "-o", str(space)])
    result = runner.invoke(cli, ["analyze", str(space), "--t", "0.25"])
    assert result.exit_code == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["ud_delta"] == 1.0
    assert data["up_c"] == pytest.approx(0.5)


def test_analyze_resolution_out_of_range(runner, endpoints):
    result = runner.invoke(cli, ["analyze", endpoints[0], "--t", "5"])
    assert result.exit_code == 2


def test_analyze_sweep_csv(runner, tmp_path):
    target = tmp_path / "sweep.csv"
    result = runner.invoke(cli, ["analyze", "--sweep-depth", "--c", "0.5", "--depth", "4", "-o", str(target)])
    assert result.exit_code == 0, result.stderr
    with target.open() as f:
        rows = list(csv.DictReader(f))
    assert [int(r["depth"]) for r in rows] == [2, 3, 4]


def test_analyze_needs_space(runner):
    assert runner.invoke(cli, ["analyze"]).exit_code == 2


# =============================================================================
# GEODESIC
# =============================================================================

def test_geodesic_straight(runner, tmp_path, endpoints):
    report = tmp_path / "report.json"
    rows = tmp_path / "rows.csv"
    result = runner.invoke(cli, ["geodesic", "straight", *endpoints, "--grid", "6",
                                 "-o", str(report), "--csv", str(rows)])
    assert result.exit_code == 0, result.stderr
    data = json.loads(report.read_text())
    assert data["passed"] is True
    assert data["L"] == 0.5
    assert len(data["rows"]) == 15
    with rows.open() as f:
        assert len(list(csv.DictReader(f))) == 15


def test_geodesic_straight_isometric_exits_2(runner, endpoints):
    result = runner.invoke(cli, ["geodesic", "straight", endpoints[0], endpoints[0]])
    assert result.exit_code == 2


@pytest.fixture
def bunch_file(tmp_path):
    spec = tmp_path / "bunch.json"
    spec.write_text(json.dumps({
        "X": [[0, 1], [1, 0]],
        "Y": [[0, 2], [2, 0]],
        "A": [0, 0.5, 1],
        "J": 1,
        "tail": "point",
    }))
    return str(spec)


def test_geodesic_bunch(runner, tmp_path, bunch_file):
    target = tmp_path / "bunch_report.json"
    result = runner.invoke(cli, ["geodesic", "bunch", bunch_file, "--s-grid", "5", "--q-samples", "2",
                                 "--seed", "3", "-o", str(target)])
    assert result.exit_code == 0, result.stderr
    data = json.loads(target.read_text())
    assert data["endpoints"] is True
    assert data["branch_agreement"] is True
    assert data["geodesic"] is True
    assert len(data["distinctness"]) == 1
    assert data["distinctness_passed"] is True


@pytest.mark.parametrize("verdict", ["isometric", "inconclusive"])
def test_geodesic_bunch_uncertified_pair_exits_1(runner, tmp_path, bunch_file, monkeypatch, verdict):
    def rows(spec, samples):
        (s, q), (t, r) = samples[:2]
        return [{"s": s, "q": list(q.coords), "t": t, "r": list(r.coords),
                 "verdict": verdict, "method": "oracle"}]

    monkeypatch.setattr(app, "bunch_distinctness", rows)
    target = tmp_path / "bunch_report.json"
    result = runner.invoke(cli, ["geodesic", "bunch", bunch_file, "--s-grid", "5", "--q-samples", "2",
                                 "--seed", "3", "-o", str(target)])
    assert result.exit_code == 1
    assert "Distinción del haz" in result.stderr
    data = json.loads(target.read_text())
    assert data["geodesic"] is True
    assert data["distinctness_passed"] is False


# =============================================================================
# REPRODUCE
# =============================================================================

def test_reproduce_only(runner, tmp_path):
    result = runner.invoke(cli, ["reproduce", "--out", str(tmp_path), "--only", "ultrametric_ud", "--json"])
    assert result.exit_code == 0, result.stderr
    summary = json.loads(result.stdout)
    assert summary["passed"] is True
    assert (tmp_path / "summary.json").is_file()


def test_reproduce_with_fault_exits_1(runner, tmp_path):
    result = runner.invoke(cli, ["reproduce", "--out", str(tmp_path), "--only", "cantor_up",
                                 "--inject-fault", "cantor_up"])
    assert result.exit_code == 1
    assert "[FAIL] cantor_up" in result.stdout


def test_reproduce_unknown_criterion_exits_2(runner, tmp_path):
    result = runner.invoke(cli, ["reproduce", "--out", str(tmp_path), "--only", "nope"])
    assert result.exit_code == 2
