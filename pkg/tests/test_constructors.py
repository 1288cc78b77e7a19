"""
================================================================================
TESTS - Constructores
================================================================================

Telescopio, cantor_beta, triples isósceles, U(q) e inflado de redes.

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from constructors import (
    MIN_CHORD,
    CubePoint,
    TailSpec,
    TelescopeSpec,
    apex_angle,
    cantor_beta,
    cantor_parts,
    chord_length,
    isosceles_triple,
    load_tail_spec,
    load_telescope_spec,
    net_inflation,
    one_point_parts,
    telescope,
    u_space,
    u_space_modulus,
)
from errors import (
    DepthTooLarge,
    DimensionMismatch,
    InvalidParameter,
    PartDiameterTooLarge,
    StageDiameterTooLarge,
)
from gh_solver import distortion
from metric_core import diameter, equilateral_space, one_point_space, validate


def _is_ultrametric(X) -> bool:
    D = X.dist
    n = X.n
    for i in range(n):
        bound = np.maximum(D[i][None, :], D)
        if np.any(D[i][:, None] > bound + 1e-15):
            return False
    return True


# =============================================================================
# TRIÁNGULO
# =============================================================================

def test_chord_and_angle():
    assert chord_length(math.pi / 3) == pytest.approx(1.0)
    assert apex_angle(0.0) == pytest.approx(math.pi / 6)
    assert apex_angle(1.0) == pytest.approx(math.pi / 3)
    assert MIN_CHORD == pytest.approx(2 * math.sin(math.pi / 12))


def test_isosceles_triple():
    T = isosceles_triple(1, 0.0)
    assert T.labels == ("a1", "a2", "a3")
    assert T.dist[0, 1] == T.dist[1, 2] == 0.25
    assert T.dist[0, 2] == pytest.approx(0.25 * MIN_CHORD)
    equilateral = isosceles_triple(2, 1.0)
    assert equilateral.dist[0, 2] == pytest.approx(equilateral.dist[0, 1])


def test_cube_point():
    q = CubePoint((0.3,))
    assert q.coord(1) == 0.3
    assert q.coord(5) == 0.0
    assert q.padded(3).coords == (0.3, 0.0, 0.0)
    with pytest.raises(InvalidParameter):
        CubePoint((1.5,))


# =============================================================================
# TELESCOPIO
# =============================================================================

def test_telescope_two_points():
    T = telescope(TelescopeSpec((one_point_space(), one_point_space())))
    assert T.labels == ("inf", "T1/pt", "T2/pt")
    assert T.dist[0, 1] == 0.5
    assert T.dist[0, 2] == 0.25
    assert T.dist[1, 2] == 0.25


def test_telescope_keeps_stage_metric():
    stage = equilateral_space(3, side=0.1)
    T = telescope(TelescopeSpec((stage,)))
    assert T.n == 4
    np.testing.assert_array_equal(T.dist[1:, 1:], stage.dist)


def test_stage_too_wide():
    with pytest.raises(StageDiameterTooLarge) as info:
        TelescopeSpec((equilateral_space(2, side=0.3),))
    assert info.value.i == 1


def test_load_telescope_spec(tmp_path):
    spec = tmp_path / "t.json"
    spec.write_text(json.dumps({"stages": [{"kind": "point"}, [[0, 0.1], [0.1, 0]]]}))
    T = telescope(load_telescope_spec(spec))
    assert T.n == 4


# =============================================================================
# CANTOR
# =============================================================================

def test_cantor_beta_depth_two():
    X = cantor_beta(0.5, 2)
    assert X.labels == ("00", "01", "10", "11")
    assert X.dist[0, 1] == 0.5
    assert X.dist[0, 2] == 1.0
    assert X.dist[2, 3] == 0.5
    assert diameter(X) == 1.0


@pytest.mark.parametrize("c", [0.2, 0.5, 0.8])
def test_cantor_is_ultrametric(c):
    assert _is_ultrametric(cantor_beta(c, 5))


def test_cantor_depth_limits():
    with pytest.raises(DepthTooLarge):
        cantor_beta(0.5, 99)
    with pytest.raises(InvalidParameter):
        cantor_beta(1.5, 3)


# =============================================================================
# ESPACIOS IDENTIFICADORES
# =============================================================================

def test_u_space_size_and_labels():
    spec = TailSpec(one_point_parts(2), CubePoint((0.2, 0.7)))
    U = u_space(spec)
    assert U.n == 1 + 3 * 2
    assert U.labels[0] == "inf"
    assert U.labels[1] == "T1/P1/pt"


def test_u_space_q_is_zero_padded():
    short = u_space(TailSpec(one_point_parts(3), CubePoint((0.4,))))
    full = u_space(TailSpec(one_point_parts(3), CubePoint((0.4, 0.0, 0.0))))
    assert short.same_matrix(full)


@pytest.mark.parametrize("J", [1, 3, 5])
def test_u_space_distances_from_infinity(J):
    U = u_space(TailSpec(one_point_parts(J), CubePoint((0.3,) * J)))
    values, counts = np.unique(U.dist[0, 1:], return_counts=True)
    np.testing.assert_allclose(values, sorted(2.0 ** -i for i in range(1, J + 1)))
    assert counts.tolist() == [3] * J


@pytest.mark.parametrize("q, r", [
    ((0.2, 0.8), (0.3, 0.8)),
    ((0.2, 0.8), (0.2, 0.1)),
    ((0.0, 0.0), (1.0, 1.0)),
])
def test_u_space_distance_multisets_separate_points(q, r):
    parts = one_point_parts(2)
    Uq = u_space(TailSpec(parts, CubePoint(q)))
    Ur = u_space(TailSpec(parts, CubePoint(r)))
    fq = np.sort(Uq.dist[np.triu_indices(Uq.n, 1)])
    fr = np.sort(Ur.dist[np.triu_indices(Ur.n, 1)])
    assert not np.allclose(fq, fr, rtol=0.0, atol=1e-12)


def test_u_space_modulus_bounds_diagonal_distortion():
    parts = one_point_parts(3)
    q, r = CubePoint((0.1, 0.5, 0.9)), CubePoint((0.3, 0.5, 0.2))
    Uq = u_space(TailSpec(parts, q))
    Ur = u_space(TailSpec(parts, r))
    diagonal_distortion = float(np.abs(Uq.dist - Ur.dist).max())
    assert diagonal_distortion == pytest.approx(u_space_modulus(q, r, 3))


def test_u_space_modulus_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        u_space_modulus(CubePoint((0.1,)), CubePoint((0.1, 0.2)), 2)


def test_cantor_parts_fit_bounds():
    spec = TailSpec(cantor_parts(2, 2), CubePoint((0.5, 0.5)))
    assert u_space(spec).n == 1 + 3 * (4 + 4)


def test_part_too_wide():
    parts = [list(row) for row in one_point_parts(1)]
    parts[1][0] = equilateral_space(2, side=0.2)
    with pytest.raises(PartDiameterTooLarge) as info:
        TailSpec(parts, CubePoint((0.0,)))
    assert (info.value.i, info.value.j) == (2, 1)


def test_load_tail_spec_generator(tmp_path):
    spec = tmp_path / "u.json"
    spec.write_text(json.dumps({"q": [0.5], "parts": {"kind": "point", "J": 2}}))
    tail = load_tail_spec(spec)
    assert tail.J == 2
    assert tail.q.coords == (0.5, 0.0)


# =============================================================================
# INFLADO
# =============================================================================

def test_net_inflation_stays_close():
    rng = np.random.default_rng(11)
    pts = rng.uniform(size=(12, 2))
    X = validate(np.linalg.norm(pts[:, None] - pts[None, :], axis=-1))
    eps = 0.3
    result = net_inflation(X, eps, cantor_beta(0.5, 2))
    assert result.space.n == 4 * len(result.net)
    assert result.eta <= eps
    assert distortion(result.correspondence, X, result.space) < 2 * eps
