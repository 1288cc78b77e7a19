"""
================================================================================
TESTS - GH Solver
================================================================================

Correspondencias, distorsión, cotas, branch-and-bound contra enumeración,
ε-aproximaciones y oráculo de isometría.

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np
import pytest

from errors import (
    ApproximationError,
    BudgetExhausted,
    InvalidCorrespondence,
    ProductTooLarge,
    SizeMismatch,
)
from gh_solver import (
    Correspondence,
    EpsApproximation,
    approximation_from_correspondence,
    approximation_from_net,
    check_eps_approx,
    correspondence_from_approximation,
    discrepancy_matrix,
    distortion,
    full_correspondence,
    gh_enumerate,
    gh_exact,
    gh_lower,
    gh_upper_local,
    isometry_oracle,
    trivial_correspondence,
)
from metric_core import equilateral_space, one_point_space, restrict, validate


def euclidean(rng, n, dim=2):
    pts = rng.uniform(size=(n, dim))
    return validate(np.linalg.norm(pts[:, None] - pts[None, :], axis=-1))


TWO = validate([[0, 1], [1, 0]])
TWO_WIDE = validate([[0, 2], [2, 0]])


# =============================================================================
# CORRESPONDENCIAS
# =============================================================================

def test_correspondence_must_be_onto():
    with pytest.raises(InvalidCorrespondence):
        Correspondence(frozenset({(0, 0)}), 2, 1)
    with pytest.raises(InvalidCorrespondence):
        Correspondence(frozenset({(0, 0), (1, 0)}), 2, 2)
    with pytest.raises(InvalidCorrespondence):
        Correspondence(frozenset({(0, 3)}), 1, 1)


def test_trivial_correspondence_has_zero_distortion():
    X = equilateral_space(4)
    assert distortion(trivial_correspondence(4), X, X) == 0.0


def test_full_correspondence_distortion_is_max_diameter():
    assert distortion(full_correspondence(2, 2), TWO, TWO_WIDE) == 2.0


def test_transpose_keeps_distortion():
    rng = np.random.default_rng(0)
    X, Y = euclidean(rng, 3), euclidean(rng, 4)
    R = gh_upper_local(X, Y, restarts=4).witness
    assert distortion(R.transpose(), Y, X) == distortion(R, X, Y)


def test_discrepancy_matrix_layout():
    disc = discrepancy_matrix(TWO, TWO_WIDE)
    # (x=0, y=0) frente a (u=1, v=1): |1 - 2|
    assert disc[0, 3] == 1.0
    # (0, 0) frente a (0, 1): |0 - 2|
    assert disc[0, 1] == 2.0


def test_discrepancy_matrix_cap():
    X = equilateral_space(60)
    with pytest.raises(ProductTooLarge):
        discrepancy_matrix(X, X)


# =============================================================================
# DISTANCIA GH
# =============================================================================

def test_two_point_spaces():
    result = gh_exact(TWO, TWO_WIDE)
    assert result.exact
    assert result.lower == result.upper == 0.5
    assert result.witness.sorted_pairs() == [(0, 0), (1, 1)]


def test_point_to_space_is_half_diameter():
    X = validate([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert gh_exact(one_point_space(), X).upper == 1.0


def test_point_to_large_space_keeps_full_witness():
    # el único testigo es X × Y completo: 1000 pares
    pts = np.random.default_rng(21).uniform(size=(1000, 2))
    Y = validate(np.linalg.norm(pts[:, None] - pts[None, :], axis=-1), check_triangle=False)
    result = gh_exact(one_point_space(), Y)
    assert result.exact
    assert result.upper == pytest.approx(Y.dist.max() / 2.0)
    assert result.witness.sorted_pairs() == [(0, j) for j in range(1000)]


def test_isometric_copies_are_at_zero():
    rng = np.random.default_rng(3)
    X = euclidean(rng, 5)
    Y = restrict(X, [3, 1, 4, 0, 2])
    result = gh_exact(X, Y)
    assert result.upper == 0.0
    assert result.exact


@pytest.mark.parametrize("seed", range(6))
def test_exact_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    X = euclidean(rng, int(rng.integers(1, 4)))
    Y = euclidean(rng, int(rng.integers(1, 5)))
    exact = gh_exact(X, Y)
    oracle = gh_enumerate(X, Y)
    assert exact.upper == pytest.approx(oracle.upper, abs=1e-12)
    assert exact.witness.sorted_pairs() == oracle.witness.sorted_pairs()


@pytest.mark.parametrize("seed", range(5))
def test_bounds_sandwich(seed):
    rng = np.random.default_rng(100 + seed)
    X, Y = euclidean(rng, 5), euclidean(rng, 6)
    exact = gh_exact(X, Y)
    local = gh_upper_local(X, Y, seed=seed)
    assert gh_lower(X, Y) <= exact.upper + 1e-12
    assert exact.upper <= local.upper + 1e-12
    assert distortion(exact.witness, X, Y) / 2.0 == pytest.approx(exact.upper)


def test_local_search_is_deterministic():
    rng = np.random.default_rng(7)
    X, Y = euclidean(rng, 6), euclidean(rng, 5)
    a = gh_upper_local(X, Y, seed=4)
    b = gh_upper_local(X, Y, seed=4)
    assert a.upper == b.upper
    assert a.witness == b.witness
    assert not a.exact


def test_budget_exhaustion_keeps_honest_interval():
    rng = np.random.default_rng(21)
    X, Y = euclidean(rng, 7), euclidean(rng, 7)
    result = gh_exact(X, Y, budget=1)
    assert result.lower <= result.upper
    assert result.nodes <= 1
    if not result.exact:
        with pytest.raises(BudgetExhausted) as info:
            gh_exact(X, Y, budget=1, strict=True)
        assert info.value.result.upper == result.upper
        assert info.value.exit_code == 1


def test_enumeration_cap():
    with pytest.raises(ProductTooLarge):
        gh_enumerate(equilateral_space(5), equilateral_space(5))


def test_result_to_dict():
    data = gh_exact(TWO, TWO_WIDE).to_dict()
    assert data["witness_pairs"] == [[0, 0], [1, 1]]
    assert data["exact"] is True


# =============================================================================
# ε-APROXIMACIONES
# =============================================================================

def test_approximation_from_correspondence_round_trip():
    rng = np.random.default_rng(12)
    X, Y = euclidean(rng, 4), euclidean(rng, 3)
    R = gh_exact(X, Y).witness
    a = approximation_from_correspondence(R, X, Y)
    assert a.eps > distortion(R, X, Y)
    assert check_eps_approx(a, X, Y)
    back = correspondence_from_approximation(a)
    assert back.pairs <= R.pairs


def test_check_eps_approx_is_strict():
    a = EpsApproximation((0, 1), (0, 1), 1.0)
    assert not check_eps_approx(a, TWO, TWO_WIDE)
    assert check_eps_approx(EpsApproximation((0, 1), (0, 1), 1.0 + 1e-12), TWO, TWO_WIDE)


def test_approximation_from_net():
    X = validate([[0, 1, 1.05], [1, 0, 0.1], [1.05, 0.1, 0]])
    Y = validate([[0, 1], [1, 0]])
    a = approximation_from_net([0, 1, 1], X, Y, 0.2)
    assert a.eps == pytest.approx(0.6)
    assert a.g == (0, 1)
    assert check_eps_approx(a, X, Y)


def test_approximation_from_net_not_dense():
    X = one_point_space()
    with pytest.raises(ApproximationError):
        approximation_from_net([0], X, TWO_WIDE, 0.5)


# =============================================================================
# ORÁCULO DE ISOMETRÍA
# =============================================================================

def test_isometry_oracle_finds_permutation():
    rng = np.random.default_rng(8)
    X = euclidean(rng, 6)
    perm = [5, 2, 0, 1, 4, 3]
    Y = restrict(X, perm)
    phi = isometry_oracle(X, Y)
    assert phi is not None
    np.testing.assert_allclose(Y.dist[np.ix_(phi, phi)], X.dist)


def test_isometry_oracle_rejects():
    X = validate([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    Y = validate([[0, 1, 1.5], [1, 0, 1], [1.5, 1, 0]])
    assert isometry_oracle(X, Y) is None
    with pytest.raises(SizeMismatch):
        isometry_oracle(X, TWO)
