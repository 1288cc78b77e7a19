"""
================================================================================
ACCEPTANCE - Batería de criterios reproducibles
================================================================================

Cada criterio es un objeto con nombre, descripción y una evaluación
determinista (semillas fijas). El motor registra los diez criterios por
defecto, permite activarlos/desactivarlos y corromper uno a propósito
(--inject-fault) para comprobar que la batería detecta el fallo.

Componentes:
    - Criterion: clase base (evaluate() + _evaluate())
    - CriterionResult: resultado serializable
    - AcceptanceSuite: registro y ejecución
    - reproduce_all(): ejecuta la batería y escribe summary.json

Uso:
    suite = AcceptanceSuite()
    summary = suite.run(only=["gh_oracle"], inject_fault=None)

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from config import SCHEMA_VERSION
from constructors import CubePoint, TailSpec, cantor_beta, one_point_parts, u_space, u_space_modulus
from errors import GeodesicViolation, GhLabError, InvalidParameter
from geodesics import (
    BunchSlice,
    StraightGeodesic,
    Verdict,
    build_branch_spec,
    bunch_distinctness,
    verify_geodesic,
)
from geometry_analysis import assouad_estimate, ud_constant, up_constant
from gh_solver import (
    distortion,
    gh_enumerate,
    gh_exact,
    gh_lower,
    gh_upper_local,
    isometry_oracle,
    trivial_correspondence,
)
from metric_core import (
    FiniteMetricSpace,
    LipschitzZeroSet,
    amalgam,
    diameter,
    linf_product,
    max_lemma_check,
    restrict,
    scale,
    separation,
    validate,
)

logger = logging.getLogger(__name__)

GRID = np.linspace(0.0, 1.0, 11)


def random_space(rng: np.random.Generator, n: int, dim: int = 2) -> FiniteMetricSpace:
    """n puntos uniformes en [0,1]^dim con la distancia euclídea"""
    points = rng.uniform(0.0, 1.0, size=(n, dim))
    diff = points[:, None, :] - points[None, :, :]
    return validate(np.sqrt((diff ** 2).sum(axis=-1)))


# =============================================================================
# BASE
# =============================================================================

@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: Dict = field(default_factory=dict)
    fault_injected: bool = False

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "fault_injected": self.fault_injected,
            "detail": self.detail,
        }


class Criterion:
    """
    Clase base de los criterios.

    Cada subclase implementa _evaluate(fault) y devuelve (passed, detail).
    Con fault=True debe corromper su propio cálculo de forma que el criterio
    falle.
    """

    name = "criterion"
    description = ""

    def __init__(self):
        self.enabled = True

    def evaluate(self, fault: bool = False) -> CriterionResult:
        start = time.perf_counter()
        try:
            passed, detail = self._evaluate(fault)
        except GhLabError as e:
            logger.error(f"Criterio '{self.name}': {e}")
            passed, detail = False, {"error": f"{type(e).__name__}: {e}"}
        elapsed = time.perf_counter() - start
        status = "PASS" if passed else "FAIL"
        logger.info(f"[{status}] {self.name} ({elapsed:.2f} s)")
        return CriterionResult(self.name, bool(passed), detail, fault)

    def _evaluate(self, fault: bool):
        raise NotImplementedError


# =============================================================================
# CRITERIOS
# =============================================================================

class GhOracleCriterion(Criterion):
    name = "gh_oracle"
    description = "gh_exact coincide bit a bit con la enumeración y respeta la horquilla"

    def _evaluate(self, fault):
        rng = np.random.default_rng(1)
        mismatches, bracket = 0, 0
        for _ in range(200):
            X = random_space(rng, int(rng.integers(1, 5)))
            Y = random_space(rng, int(rng.integers(1, 5)))
            exact = gh_exact(X, Y).upper
            oracle = gh_enumerate(X, Y).upper
            if fault:
                oracle += 1e-9
            if exact != oracle:
                mismatches += 1
            if not gh_lower(X, Y) <= exact <= gh_upper_local(X, Y, restarts=4).upper:
                bracket += 1
        return mismatches == 0 and bracket == 0, {"mismatches": mismatches, "bracket_violations": bracket}


class GeodesicEqualityCriterion(Criterion):
    name = "geodesic_equality"
    description = "Geodésica recta: upper ≤ |s−t|L y sandwich ≥ |s−t|L − 1e-8"

    def _evaluate(self, fault):
        rng = np.random.default_rng(2)
        checked, failures = 0, 0
        while checked < 20:
            X = random_space(rng, int(rng.integers(1, 5)))
            Y = random_space(rng, int(rng.integers(2, 5)))
            family = StraightGeodesic.from_endpoints(X, Y)
            checked += 1
            L = family.L * (0.9 if fault else 1.0)
            try:
                report = verify_geodesic(family, GRID, L=L)
            except GeodesicViolation:
                failures += 1
                continue
            if any(row["lower"] < row["bound"] - 1e-8 for row in report.rows):
                failures += 1
        return failures == 0, {"pairs": checked, "failures": failures}


class BunchConditionsCriterion(Criterion):
    name = "bunch_conditions"
    description = "Haz ramificado con A = {0, 1/2, 1}, partes puntuales, J = 2"

    def _evaluate(self, fault):
        X = validate([[0, 1], [1, 0]])
        Y = validate([[0, 2], [2, 0]])
        spec = build_branch_spec(X, Y, A=(0.0, 0.5, 1.0), J=2)
        rng = np.random.default_rng(3)
        qs = [CubePoint(tuple(rng.uniform(0, 1, size=2))) for _ in range(8)]

        endpoints = all(
            BunchSlice(spec, q).point(0.0).same_matrix(X) and BunchSlice(spec, q).point(1.0).same_matrix(Y)
            for q in qs
        )
        branch_s = 0.4 if fault else 0.5
        reference = BunchSlice(spec, qs[0]).point(branch_s)
        branch = all(BunchSlice(spec, q).point(branch_s).same_matrix(reference) for q in qs)

        geodesic = True
        for q in qs:
            try:
                verify_geodesic(BunchSlice(spec, q), GRID)
            except GeodesicViolation:
                geodesic = False

        off_grid = [s for s in GRID if s not in spec.A]
        samples = []
        while len(samples) < 8:
            s = float(off_grid[int(rng.integers(len(off_grid)))])
            t = float(off_grid[int(rng.integers(len(off_grid)))])
            q = qs[int(rng.integers(len(qs)))]
            r = qs[int(rng.integers(len(qs)))]
            if (s, q) != (t, r):
                samples.append(((s, q), (t, r)))
        verdicts = [bunch_distinctness(spec, [a, b])[0]["verdict"] for a, b in samples]
        distinct = all(v == Verdict.NON_ISOMETRIC.value for v in verdicts)

        detail = {
            "endpoints": endpoints,
            "branch_agreement": branch,
            "geodesic": geodesic,
            "distinct": distinct,
            "inconclusive": verdicts.count(Verdict.INCONCLUSIVE.value),
        }
        return endpoints and branch and geodesic and distinct, detail


class IdentifierContinuityCriterion(Criterion):
    name = "identifier_continuity"
    description = "dis(Δ) entre U(q) y U(r) coincide con el módulo (J = 4)"

    def _evaluate(self, fault):
        rng = np.random.default_rng(4)
        parts = one_point_parts(4)
        worst = 0.0
        for _ in range(50):
            q = CubePoint(tuple(rng.uniform(0, 1, size=4)))
            r = CubePoint(tuple(rng.uniform(0, 1, size=4)))
            Uq, Ur = u_space(TailSpec(parts, q)), u_space(TailSpec(parts, r))
            direct = distortion(trivial_correspondence(Uq.n), Uq, Ur)
            modulus = u_space_modulus(q, r, 4) * (1.01 if fault else 1.0)
            worst = max(worst, abs(direct - modulus))
        return worst <= 1e-12, {"max_gap": worst}


class IdentifierSeparationCriterion(Criterion):
    name = "identifier_separation"
    description = "isometry_oracle encuentra isometría entre U(q) y U(r) sii q = r"

    def _evaluate(self, fault):
        grid = np.linspace(0.0, 1.0, 5)
        parts = one_point_parts(1)
        spaces = [u_space(TailSpec(parts, CubePoint((float(v),)))) for v in grid]
        wrong = 0
        for i, Ui in enumerate(spaces):
            for j, Uj in enumerate(spaces):
                found = isometry_oracle(Ui, Uj) is not None
                expected = (i != j) if fault else (i == j)
                if found != expected:
                    wrong += 1
        return wrong == 0, {"pairs": len(spaces) ** 2, "wrong": wrong}


_SWEEP = [(c, k) for c in (0.3, 0.5, 0.7) for k in range(2, 9)]


class UltrametricDisconnectednessCriterion(Criterion):
    name = "ultrametric_ud"
    description = "ud_constant(cantor_beta(c, k)) = 1 exactamente"

    def _evaluate(self, fault):
        failures = []
        for c, k in _SWEEP:
            X = cantor_beta(c, k)
            if fault:
                # camino equiespaciado: no es ultramétrico
                X = validate(np.abs(np.subtract.outer(np.arange(X.n), np.arange(X.n))).astype(float))
            if ud_constant(X) != 1.0:
                failures.append([c, k])
        return not failures, {"failures": failures}


class UniformPerfectnessCriterion(Criterion):
    name = "cantor_up"
    description = "up_constant(cantor_beta(c, k), t = c^(k-1)) ≥ c"

    def _evaluate(self, fault):
        failures = []
        for c, k in _SWEEP:
            X = cantor_beta(c, k)
            # con fallo: resolución por debajo de la separación
            t = separation(X) / 2 if fault else c ** (k - 1)
            if up_constant(X, t) < c * (1.0 - 1e-12):
                failures.append([c, k])
        return not failures, {"failures": failures}


class AssouadExponentCriterion(Criterion):
    name = "assouad_exponent"
    description = "Pendiente ajustada ≈ log 2 / log(1/c) para c = 1/2 y 1/4"

    def _evaluate(self, fault):
        half = assouad_estimate(cantor_beta(1.0 / 3.0 if fault else 0.5, 10))
        quarter = assouad_estimate(cantor_beta(0.25, 10))
        passed = 0.85 <= half <= 1.15 and 0.38 <= quarter <= 0.62
        return passed, {"c=1/2": half, "c=1/4": quarter}


class MetricAxiomsCriterion(Criterion):
    name = "metric_axioms"
    description = "Lema del máximo, amalgamas, diámetro del producto y ζ (10^4 casos)"

    def _evaluate(self, fault):
        rng = np.random.default_rng(9)
        cases = 10_000
        failures = {"max_lemma": 0, "amalgam": 0, "product_diameter": 0, "zeta": 0}

        for x, y, u, v in rng.uniform(0, 10, size=(cases, 4)):
            if fault:
                ok = abs(max(x, y) - max(u, v)) <= min(abs(x - u), abs(y - v))
            else:
                ok = max_lemma_check(x, y, u, v)
            failures["max_lemma"] += not ok

        for _ in range(cases):
            index = random_space(rng, int(rng.integers(2, 4)))
            alpha = separation(index)
            parts = []
            for _ in range(index.n):
                part = random_space(rng, int(rng.integers(1, 3)))
                if part.n > 1:
                    part = scale(part, alpha * rng.uniform(0.1, 1.0) / diameter(part))
                parts.append(part)
            try:
                amalgam(parts, index)
            except GhLabError:
                failures["amalgam"] += 1

        for _ in range(cases):
            X = random_space(rng, int(rng.integers(1, 4)))
            Y = random_space(rng, int(rng.integers(1, 4)))
            if diameter(linf_product(X, Y)) != max(diameter(X), diameter(Y)):
                failures["product_diameter"] += 1

        for _ in range(cases):
            anchors = (0.0, 1.0) + tuple(rng.uniform(0, 1, size=int(rng.integers(0, 3))))
            zeta = LipschitzZeroSet(anchors, float(rng.uniform(0.1, 5.0)))
            a, b = rng.uniform(0, 1, size=2)
            lipschitz = abs(zeta(a) - zeta(b)) <= zeta.L * abs(a - b) + 1e-12
            zeros = all(zeta(p) == 0.0 for p in zeta.A)
            failures["zeta"] += not (lipschitz and zeros)

        return not any(failures.values()), {"cases": cases, "failures": failures}


class MonotonicityCriterion(Criterion):
    name = "monotonicity"
    description = "ud_constant: monotonía en subespacios y cota del producto (500 casos)"

    def _evaluate(self, fault):
        rng = np.random.default_rng(10)
        violations = 0
        for _ in range(500):
            X = random_space(rng, int(rng.integers(3, 8)))
            size = int(rng.integers(2, X.n + 1))
            A = restrict(X, sorted(rng.choice(X.n, size=size, replace=False)))
            ud_x, ud_a = ud_constant(X), ud_constant(A)
            if fault:
                violations += ud_a > ud_x + 1e-12
            else:
                violations += ud_a < ud_x - 1e-12

            Y = random_space(rng, int(rng.integers(2, 4)))
            product = ud_constant(linf_product(X, Y))
            violations += product > min(ud_x, ud_constant(Y)) + 1e-12
        return violations == 0, {"instances": 500, "violations": int(violations)}


# =============================================================================
# MOTOR
# =============================================================================

class AcceptanceSuite:
    """
    Registro de criterios.

    Uso:
        suite = AcceptanceSuite()
        suite.disable_criterion("assouad_exponent")
        summary = suite.run()
    """

    def __init__(self):
        self.criteria: List[Criterion] = []
        self._register_default_criteria()
        logger.info(f"AcceptanceSuite con {len(self.criteria)} criterios")

    def _register_default_criteria(self):
        self.register_criterion(GhOracleCriterion())
        self.register_criterion(GeodesicEqualityCriterion())
        self.register_criterion(BunchConditionsCriterion())
        self.register_criterion(IdentifierContinuityCriterion())
        self.register_criterion(IdentifierSeparationCriterion())
        self.register_criterion(UltrametricDisconnectednessCriterion())
        self.register_criterion(UniformPerfectnessCriterion())
        self.register_criterion(AssouadExponentCriterion())
        self.register_criterion(MetricAxiomsCriterion())
        self.register_criterion(MonotonicityCriterion())

    def register_criterion(self, criterion: Criterion):
        self.criteria.append(criterion)
        logger.debug(f"Criterio '{criterion.name}' registrado")

    def _find(self, name: str) -> Criterion:
        for criterion in self.criteria:
            if criterion.name == name:
                return criterion
        known = ", ".join(c.name for c in self.criteria)
        raise InvalidParameter("criterion", name, f"criterios conocidos: {known}")

    def enable_criterion(self, name: str):
        self._find(name).enabled = True

    def disable_criterion(self, name: str):
        self._find(name).enabled = False

    def get_active_criteria(self) -> List[Criterion]:
        return [c for c in self.criteria if c.enabled]

    def run(self, only: Optional[Sequence[str]] = None, inject_fault: Optional[str] = None) -> Dict:
        if inject_fault is not None:
            self._find(inject_fault)
        if only:
            for name in only:
                self._find(name)
        selected = [c for c in self.get_active_criteria() if not only or c.name in only]

        results = [c.evaluate(fault=(c.name == inject_fault)) for c in selected]
        return {
            "schema": SCHEMA_VERSION,
            "passed": all(r.passed for r in results),
            "criteria": [r.to_dict() for r in results],
        }


def reproduce_all(
    out_dir: Path,
    only: Optional[Sequence[str]] = None,
    inject_fault: Optional[str] = None,
) -> Dict:
    """Ejecuta la batería y escribe out_dir/summary.json (claves ordenadas)"""
    summary = AcceptanceSuite().run(only=only, inject_fault=inject_fault)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / "summary.json"
    target.write_text(json.dumps(summary, sort_keys=True, indent=2, default=float) + "\n")
    failed = [c["name"] for c in summary["criteria"] if not c["passed"]]
    if failed:
        logger.warning(f"Criterios fallidos: {', '.join(failed)}")
    logger.info(f"Resumen escrito en {target}")
    return summary
