"""
Test runner para validación de matrices, distancia GH y construcciones.

Ejecuta los casos de test definidos en test_cases.json y reporta resultados.
"""

import json
import os
import sys

# Añadir el directorio padre al path para importar los módulos del proyecto
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from constructors import TelescopeSpec, cantor_beta, isosceles_triple, telescope
from errors import GhLabError
from gh_solver import gh_exact
from metric_core import one_point_space, validate

CASES_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "test_cases.json")

_INDEX_ATTRS = ("i", "j", "k")


def _error_indices(error):
    return [getattr(error, name) for name in _INDEX_ATTRS if hasattr(error, name)]


def run_validation_cases(cases):
    passed = 0
    for test in cases:
        expected = test["expected"]
        try:
            validate(test["matrix"])
            outcome, indices = "OK", None
        except GhLabError as e:
            outcome, indices = type(e).__name__, _error_indices(e)

        ok = outcome == expected and ("indices" not in test or indices == test["indices"])
        status = "✅ PASS" if ok else "❌ FAIL"
        print(f"{status} [{test['id']}] {test['name']}")
        if not ok:
            print(f"         Esperado: {expected} {test.get('indices', '')}, Obtenido: {outcome} {indices or ''}")
        passed += ok
    return passed


def run_gh_cases(cases):
    passed = 0
    for test in cases:
        result = gh_exact(validate(test["X"]), validate(test["Y"]))
        ok = result.exact and abs(result.upper - test["expected"]) <= 1e-12
        status = "✅ PASS" if ok else "❌ FAIL"
        print(f"{status} [{test['id']}] {test['name']}")
        if not ok:
            print(f"         Esperado: {test['expected']}, Obtenido: [{result.lower}, {result.upper}]")
        passed += ok
    return passed


def _build(kind, params):
    if kind == "telescope":
        return telescope(TelescopeSpec(tuple(one_point_space() for _ in range(params["stages"]))))
    if kind == "triple":
        return isosceles_triple(params["j"], params["q"])
    return cantor_beta(params["c"], params["depth"])


def run_construction_cases(cases):
    passed = 0
    for test in cases:
        X = _build(test["kind"], test["params"])
        ok = np.allclose(X.dist, test["expected"], rtol=0.0, atol=1e-12)
        status = "✅ PASS" if ok else "❌ FAIL"
        print(f"{status} [{test['id']}] {test['name']}")
        if not ok:
            print(f"         Esperado: {test['expected']}, Obtenido: {X.dist.tolist()}")
        passed += ok
    return passed


def run_tests():
    """Ejecuta todos los test cases y reporta resultados"""

    with open(CASES_FILE, "r") as f:
        test_data = json.load(f)

    print("=" * 80)
    print("GH-LAB TEST SUITE - Validación, distancia GH y construcciones")
    print("=" * 80)
    print()

    total_tests = sum(len(test_data[key]) for key in ("test_validation", "test_gh_distance", "test_constructions"))
    passed_tests = run_validation_cases(test_data["test_validation"])
    print()
    passed_tests += run_gh_cases(test_data["test_gh_distance"])
    print()
    passed_tests += run_construction_cases(test_data["test_constructions"])
    failed_tests = total_tests - passed_tests

    print()
    print("=" * 80)
    print(f"RESULTADOS: {passed_tests}/{total_tests} tests pasados")
    print("=" * 80)
    print()

    if failed_tests > 0:
        print(f"❌ {failed_tests} tests fallaron")
        return 1
    print("✅ Todos los tests pasaron correctamente")
    return 0


if __name__ == "__main__":
    exit_code = run_tests()
    sys.exit(exit_code)
