"""
================================================================================
ERRORES - Jerarquía de excepciones de GH-Lab
================================================================================

Dos familias:
    - InputError: la entrada viola un invariante (código de salida 2)
    - VerificationFailure: una comprobación numérica falla (código de salida 1)

Cada excepción nombra la tupla de índices o el parámetro culpable, tanto en
el mensaje como en atributos, para que la CLI y los tests puedan inspeccionarlo.

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

from typing import Optional, Any


class GhLabError(Exception):
    """Base de todos los errores del proyecto"""
    exit_code = 2


class InputError(GhLabError, ValueError):
    """Entrada inválida (matriz, parámetro, fichero)"""
    exit_code = 2


class VerificationFailure(GhLabError):
    """Una verificación numérica no se cumple"""
    exit_code = 1


# =============================================================================
# AXIOMAS MÉTRICOS
# =============================================================================

class MalformedMatrix(InputError):
    pass


class NegativeEntry(InputError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"Entrada negativa en ({i}, {j})")


class NonzeroDiagonal(InputError):
    def __init__(self, i: int):
        self.i = i
        super().__init__(f"Diagonal no nula en ({i}, {i})")


class AsymmetricMatrix(InputError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"Matriz asimétrica: d[{i}][{j}] != d[{j}][{i}]")


class CoincidentPoints(InputError):
    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        super().__init__(f"Puntos distintos a distancia 0: ({i}, {j})")


class TriangleViolation(InputError):
    """d(i, j) > d(i, k) + d(k, j)"""

    def __init__(self, i: int, j: int, k: int, excess: float = 0.0):
        self.i, self.j, self.k = i, j, k
        self.excess = excess
        super().__init__(
            f"Desigualdad triangular violada: d({i},{j}) > d({i},{k}) + d({k},{j}) "
            f"(exceso {excess:.3e})"
        )


class SingletonSpace(InputError):
    def __init__(self, operation: str = "separation"):
        self.operation = operation
        super().__init__(f"'{operation}' requiere al menos 2 puntos")


# =============================================================================
# CONSTRUCCIONES
# =============================================================================

class ProductTooLarge(InputError):
    def __init__(self, size: int, cap: int):
        self.size, self.cap = size, cap
        super().__init__(f"El espacio tendría {size} puntos (límite {cap})")


class DiameterExceedsSeparation(InputError):
    def __init__(self, i: int, diameter: float, separation: float):
        self.i = i
        super().__init__(
            f"Parte {i}: diámetro {diameter:.6g} > separación {separation:.6g} del índice"
        )


class NonpositiveScale(InputError):
    def __init__(self, c: float):
        self.c = c
        super().__init__(f"Factor de escala no positivo: {c}")


class InvalidParameter(InputError):
    def __init__(self, name: str, value: Any, reason: str = ""):
        self.name, self.value = name, value
        detail = f" ({reason})" if reason else ""
        super().__init__(f"Parámetro inválido {name}={value!r}{detail}")


class DimensionMismatch(InputError):
    pass


class StageDiameterTooLarge(InputError):
    def __init__(self, i: int, diameter: float, bound: float):
        self.i = i
        super().__init__(f"Etapa {i}: diámetro {diameter:.6g} > 2^-{i + 1} = {bound:.6g}")


class PartDiameterTooLarge(InputError):
    def __init__(self, i: int, j: int, diameter: float, bound: float):
        self.i, self.j = i, j
        super().__init__(f"Parte P[{i},{j}]: diámetro {diameter:.6g} > {bound:.6g}")


class DepthTooLarge(InputError):
    def __init__(self, depth: int, cap: int):
        self.depth, self.cap = depth, cap
        super().__init__(f"Profundidad {depth} supera el máximo {cap}")


class InvalidZeroSet(InputError):
    pass


# =============================================================================
# GROMOV-HAUSDORFF
# =============================================================================

class InvalidCorrespondence(InputError):
    pass


class SizeMismatch(InputError):
    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        super().__init__(f"Tamaños distintos: {n} vs {m}")


class ApproximationError(InputError):
    pass


class BudgetExhausted(VerificationFailure):
    """Se agotó el presupuesto de nodos; `result` guarda la mejor horquilla"""

    def __init__(self, nodes: int, result: Optional[Any] = None):
        self.nodes = nodes
        self.result = result
        super().__init__(f"Presupuesto agotado tras {nodes} nodos")


# =============================================================================
# ANÁLISIS GEOMÉTRICO
# =============================================================================

class ResolutionOutOfRange(InputError):
    def __init__(self, t: float, diameter: float):
        self.t = t
        super().__init__(f"Resolución t={t} fuera de (0, {diameter}]")


class DegenerateFit(InputError):
    pass


class ExactModeUnavailable(InputError):
    def __init__(self, n: int, limit: int):
        self.n = n
        super().__init__(f"Modo exacto no disponible para {n} puntos (límite {limit})")


# =============================================================================
# GEODÉSICAS
# =============================================================================

class LipschitzBudgetExceeded(InputError):
    def __init__(self, lipschitz: float, diameter: float, budget: float):
        super().__init__(
            f"L·diam = {lipschitz:.6g}·{diameter:.6g} supera 2·GH = {budget:.6g}"
        )


class GeodesicViolation(VerificationFailure):
    def __init__(self, s: float, t: float, excess: float, report: Optional[Any] = None):
        self.s, self.t, self.excess = s, t, excess
        self.report = report
        super().__init__(f"Propiedad geodésica violada en (s={s}, t={t}): exceso {excess:.3e}")
