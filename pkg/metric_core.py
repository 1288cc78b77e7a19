"""
================================================================================
METRIC CORE - Espacios métricos finitos como matrices de distancias validadas
================================================================================

Soporte común para todas las construcciones del proyecto.

Componentes:
    - PseudoMetricSpace: etiquetas + matriz de distancias (se permiten ceros)
    - FiniteMetricSpace: métrica genuina (distancias positivas fuera de la diagonal)
    - LipschitzZeroSet: función ζ(x) = L·dist(x, A) con conjunto de ceros A ⊆ [0,1]
    - validate / validate_pseudo: comprobación de axiomas con error localizado
    - Construcciones elementales: producto ℓ∞, amalgama, escala, restricción, ε-red
    - E/S: formato JSON {"schema", "labels", "dist"} y CSV (matriz cuadrada)

Tolerancia de la desigualdad triangular: relativa 1e-9 escalada por la mayor
entrada de la matriz (las interpolaciones geodésicas introducen ruido de último
bit; los ejemplos enteros pequeños siguen siendo estrictos).

Uso:
    X = validate([[0, 1], [1, 0]])
    Y = linf_product(X, scale(X, 3.0))
    diameter(Y)  # 3.0

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from config import SCHEMA_VERSION, get_settings
from errors import (
    AsymmetricMatrix,
    CoincidentPoints,
    DiameterExceedsSeparation,
    DimensionMismatch,
    InputError,
    InvalidParameter,
    InvalidZeroSet,
    MalformedMatrix,
    NegativeEntry,
    NonpositiveScale,
    NonzeroDiagonal,
    ProductTooLarge,
    SingletonSpace,
    TriangleViolation,
)

logger = logging.getLogger(__name__)

MatrixLike = Union[np.ndarray, Sequence[Sequence[float]]]


# =============================================================================
# TIPOS DE DOMINIO
# =============================================================================

@dataclass(frozen=True, eq=False)
class PseudoMetricSpace:
    """
    Conjunto finito de puntos etiquetados con su matriz de distancias completa.

    Se construye siempre a través de validate_pseudo() / validate(); la matriz
    queda en modo solo lectura, así que las instancias se pueden compartir.

    Atributos:
        labels: identificadores opacos de los puntos (únicos)
        dist: matriz n×n simétrica con diagonal nula
    """
    labels: Tuple[str, ...]
    dist: np.ndarray = field(repr=False)

    def __post_init__(self):
        matrix = np.array(self.dist, dtype=float)
        matrix.setflags(write=False)
        object.__setattr__(self, "dist", matrix)
        object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def same_matrix(self, other: "PseudoMetricSpace") -> bool:
        """Igualdad bit a bit de etiquetas y distancias"""
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, diameter={diameter(self):.6g})"


class FiniteMetricSpace(PseudoMetricSpace):
    """Métrica genuina: dist[i][j] > 0 para i != j"""


@dataclass(frozen=True)
class LipschitzZeroSet:
    """
    ζ(x) = L · min_{a∈A} |x − a| sobre [0, 1].

    A es una lista finita ordenada que contiene 0 y 1. ζ es L-Lipschitz y se
    anula exactamente en A.
    """
    A: Tuple[float, ...]
    L: float

    def __post_init__(self):
        points = tuple(sorted(float(a) for a in self.A))
        if not points or points[0] != 0.0 or points[-1] != 1.0:
            raise InvalidZeroSet(f"A debe contener 0 y 1 y estar en [0, 1]: {points}")
        if not all(0.0 <= a <= 1.0 for a in points):
            raise InvalidZeroSet(f"A fuera de [0, 1]: {points}")
        if not np.isfinite(self.L) or self.L <= 0:
            raise InvalidParameter("L", self.L, "la constante de Lipschitz debe ser positiva")
        object.__setattr__(self, "A", points)
        object.__setattr__(self, "L", float(self.L))

    def __call__(self, x):
        values = np.asarray(x, dtype=float)
        anchors = np.asarray(self.A)
        gaps = np.abs(values[..., None] - anchors).min(axis=-1)
        result = self.L * gaps
        if np.ndim(result) == 0:
            return float(result)
        return result

    def contains(self, s: float) -> bool:
        """Pertenencia exacta a A (la rejilla de s incluye los puntos de A)"""
        return float(s) in self.A


# =============================================================================
# VALIDACIÓN
# =============================================================================

def _as_matrix(m: MatrixLike) -> np.ndarray:
    try:
        matrix = np.array(m, dtype=float)
    except (TypeError, ValueError) as e:
        raise MalformedMatrix(f"Matriz no numérica o irregular: {e}")
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise MalformedMatrix(f"Se esperaba una matriz cuadrada no vacía, forma {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise MalformedMatrix("La matriz contiene entradas no finitas")
    return matrix


def _as_labels(labels: Optional[Sequence[str]], n: int) -> Tuple[str, ...]:
    if labels is None:
        width = max(2, len(str(n - 1)))
        return tuple(f"x{i:0{width}d}" for i in range(n))
    result = tuple(str(label) for label in labels)
    if len(result) != n:
        raise MalformedMatrix(f"{len(result)} etiquetas para {n} puntos")
    if len(set(result)) != n:
        raise MalformedMatrix("Etiquetas repetidas")
    return result


def _first(mask: np.ndarray) -> Optional[Tuple[int, ...]]:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(v) for v in hits[0])


def _check_axioms(matrix: np.ndarray, allow_zero: bool, check_triangle: bool) -> np.ndarray:
    n = matrix.shape[0]
    scale_ref = float(matrix.max()) if matrix.max() > 0 else 1.0
    tol = get_settings().triangle_rtol * scale_ref

    hit = _first(matrix < 0)
    if hit:
        raise NegativeEntry(*hit)

    diagonal = np.nonzero(np.diag(matrix) != 0)[0]
    if len(diagonal):
        raise NonzeroDiagonal(int(diagonal[0]))

    hit = _first(np.triu(np.abs(matrix - matrix.T) > tol, 1))
    if hit:
        raise AsymmetricMatrix(*hit)

    # Simetría exacta: el triángulo inferior se copia del superior
    upper = np.triu(matrix, 1)
    matrix = upper + upper.T

    if not allow_zero:
        hit = _first(np.triu(matrix == 0, 1))
        if hit:
            raise CoincidentPoints(*hit)

    if check_triangle:
        for i in range(n):
            # via[j, k] = d(i, k) + d(k, j)
            via = matrix[i][None, :] + matrix
            excess = matrix[i][:, None] - via
            hit = _first(excess > tol)
            if hit:
                j, k = hit
                raise TriangleViolation(i, j, k, float(excess[j, k]))
    return matrix


def validate(
    m: MatrixLike,
    labels: Optional[Sequence[str]] = None,
    check_triangle: bool = True,
) -> FiniteMetricSpace:
    """
    Valida una matriz como métrica genuina.

    Orden de comprobación: NegativeEntry, NonzeroDiagonal, AsymmetricMatrix,
    CoincidentPoints, TriangleViolation. Cada error nombra la primera tupla
    culpable en orden lexicográfico.

    Args:
        m: matriz cuadrada de reales finitos
        labels: etiquetas opcionales (por defecto x00, x01, ...)
        check_triangle: las construcciones con métrica garantizada por su lema
            pueden omitir el triple bucle en tamaños grandes

    Returns:
        FiniteMetricSpace inmutable
    """
    matrix = _as_matrix(m)
    names = _as_labels(labels, matrix.shape[0])
    matrix = _check_axioms(matrix, allow_zero=False, check_triangle=check_triangle)
    return FiniteMetricSpace(names, matrix)


def validate_pseudo(
    m: MatrixLike,
    labels: Optional[Sequence[str]] = None,
    check_triangle: bool = True,
) -> PseudoMetricSpace:
    """Como validate(), pero admite distancia 0 entre puntos distintos"""
    matrix = _as_matrix(m)
    names = _as_labels(labels, matrix.shape[0])
    matrix = _check_axioms(matrix, allow_zero=True, check_triangle=check_triangle)
    return PseudoMetricSpace(names, matrix)


def _triangle_check_enabled(n: int) -> bool:
    return n <= 1024


# =============================================================================
# INVARIANTES ELEMENTALES
# =============================================================================

def diameter(X: PseudoMetricSpace) -> float:
    """δ(X): máxima distancia (0 para un punto)"""
    return float(X.dist.max())


def separation(X: PseudoMetricSpace) -> float:
    """α(X): mínima distancia entre puntos distintos"""
    if X.n < 2:
        raise SingletonSpace("separation")
    off_diagonal = X.dist[~np.eye(X.n, dtype=bool)]
    return float(off_diagonal.min())


def max_lemma_check(x: float, y: float, u: float, v: float) -> bool:
    """|x∨y − u∨v| ≤ |x−u| ∨ |y−v|; debe ser siempre cierto"""
    return abs(max(x, y) - max(u, v)) <= max(abs(x - u), abs(y - v))


# =============================================================================
# CONSTRUCCIONES ELEMENTALES
# =============================================================================

def one_point_space(label: str = "pt") -> FiniteMetricSpace:
    return FiniteMetricSpace((label,), np.zeros((1, 1)))


def equilateral_space(n: int, side: float = 1.0, prefix: str = "e") -> FiniteMetricSpace:
    if n < 1 or side <= 0:
        raise InvalidParameter("n/side", (n, side))
    matrix = side * (1.0 - np.eye(n))
    return validate(matrix, [f"{prefix}{i}" for i in range(n)])


def linf_product(
    X: PseudoMetricSpace,
    Y: PseudoMetricSpace,
    cap: Optional[int] = None,
) -> PseudoMetricSpace:
    """
    Producto ℓ∞: (d ×∞ e)((x,y),(u,v)) = d(x,u) ∨ e(y,v).

    El punto (x, y) ocupa el índice x·|Y| + y. Si ambos factores son métricas
    genuinas el resultado también lo es.
    """
    cap = cap or get_settings().max_points
    size = X.n * Y.n
    if size > cap:
        raise ProductTooLarge(size, cap)

    matrix = np.maximum(X.dist[:, None, :, None], Y.dist[None, :, None, :]).reshape(size, size)
    labels = [f"({a},{b})" for a in X.labels for b in Y.labels]
    check = _triangle_check_enabled(size)
    if isinstance(X, FiniteMetricSpace) and isinstance(Y, FiniteMetricSpace):
        return validate(matrix, labels, check_triangle=check)
    return validate_pseudo(matrix, labels, check_triangle=check)


def amalgam(
    parts: Sequence[FiniteMetricSpace],
    e: FiniteMetricSpace,
    cap: Optional[int] = None,
) -> FiniteMetricSpace:
    """
    Unión disjunta de las partes sobre el índice (n̂, e).

    Distancia dentro de una parte: la suya. Entre partes i != j: e(i, j).
    Requiere δ(parts[i]) ≤ α(e) para todo i; entonces el resultado es métrica.

    Etiquetas: "P{i}/{etiqueta}" con i empezando en 1.
    """
    if len(parts) != e.n:
        raise DimensionMismatch(f"{len(parts)} partes para un índice de {e.n} puntos")

    if e.n >= 2:
        alpha = separation(e)
        for i, part in enumerate(parts):
            if diameter(part) > alpha:
                raise DiameterExceedsSeparation(i + 1, diameter(part), alpha)

    cap = cap or get_settings().max_points
    sizes = [part.n for part in parts]
    total = sum(sizes)
    if total > cap:
        raise ProductTooLarge(total, cap)

    owner = np.repeat(np.arange(len(parts)), sizes)
    matrix = e.dist[np.ix_(owner, owner)].copy()
    labels: List[str] = []
    offset = 0
    for i, part in enumerate(parts):
        block = slice(offset, offset + part.n)
        matrix[block, block] = part.dist
        labels.extend(f"P{i + 1}/{label}" for label in part.labels)
        offset += part.n

    return validate(matrix, labels, check_triangle=_triangle_check_enabled(total))


def scale(X: PseudoMetricSpace, c: float) -> PseudoMetricSpace:
    """Multiplica todas las distancias por c > 0 (conserva el tipo)"""
    if not np.isfinite(c) or c <= 0:
        raise NonpositiveScale(c)
    return type(X)(X.labels, X.dist * float(c))


def restrict(X: PseudoMetricSpace, indices: Sequence[int]) -> PseudoMetricSpace:
    """Subespacio sobre los índices dados (en ese orden)"""
    idx = [int(i) for i in indices]
    if not idx or len(set(idx)) != len(idx) or min(idx) < 0 or max(idx) >= X.n:
        raise InvalidParameter("indices", list(indices), f"se esperaban índices únicos en [0, {X.n})")
    return type(X)(tuple(X.labels[i] for i in idx), X.dist[np.ix_(idx, idx)])


def epsilon_net(X: PseudoMetricSpace, eps: float) -> List[int]:
    """
    ε-red voraz en orden de índice.

    El subconjunto S devuelto cumple α(S) ≥ ε y ⋃_{x∈S} B(x, ε) = X con bolas
    abiertas; es maximal porque todo punto descartado cae en alguna bola.
    """
    if not eps > 0:
        raise InvalidParameter("eps", eps, "debe ser positivo")
    covered = np.zeros(X.n, dtype=bool)
    net: List[int] = []
    for i in range(X.n):
        if covered[i]:
            continue
        net.append(i)
        covered |= X.dist[i] < eps
    logger.debug(f"ε-red con ε={eps}: {len(net)} de {X.n} puntos")
    return net


# =============================================================================
# ENTRADA / SALIDA
# =============================================================================

def space_to_dict(X: PseudoMetricSpace) -> dict:
    return {"schema": SCHEMA_VERSION, "labels": list(X.labels), "dist": X.dist.tolist()}


def space_from_dict(data: dict) -> FiniteMetricSpace:
    if not isinstance(data, dict) or "dist" not in data:
        raise MalformedMatrix("Se esperaba un objeto JSON con clave 'dist'")
    return validate(data["dist"], data.get("labels"))


def dump_space(X: PseudoMetricSpace, path: Union[str, Path]) -> Path:
    """Escribe el espacio en JSON (o CSV si la extensión es .csv)"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    if target.suffix.lower() == ".csv":
        with target.open("w", newline="") as f:
            writer = csv.writer(f)
            for row in X.dist:
                writer.writerow([repr(float(v)) for v in row])
    else:
        target.write_text(json.dumps(space_to_dict(X), sort_keys=True, indent=2) + "\n")
    logger.debug(f"Espacio de {X.n} puntos escrito en {target}")
    return target


def load_space(path: Union[str, Path]) -> FiniteMetricSpace:
    """Lee JSON o CSV y valida siempre"""
    source = Path(path)
    if not source.is_file():
        raise InputError(f"No existe el fichero {source}")
    if source.suffix.lower() == ".csv":
        with source.open(newline="") as f:
            rows = [row for row in csv.reader(f) if row]
        try:
            matrix = [[float(v) for v in row] for row in rows]
        except ValueError as e:
            raise MalformedMatrix(f"{source}: {e}")
        return validate(matrix)
    try:
        data = json.loads(source.read_text())
    except json.JSONDecodeError as e:
        raise MalformedMatrix(f"{source}: JSON inválido ({e})")
    return space_from_dict(data)
