"""
================================================================================
CONSTRUCTORS - Truncaciones finitas de las familias de espacios del proyecto
================================================================================

Componentes:
    - CubePoint: parámetro q del cubo de Hilbert truncado a m coordenadas
    - TelescopeSpec / telescope(): {∞} ⊔ X_1 ⊔ ... ⊔ X_J con la métrica de tres casos
    - cantor_beta(): 2^k cadenas binarias con β_c(x, y) = c^v(x, y)
    - isosceles_triple(): triángulo isósceles de ángulo en el vértice θ(q_j)
    - TailSpec / u_space(): espacio identificador U(𝒫_q)
    - u_space_modulus(): módulo de continuidad q ↦ U(𝒫_q)
    - one_point_parts / cantor_parts: las dos familias de piezas 𝒫 (w = 0 y w = 1)
    - net_inflation(): sustituye cada punto de una ε-red por una copia de un factor
    - load_telescope_spec / load_tail_spec: especificaciones declarativas en JSON

La etapa i (empezando en 1) tiene diámetro ≤ 2^-(i+1) y está a distancia 2^-i
de ∞; descartar las etapas > J es una 2^-J aproximación del espacio ideal.

Uso:
    spec = TailSpec(one_point_parts(2), CubePoint((0.0, 0.0)))
    U = u_space(spec)          # 7 puntos

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from config import get_settings
from errors import (
    DepthTooLarge,
    DimensionMismatch,
    InputError,
    InvalidParameter,
    MalformedMatrix,
    PartDiameterTooLarge,
    ProductTooLarge,
    StageDiameterTooLarge,
)
from gh_solver import Correspondence
from metric_core import (
    FiniteMetricSpace,
    amalgam,
    diameter,
    epsilon_net,
    load_space,
    one_point_space,
    restrict,
    scale,
    separation,
    space_from_dict,
    validate,
)

logger = logging.getLogger(__name__)

# Holgura relativa para las cotas 2^-(i+1): las piezas se escalan en coma flotante
_BOUND_RTOL = 1e-12


# =============================================================================
# FUNCIONES AUXILIARES DEL TRIÁNGULO
# =============================================================================

def chord_length(x: float) -> float:
    """l(x) = √(2 − 2cos x): cuerda del arco x en la circunferencia unidad"""
    return math.sqrt(max(0.0, 2.0 - 2.0 * math.cos(x)))


def apex_angle(t: float) -> float:
    """θ(t) = (π/6)(t + 1), recorre [π/6, π/3] para t ∈ [0, 1]"""
    return (math.pi / 6.0) * (t + 1.0)


MIN_CHORD = chord_length(math.pi / 6.0)


# =============================================================================
# TIPOS DE DOMINIO
# =============================================================================

@dataclass(frozen=True)
class CubePoint:
    """Punto del cubo de Hilbert con m coordenadas explícitas (el resto son 0)"""
    coords: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.coords)
        if not values:
            raise InvalidParameter("coords", self.coords, "se necesita al menos una coordenada")
        for position, value in enumerate(values, start=1):
            if not 0.0 <= value <= 1.0:
                raise InvalidParameter(f"q_{position}", value, "debe estar en [0, 1]")
        object.__setattr__(self, "coords", values)

    @property
    def m(self) -> int:
        return len(self.coords)

    def coord(self, j: int) -> float:
        """q_j con j empezando en 1"""
        return self.coords[j - 1] if j <= self.m else 0.0

    def padded(self, J: int) -> "CubePoint":
        if J <= self.m:
            return self
        return CubePoint(self.coords + (0.0,) * (J - self.m))


def _stage_bound(i: int) -> float:
    return 2.0 ** (-i - 1)


@dataclass(frozen=True)
class TelescopeSpec:
    """Etapas X_1..X_J; la etapa i debe tener diámetro ≤ 2^-(i+1)"""
    stages: Tuple[FiniteMetricSpace, ...]

    def __post_init__(self):
        stages = tuple(self.stages)
        if not stages:
            raise InvalidParameter("stages", stages, "se necesita al menos una etapa")
        for i, stage in enumerate(stages, start=1):
            bound = _stage_bound(i)
            if diameter(stage) > bound * (1.0 + _BOUND_RTOL):
                raise StageDiameterTooLarge(i, diameter(stage), bound)
        object.__setattr__(self, "stages", stages)

    @property
    def J(self) -> int:
        return len(self.stages)


@dataclass(frozen=True)
class TailSpec:
    """
    Familia 𝒫 de 3×J piezas y parámetro q.

    parts[i][j] es P_{i+1, j+1}. Si q tiene menos de J coordenadas se
    completa con ceros, igual que CubePoint.coord().
    """
    parts: Tuple[Tuple[FiniteMetricSpace, ...], ...]
    q: CubePoint

    def __post_init__(self):
        parts = tuple(tuple(row) for row in self.parts)
        if len(parts) != 3 or len({len(row) for row in parts}) != 1 or not parts[0]:
            raise DimensionMismatch("𝒫 debe ser una matriz 3×J de espacios")
        J = len(parts[0])
        for i, row in enumerate(parts, start=1):
            for j, part in enumerate(row, start=1):
                bound = _stage_bound(j) * MIN_CHORD
                if diameter(part) > bound * (1.0 + _BOUND_RTOL):
                    raise PartDiameterTooLarge(i, j, diameter(part), bound)
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "q", self.q.padded(J))

    @property
    def J(self) -> int:
        return len(self.parts[0])

    def with_q(self, q: CubePoint) -> "TailSpec":
        return TailSpec(self.parts, q)


# =============================================================================
# CONSTRUCCIONES
# =============================================================================

def telescope(spec: TelescopeSpec) -> FiniteMetricSpace:
    """
    Espacio telescópico T(𝒳) truncado a J etapas.

    d(x, y) = d_i(x, y) dentro de la etapa i, |2^-i − 2^-j| entre etapas
    i != j, y 2^-i entre ∞ y la etapa i. ∞ es el punto 0 (etiqueta "inf").
    """
    sizes = [stage.n for stage in spec.stages]
    total = 1 + sum(sizes)
    cap = get_settings().max_points
    if total > cap:
        raise ProductTooLarge(total, cap)

    # nivel 2^-i por punto; ∞ tiene nivel 0 y así |nivel| da también d(∞, ·)
    level = np.concatenate([[0.0]] + [np.full(n, 2.0 ** -i) for i, n in enumerate(sizes, start=1)])
    matrix = np.abs(level[:, None] - level[None, :])

    labels = ["inf"]
    offset = 1
    for i, stage in enumerate(spec.stages, start=1):
        block = slice(offset, offset + stage.n)
        matrix[block, block] = stage.dist
        labels.extend(f"T{i}/{label}" for label in stage.labels)
        offset += stage.n

    logger.debug(f"Telescopio con {spec.J} etapas y {total} puntos")
    return validate(matrix, labels, check_triangle=total <= 1024)


def _check_depth(depth: int) -> None:
    cap = get_settings().cantor_max_depth
    if depth > cap:
        raise DepthTooLarge(depth, cap)
    if depth < 1:
        raise InvalidParameter("depth", depth, "debe ser ≥ 1")


def cantor_beta(c: float, depth: int) -> FiniteMetricSpace:
    """
    Truncación a profundidad k de (2^ω, β_c): β_c(x, y) = c^v con v el primer
    índice (desde 0) en que difieren las cadenas. Es una ultramétrica de
    diámetro 1.
    """
    if not 0.0 < c < 1.0:
        raise InvalidParameter("c", c, "debe estar en (0, 1)")
    _check_depth(depth)

    words = np.arange(2 ** depth)
    diff = words[:, None] ^ words[None, :]
    # primer bit distinto contando desde el más significativo
    v = depth - np.floor(np.log2(np.where(diff > 0, diff, 1))).astype(int) - 1
    matrix = np.where(diff > 0, np.power(c, v, dtype=float), 0.0)
    labels = [format(int(w), f"0{depth}b") for w in words]
    return validate(matrix, labels, check_triangle=len(words) <= 1024)


def isosceles_triple(j: int, q_j: float) -> FiniteMetricSpace:
    """
    Vértices a1, a2, a3 de un triángulo isósceles con vértice en a2:
    lados 2^-(j+1) y base 2^-(j+1)·l(θ(q_j)).
    """
    if j < 1:
        raise InvalidParameter("j", j, "las etapas empiezan en 1")
    if not 0.0 <= q_j <= 1.0:
        raise InvalidParameter("q_j", q_j, "debe estar en [0, 1]")
    leg = _stage_bound(j)
    base = leg * chord_length(apex_angle(q_j))
    matrix = [
        [0.0, leg, base],
        [leg, 0.0, leg],
        [base, leg, 0.0],
    ]
    return validate(matrix, ["a1", "a2", "a3"])


def u_space(spec: TailSpec) -> FiniteMetricSpace:
    """
    U(𝒫_q): para cada j se amalgaman P_{1,j}, P_{2,j}, P_{3,j} sobre el
    triángulo e_{j,q} y las J etapas resultantes forman un telescopio.
    """
    stages = []
    for j in range(1, spec.J + 1):
        triple = isosceles_triple(j, spec.q.coord(j))
        stages.append(amalgam([spec.parts[i][j - 1] for i in range(3)], triple))
    return telescope(TelescopeSpec(tuple(stages)))


def u_space_modulus(q: CubePoint, r: CubePoint, J: int) -> float:
    """max_{i≤J} |l(θ(q_i)) − l(θ(r_i))|·2^-(i+1) = dis(Δ) entre U(𝒫_q) y U(𝒫_r)"""
    if q.m != r.m:
        raise DimensionMismatch(f"q tiene {q.m} coordenadas y r tiene {r.m}")
    terms = [
        abs(chord_length(apex_angle(q.coord(i))) - chord_length(apex_angle(r.coord(i)))) * _stage_bound(i)
        for i in range(1, J + 1)
    ]
    return max(terms) if terms else 0.0


# =============================================================================
# FAMILIAS DE PIEZAS
# =============================================================================

def one_point_parts(J: int) -> Tuple[Tuple[FiniteMetricSpace, ...], ...]:
    if J < 1:
        raise InvalidParameter("J", J, "debe ser ≥ 1")
    return tuple(tuple(one_point_space() for _ in range(J)) for _ in range(3))


def cantor_ratio(dimension: float) -> float:
    """c tal que log 2 / log(1/c) = dimension"""
    if dimension <= 0:
        raise InvalidParameter("dimension", dimension, "debe ser positiva")
    return 2.0 ** (-1.0 / dimension)


def cantor_parts(J: int, depth: int, M: float = 1.0) -> Tuple[Tuple[FiniteMetricSpace, ...], ...]:
    """
    Piezas de Cantor: P_{i,j} = 2^-(j+1)·l(π/6)·β_c con c elegido para que la
    dimensión de Assouad sea M + i + 2^-j. Dimensiones distintas para cada
    (i, j) hacen que las piezas no sean intercambiables.
    """
    if J < 1:
        raise InvalidParameter("J", J, "debe ser ≥ 1")
    _check_depth(depth)
    rows: List[Tuple[FiniteMetricSpace, ...]] = []
    for i in range(1, 4):
        row = []
        for j in range(1, J + 1):
            c = cantor_ratio(M + i + 2.0 ** -j)
            row.append(scale(cantor_beta(c, depth), _stage_bound(j) * MIN_CHORD))
        rows.append(tuple(row))
    return tuple(rows)


# =============================================================================
# INFLADO DE REDES
# =============================================================================

@dataclass
class Inflation:
    """Resultado de net_inflation: espacio, red usada y correspondencia testigo"""
    space: FiniteMetricSpace
    net: List[int]
    eta: float
    correspondence: Correspondence = field(repr=False)


def net_inflation(X: FiniteMetricSpace, eps: float, factor: FiniteMetricSpace) -> Inflation:
    """
    Sustituye cada punto de una ε-red de X por una copia del factor escalada a
    diámetro η = min(ε, α(red)) y amalgama sobre la métrica de la red.

    La correspondencia empareja cada x con la copia del primer punto de red a
    distancia < ε; su distorsión es < 2ε, luego GH(X, resultado) < ε.
    """
    net = epsilon_net(X, eps)
    N = restrict(X, net)
    eta = eps if N.n == 1 else min(eps, separation(N))
    if diameter(factor) > 0:
        piece = scale(factor, eta / diameter(factor))
    else:
        piece = factor
    inflated = amalgam([piece] * N.n, N)

    owner = [next(k for k, p in enumerate(net) if X.dist[x, p] < eps) for x in range(X.n)]
    pairs = set()
    for x, k in enumerate(owner):
        for u in range(piece.n):
            pairs.add((x, k * piece.n + u))
    logger.info(f"Inflado: red de {N.n} puntos, η={eta:.6g}, {inflated.n} puntos en total")
    return Inflation(inflated, net, eta, Correspondence(frozenset(pairs), X.n, inflated.n))


# =============================================================================
# ESPECIFICACIONES DECLARATIVAS (JSON)
# =============================================================================

def space_from_entry(entry: Union[Dict, List], base_dir: Path) -> FiniteMetricSpace:
    """
    Una entrada puede ser una matriz, un espacio en línea {"dist": ...},
    una referencia {"file": "x.json"} o un generador {"kind": "point"|"cantor"}.
    """
    if isinstance(entry, list):
        return validate(entry)
    if not isinstance(entry, dict):
        raise MalformedMatrix(f"Entrada de espacio no reconocida: {entry!r}")
    if "file" in entry:
        return load_space(base_dir / entry["file"])
    if "dist" in entry:
        return space_from_dict(entry)

    kind = entry.get("kind")
    if kind == "point":
        return one_point_space()
    if kind == "cantor":
        space = cantor_beta(float(entry.get("c", 0.5)), int(entry.get("depth", 1)))
        if "diameter" in entry:
            space = scale(space, float(entry["diameter"]))
        return space
    raise InvalidParameter("kind", kind, "se esperaba 'point' o 'cantor'")


def _read_json(path: Union[str, Path]) -> Dict:
    source = Path(path)
    if not source.is_file():
        raise InputError(f"No existe el fichero {source}")
    try:
        return json.loads(source.read_text())
    except json.JSONDecodeError as e:
        raise MalformedMatrix(f"{source}: JSON inválido ({e})")


def load_telescope_spec(path: Union[str, Path]) -> TelescopeSpec:
    """{"stages": [entrada, ...]}"""
    data = _read_json(path)
    base_dir = Path(path).parent
    stages = data.get("stages") if isinstance(data, dict) else None
    if not isinstance(stages, list):
        raise MalformedMatrix("Se esperaba una lista 'stages'")
    return TelescopeSpec(tuple(space_from_entry(entry, base_dir) for entry in stages))


def load_tail_spec(path: Union[str, Path]) -> TailSpec:
    """
    {"q": [...], "parts": [[...], [...], [...]]}, o bien un generador:
    {"q": [...], "parts": {"kind": "point", "J": 2}}
    {"q": [...], "parts": {"kind": "cantor", "J": 2, "depth": 3, "M": 1}}
    """
    data = _read_json(path)
    if not isinstance(data, dict) or "q" not in data or "parts" not in data:
        raise MalformedMatrix("Se esperaban las claves 'q' y 'parts'")
    q = CubePoint(tuple(data["q"]))
    raw = data["parts"]
    if isinstance(raw, dict):
        J = int(raw.get("J", q.m))
        if raw.get("kind") == "point":
            parts = one_point_parts(J)
        elif raw.get("kind") == "cantor":
            parts = cantor_parts(J, int(raw.get("depth", 2)), float(raw.get("M", 1.0)))
        else:
            raise InvalidParameter("parts.kind", raw.get("kind"), "se esperaba 'point' o 'cantor'")
    else:
        base_dir = Path(path).parent
        parts = tuple(tuple(space_from_entry(entry, base_dir) for entry in row) for row in raw)
    return TailSpec(parts, q)
