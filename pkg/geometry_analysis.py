"""
================================================================================
GEOMETRY ANALYSIS - Estimadores de invariantes cuasi-simétricos
================================================================================

Tres constantes sobre espacios finitos:

    - ud_constant: mayor δ de desconexión uniforme (cadenas de saltos)
    - up_constant: mayor c de perfección uniforme a resolución t
    - doubling_profile / assouad_fit: constante y exponente de duplicación

Componentes:
    - bottleneck_matrix(): distancias minimax por el árbol generador mínimo
    - perfectness_bound(): c válido para radios r ∈ [lo, hi)
    - InvariantReport / analyze(): informe conjunto
    - MembershipClass + is_member(): pertenencia a 𝒮(C,β), 𝒮(δ), 𝒮(c,t)
    - depth_sweep(): tendencia de las constantes al crecer la profundidad

Un espacio finito nunca es "no duplicante" de forma literal: todo son
constantes y perfiles; las tendencias se leen sobre familias de profundidad
creciente.

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree

from config import get_settings
from constructors import cantor_beta
from errors import (
    DegenerateFit,
    ExactModeUnavailable,
    InvalidParameter,
    ResolutionOutOfRange,
    SingletonSpace,
)
from metric_core import PseudoMetricSpace, diameter, epsilon_net, restrict, separation

logger = logging.getLogger(__name__)


# =============================================================================
# DESCONEXIÓN UNIFORME
# =============================================================================

def bottleneck_matrix(X: PseudoMetricSpace) -> np.ndarray:
    """
    B[x, y] = mínimo sobre caminos x → y del mayor salto.

    Las aristas del árbol generador mínimo se recorren en orden creciente
    (Kruskal): al unir dos componentes, todos sus pares cruzados reciben el
    peso de la arista.
    """
    n = X.n
    result = np.zeros((n, n))
    if n < 2:
        return result

    tree = minimum_spanning_tree(X.dist).tocoo()
    edges = sorted(zip(tree.data, tree.row, tree.col))

    component = list(range(n))
    members: Dict[int, List[int]] = {i: [i] for i in range(n)}
    for weight, a, b in edges:
        ca, cb = component[a], component[b]
        if ca == cb:
            continue
        left, right = members[ca], members[cb]
        result[np.ix_(left, right)] = weight
        result[np.ix_(right, left)] = weight
        for v in right:
            component[v] = ca
        left.extend(right)
        del members[cb]
    return result


def ud_constant(X: PseudoMetricSpace) -> float:
    """min_{x≠y} B(x, y) / d(x, y); vale exactamente 1 en una ultramétrica"""
    if X.n < 2:
        raise SingletonSpace("ud_constant")
    B = bottleneck_matrix(X)
    off = ~np.eye(X.n, dtype=bool)
    return float(np.min(B[off] / X.dist[off]))


# =============================================================================
# PERFECCIÓN UNIFORME
# =============================================================================

def perfectness_bound(X: PseudoMetricSpace, lo: float, hi: float) -> float:
    """
    Mayor c tal que para todo x y todo r ∈ [lo, hi) existe y con
    c·r ≤ d(x, y) ≤ r.

    Para un punto x con distancias distintas s_1 < ... < s_K la mejor
    elección en r ∈ [s_k, s_{k+1}) es s_k, y el ínfimo de s_k / r se alcanza
    justo antes de min(s_{k+1}, hi). Si r < s_1 no hay candidato y c = 0.
    Con rango vacío la condición es vacía y se devuelve 1.
    """
    if lo >= hi:
        return 1.0
    best = 1.0
    for row in X.dist:
        s = np.unique(row[row > 0])
        if len(s) == 0 or lo < s[0]:
            return 0.0
        right = np.minimum(np.append(s[1:], np.inf), hi)
        left = np.maximum(s, lo)
        active = left < right
        if active.any():
            best = min(best, float(np.min(s[active] / right[active])))
    return best


# Con rango vacío vale todo c < 1; se informa el mayor flotante por debajo
UP_VACUOUS = float(np.nextafter(1.0, 0.0))


def up_constant(X: PseudoMetricSpace, t: float) -> float:
    """perfectness_bound sobre r ∈ [t, δ(X)), siempre en [0, 1)"""
    D = diameter(X)
    if not 0.0 < t <= D:
        raise ResolutionOutOfRange(t, D)
    return min(perfectness_bound(X, t, D), UP_VACUOUS)


# =============================================================================
# DUPLICACIÓN
# =============================================================================

def _subset_tables(X: PseudoMetricSpace) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """δ, α y cardinal de todos los subconjuntos (máscaras de bits)"""
    n = X.n
    total = 1 << n
    delta = np.zeros(total)
    alpha = np.full(total, np.inf)
    card = np.zeros(total, dtype=int)
    masks = np.arange(total, dtype=np.int64)
    for b in range(n):
        low = masks[: 1 << b]
        far = np.zeros(1 << b)
        near = np.full(1 << b, np.inf)
        for q in range(b):
            has_q = (low >> q) & 1 == 1
            far = np.where(has_q, np.maximum(far, X.dist[b, q]), far)
            near = np.where(has_q, np.minimum(near, X.dist[b, q]), near)
        block = slice(1 << b, 1 << (b + 1))
        delta[block] = np.maximum(delta[: 1 << b], far)
        alpha[block] = np.minimum(alpha[: 1 << b], near)
        card[block] = card[: 1 << b] + 1
    return delta, alpha, card


def _sample_centers(n: int, count: int, seed: int) -> np.ndarray:
    if n <= count:
        return np.arange(n)
    return np.sort(np.random.default_rng(seed).choice(n, size=count, replace=False))


def _structured_samples(
    X: PseudoMetricSpace,
    centers: int,
    seed: int,
    depth: int = 6,
) -> List[Tuple[int, float, float]]:
    """
    (cardinal, δ, α) de bolas cerradas B(x, r) en cada radio distinto y de
    empaquetamientos voraces de cada bola a escalas r·2^-k.
    """
    samples = []
    for x in _sample_centers(X.n, centers, seed):
        for r in np.unique(X.dist[x][X.dist[x] > 0]):
            ball = np.nonzero(X.dist[x] <= r)[0]
            if len(ball) < 2:
                continue
            sub = restrict(X, ball)
            samples.append((sub.n, diameter(sub), separation(sub)))
            for k in range(1, depth + 1):
                net = epsilon_net(sub, float(r) * 2.0 ** -k)
                if len(net) < 2:
                    continue
                packing = restrict(sub, net)
                samples.append((packing.n, diameter(packing), separation(packing)))
    return samples


def doubling_profile(
    X: PseudoMetricSpace,
    beta: float,
    exact: Optional[bool] = None,
    centers: int = 64,
    seed: int = 0,
) -> float:
    """
    Menor C con card(A) ≤ C·(δ(A)/α(A))^β para los subconjuntos considerados.

    Modo exacto (|X| ≤ 15): todos los subconjuntos con al menos 2 puntos.
    Modo estructurado: bolas y empaquetamientos; el resultado es sólo una
    cota inferior de la C verdadera.
    """
    if not beta > 0:
        raise InvalidParameter("beta", beta, "debe ser positivo")
    limit = get_settings().exact_doubling_max_points
    if exact is None:
        exact = X.n <= limit
    if exact and X.n > limit:
        raise ExactModeUnavailable(X.n, limit)
    if X.n < 2:
        return 1.0

    if exact:
        delta, alpha, card = _subset_tables(X)
        mask = card >= 2
        values = card[mask] * (alpha[mask] / delta[mask]) ** beta
        return float(values.max())

    samples = _structured_samples(X, centers, seed)
    logger.debug(f"Perfil de duplicación con {len(samples)} subconjuntos estructurados")
    return float(max(c * (a / d) ** beta for c, d, a in samples))


@dataclass
class AssouadFit:
    """Recta log card(A) ≈ slope · log(δ/α) + intercept"""
    slope: float
    intercept: float
    samples: int


def assouad_fit(X: PseudoMetricSpace, centers: int = 16, seed: int = 0) -> AssouadFit:
    """Regresión sobre bolas y empaquetamientos; la pendiente estima el exponente"""
    if X.n < 4:
        raise InvalidParameter("n", X.n, "se necesitan al menos 4 puntos")
    samples = _structured_samples(X, centers, seed)
    ratios = np.log(np.array([d / a for _, d, a in samples]))
    cards = np.log(np.array([c for c, _, _ in samples], dtype=float))
    if len(samples) < 2 or np.ptp(ratios) == 0:
        raise DegenerateFit("Todas las razones δ/α coinciden: no hay escala que ajustar")
    slope, intercept = np.polyfit(ratios, cards, 1)
    return AssouadFit(float(slope), float(intercept), len(samples))


def assouad_estimate(X: PseudoMetricSpace) -> float:
    return assouad_fit(X).slope


# =============================================================================
# CLASES 𝒮
# =============================================================================

class MembershipClass(Enum):
    """Las tres clases de espacios usadas en los argumentos de tipicidad"""
    DOUBLING = "doubling"                  # 𝒮(C, β)
    UNIFORMLY_DISCONNECTED = "ud"          # 𝒮(δ)
    UNIFORMLY_PERFECT = "up"               # 𝒮(c, t)


def in_doubling_class(X: PseudoMetricSpace, C: float, beta: float) -> bool:
    limit = get_settings().exact_doubling_max_points
    if X.n > limit:
        raise ExactModeUnavailable(X.n, limit)
    return doubling_profile(X, beta, exact=True) <= C


def in_ud_class(X: PseudoMetricSpace, delta: float) -> bool:
    return ud_constant(X) >= delta


def in_up_class(X: PseudoMetricSpace, c: float, t: float, resolution: Optional[float] = None) -> bool:
    """
    r recorre [resolution, t); por debajo de la separación todo espacio finito
    falla, así que resolution vale α(X) por defecto.
    """
    if resolution is None:
        resolution = separation(X)
    return perfectness_bound(X, resolution, t) >= c


def is_member(X: PseudoMetricSpace, kind: MembershipClass, **params) -> bool:
    if kind is MembershipClass.DOUBLING:
        return in_doubling_class(X, params["C"], params["beta"])
    if kind is MembershipClass.UNIFORMLY_DISCONNECTED:
        return in_ud_class(X, params["delta"])
    return in_up_class(X, params["c"], params["t"], params.get("resolution"))


# =============================================================================
# INFORME
# =============================================================================

@dataclass
class InvariantReport:
    doubling_beta: float
    doubling_C: float
    doubling_exact: bool
    ud_delta: float
    up_c: float
    resolution_t: float

    def to_dict(self) -> Dict:
        return asdict(self)


def analyze(X: PseudoMetricSpace, t: Optional[float] = None) -> InvariantReport:
    """
    Calcula las tres constantes. β es la pendiente ajustada; si el ajuste es
    degenerado se usa β = 1 y se avisa.
    """
    if t is None:
        t = separation(X)
    try:
        beta = assouad_fit(X).slope if X.n >= 4 else 1.0
    except DegenerateFit as e:
        logger.warning(f"{e}; se usa β = 1")
        beta = 1.0
    if not beta > 0:
        logger.warning(f"Pendiente no positiva ({beta:.4g}); se usa β = 1")
        beta = 1.0

    exact = X.n <= get_settings().exact_doubling_max_points
    report = InvariantReport(
        doubling_beta=float(beta),
        doubling_C=doubling_profile(X, beta),
        doubling_exact=exact,
        ud_delta=ud_constant(X),
        up_c=up_constant(X, t),
        resolution_t=float(t),
    )
    logger.info(f"Análisis de {X.n} puntos: δ={report.ud_delta:.4g}, c={report.up_c:.4g}, β={beta:.4g}")
    return report


def depth_sweep(c: float, depths: Sequence[int]) -> List[Dict]:
    """
    Constantes de cantor_beta(c, k) para cada profundidad k; la resolución es
    la escala de truncación c^(k-1).
    """
    rows = []
    for k in depths:
        X = cantor_beta(c, k)
        t = c ** (k - 1)
        try:
            slope = assouad_fit(X).slope if X.n >= 4 else math.nan
        except DegenerateFit:
            slope = math.nan
        rows.append({
            "depth": int(k),
            "points": X.n,
            "ud_constant": ud_constant(X),
            "up_constant": up_constant(X, t),
            "assouad": slope,
        })
        logger.debug(f"Profundidad {k}: {rows[-1]}")
    return rows
