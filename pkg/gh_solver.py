"""
================================================================================
GH SOLVER - Correspondencias, distorsión y distancia de Gromov-Hausdorff exacta
================================================================================

GH(X, Y) = (1/2) · min dis(R) sobre todas las correspondencias R ⊆ X × Y.

Componentes:
    - Correspondence / GhResult / EpsApproximation: registros de dominio
    - distortion(): dis(R) exacta en O(|R|²)
    - GhBranchAndBound: búsqueda exacta con poda e incumbente
    - gh_exact / gh_lower / gh_upper_local: valor exacto y horquillas
    - gh_enumerate: oráculo ingenuo por enumeración (≤ 20 pares)
    - check_eps_approx y conversiones correspondencia <-> ε-aproximación
    - isometry_oracle: biyección isométrica por backtracking (≤ 10 puntos)

El par (x, y) se indexa como p = x·|Y| + y; disc[p, p'] = |d(x,x') − e(y,y')|
se calcula una sola vez y lo comparten la búsqueda y el oráculo, así que los
valores coinciden bit a bit.

Desempate: entre las correspondencias óptimas se devuelve la de lista de pares
ordenada lexicográficamente menor (comparación de listas de Python).

Uso:
    result = gh_exact(X, Y)
    result.upper, result.witness.sorted_pairs()

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import get_settings
from errors import (
    ApproximationError,
    BudgetExhausted,
    InvalidCorrespondence,
    InvalidParameter,
    ProductTooLarge,
    SizeMismatch,
)
from metric_core import PseudoMetricSpace, diameter, separation

logger = logging.getLogger(__name__)

# Límite de |X|·|Y| para la matriz de discrepancias (|X|·|Y|)²
MAX_PAIR_SPACE = 2500


# =============================================================================
# TIPOS DE DOMINIO
# =============================================================================

@dataclass(frozen=True)
class Correspondence:
    """
    R ⊆ X × Y con ambas proyecciones sobreyectivas.

    Atributos:
        pairs: pares de índices (x, y)
        n, m: tamaños de X e Y
    """
    pairs: FrozenSet[Tuple[int, int]]
    n: int
    m: int

    def __post_init__(self):
        pairs = frozenset((int(x), int(y)) for x, y in self.pairs)
        for x, y in pairs:
            if not (0 <= x < self.n and 0 <= y < self.m):
                raise InvalidCorrespondence(f"Par fuera de rango: ({x}, {y})")
        missing_x = set(range(self.n)) - {x for x, _ in pairs}
        missing_y = set(range(self.m)) - {y for _, y in pairs}
        if missing_x:
            raise InvalidCorrespondence(f"La proyección a X no es sobreyectiva: faltan {sorted(missing_x)}")
        if missing_y:
            raise InvalidCorrespondence(f"La proyección a Y no es sobreyectiva: faltan {sorted(missing_y)}")
        object.__setattr__(self, "pairs", pairs)

    def sorted_pairs(self) -> List[Tuple[int, int]]:
        return sorted(self.pairs)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        ordered = self.sorted_pairs()
        return (np.array([x for x, _ in ordered], dtype=int),
                np.array([y for _, y in ordered], dtype=int))

    def transpose(self) -> "Correspondence":
        return Correspondence(frozenset((y, x) for x, y in self.pairs), self.m, self.n)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class GhResult:
    """
    Horquilla lower ≤ GH ≤ upper con la correspondencia que alcanza upper.

    exact indica lower == upper (la búsqueda terminó).
    """
    lower: float
    upper: float
    witness: Correspondence
    exact: bool
    nodes: int = 0

    def to_dict(self) -> Dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "nodes": self.nodes,
            "witness_pairs": [list(p) for p in self.witness.sorted_pairs()],
        }


@dataclass(frozen=True)
class EpsApproximation:
    """f: X → Y, g: Y → X como listas de índices, y el ε de la aproximación"""
    f: Tuple[int, ...]
    g: Tuple[int, ...]
    eps: float


def trivial_correspondence(n: int) -> Correspondence:
    """Δ_X = {(x, x)}"""
    return Correspondence(frozenset((i, i) for i in range(n)), n, n)


def full_correspondence(n: int, m: int) -> Correspondence:
    return Correspondence(frozenset((x, y) for x in range(n) for y in range(m)), n, m)


# =============================================================================
# DISTORSIÓN
# =============================================================================

def _check_sizes(R: Correspondence, X: PseudoMetricSpace, Y: PseudoMetricSpace) -> None:
    if R.n != X.n or R.m != Y.n:
        raise InvalidCorrespondence(f"Correspondencia {R.n}×{R.m} para espacios {X.n}×{Y.n}")


def distortion(R: Correspondence, X: PseudoMetricSpace, Y: PseudoMetricSpace) -> float:
    """dis(R) = max |d(x, u) − e(y, v)| sobre (x, y), (u, v) ∈ R"""
    _check_sizes(R, X, Y)
    xs, ys = R.arrays()
    return float(np.abs(X.dist[np.ix_(xs, xs)] - Y.dist[np.ix_(ys, ys)]).max())


def discrepancy_matrix(X: PseudoMetricSpace, Y: PseudoMetricSpace) -> np.ndarray:
    """disc[x·m + y, u·m + v] = |d(x, u) − e(y, v)|"""
    size = X.n * Y.n
    if size > MAX_PAIR_SPACE:
        raise ProductTooLarge(size, MAX_PAIR_SPACE)
    return np.abs(X.dist[:, None, :, None] - Y.dist[None, :, None, :]).reshape(size, size)


def _to_correspondence(indices: Iterable[int], n: int, m: int) -> Correspondence:
    return Correspondence(frozenset((int(p) // m, int(p) % m) for p in indices), n, m)


# =============================================================================
# COTAS
# =============================================================================

def gh_lower(X: PseudoMetricSpace, Y: PseudoMetricSpace) -> float:
    """
    Cota inferior barata:
        - |δ(X) − δ(Y)| / 2 (coincide con |GH(pt, X) − GH(pt, Y)|)
        - si |X| > |Y| dos puntos de X comparten pareja: GH ≥ α(X) / 2
    """
    bound = abs(diameter(X) - diameter(Y)) / 2.0
    if X.n > Y.n:
        bound = max(bound, separation(X) / 2.0)
    elif Y.n > X.n:
        bound = max(bound, separation(Y) / 2.0)
    return bound


def _set_distortion(disc: np.ndarray, members: np.ndarray) -> float:
    if len(members) == 0:
        return 0.0
    return float(disc[np.ix_(members, members)].max())


def gh_upper_local(
    X: PseudoMetricSpace,
    Y: PseudoMetricSpace,
    restarts: Optional[int] = None,
    seed: int = 0,
    disc: Optional[np.ndarray] = None,
) -> GhResult:
    """
    Búsqueda local sobre correspondencias con movimientos añadir, quitar y
    intercambiar; sólo se aceptan mejoras estrictas. Determinista dado seed.

    El reinicio 0 parte de Δ cuando |X| = |Y|; el resto de asignaciones
    aleatorias sobreyectivas.
    """
    restarts = restarts or get_settings().local_restarts
    if disc is None:
        disc = discrepancy_matrix(X, Y)
    n, m = X.n, Y.n
    xs_all = np.repeat(np.arange(n), m)
    ys_all = np.tile(np.arange(m), n)
    rng = np.random.default_rng(seed)

    best_value = math.inf
    best_members: Optional[np.ndarray] = None

    for restart in range(restarts):
        member = np.zeros(n * m, dtype=bool)
        if restart == 0 and n == m:
            member[np.arange(n) * m + np.arange(n)] = True
        else:
            member[np.arange(n) * m + rng.integers(0, m, size=n)] = True
            covered_y = np.zeros(m, dtype=bool)
            covered_y[ys_all[member]] = True
            for y in np.nonzero(~covered_y)[0]:
                member[int(rng.integers(0, n)) * m + y] = True

        value = _set_distortion(disc, np.nonzero(member)[0])
        while True:
            move = _best_move(disc, member, value, xs_all, ys_all, n, m)
            if move is None:
                break
            value, member = move

        logger.debug(f"Reinicio {restart}: distorsión {value:.6g}")
        if value < best_value:
            best_value = value
            best_members = np.nonzero(member)[0]

    witness = _to_correspondence(best_members, n, m)
    return GhResult(
        lower=min(gh_lower(X, Y), best_value / 2.0),
        upper=best_value / 2.0,
        witness=witness,
        exact=False,
    )


def _best_move(disc, member, value, xs_all, ys_all, n, m):
    """Mejor movimiento estrictamente mejorador o None"""
    inside = np.nonzero(member)[0]
    outside = np.nonzero(~member)[0]
    count_x = np.bincount(xs_all[inside], minlength=n)
    count_y = np.bincount(ys_all[inside], minlength=m)

    best_value, best_member = value, None

    # añadir
    if len(outside):
        added = np.maximum(value, disc[np.ix_(outside, inside)].max(axis=1))
        k = int(np.argmin(added))
        if added[k] < best_value:
            best_value = float(added[k])
            best_member = member.copy()
            best_member[outside[k]] = True

    for p in inside:
        rest = inside[inside != p]
        if len(rest) == 0:
            continue
        without = _set_distortion(disc, rest)
        removable = count_x[xs_all[p]] > 1 and count_y[ys_all[p]] > 1

        # quitar
        if removable and without < best_value:
            best_value = without
            best_member = member.copy()
            best_member[p] = False

        # intercambiar
        if len(outside):
            swapped = np.maximum(without, disc[np.ix_(outside, rest)].max(axis=1))
            keeps_x = (count_x[xs_all[p]] > 1) | (xs_all[outside] == xs_all[p])
            keeps_y = (count_y[ys_all[p]] > 1) | (ys_all[outside] == ys_all[p])
            swapped = np.where(keeps_x & keeps_y, swapped, np.inf)
            k = int(np.argmin(swapped))
            if swapped[k] < best_value:
                best_value = float(swapped[k])
                best_member = member.copy()
                best_member[p] = False
                best_member[outside[k]] = True

    if best_member is None:
        return None
    return best_value, best_member


# =============================================================================
# BRANCH AND BOUND
# =============================================================================

@dataclass
class _Node:
    k: int
    members: Tuple[int, ...]
    value: float


class GhBranchAndBound:
    """
    Búsqueda exacta de min dis(R).

    Los pares se deciden (incluir / excluir) en orden decreciente de impacto
    max_q disc[p, q]; una rama se poda cuando su cota inferior iguala o supera
    al incumbente. Una hoja es una correspondencia: añadir pares nunca reduce
    la distorsión, así que no se sigue ampliando.

    Atributos:
        global_upper_bound: mejor distorsión encontrada
        best_solution: índices de pares del incumbente
        nodes: nodos visitados
    """

    def __init__(self, disc: np.ndarray, n: int, m: int, budget: int):
        self.disc = disc
        self.n, self.m = n, m
        self.budget = budget
        self.xs = np.repeat(np.arange(n), m)
        self.ys = np.tile(np.arange(m), n)
        impact = disc.max(axis=1)
        self.order = np.argsort(-impact, kind="stable")
        self.position = np.empty(n * m, dtype=int)
        self.position[self.order] = np.arange(n * m)
        self.global_upper_bound = math.inf
        self.best_solution: Tuple[int, ...] = ()
        self.nodes = 0
        self.exhausted = False
        self.open_bound = math.inf

    def seed(self, members: Sequence[int], value: float) -> None:
        if value < self.global_upper_bound:
            self.global_upper_bound = value
            self.best_solution = tuple(int(p) for p in members)

    def _covered(self, members: Tuple[int, ...]) -> Tuple[np.ndarray, np.ndarray]:
        cx = np.zeros(self.n, dtype=bool)
        cy = np.zeros(self.m, dtype=bool)
        idx = np.array(members, dtype=int)
        cx[self.xs[idx]] = True
        cy[self.ys[idx]] = True
        return cx, cy

    def _costs(self, node: _Node) -> np.ndarray:
        if not node.members:
            return np.full(self.n * self.m, node.value)
        return np.maximum(node.value, self.disc[:, list(node.members)].max(axis=1))

    def lower_bound(self, node: _Node, cx: np.ndarray, cy: np.ndarray, costs: np.ndarray) -> float:
        """max(valor actual, coste mínimo de cubrir cada x e y aún descubiertos)"""
        available = self.position >= node.k
        grid = np.where(available, costs, np.inf).reshape(self.n, self.m)
        bound = node.value
        if not cx.all():
            bound = max(bound, float(grid.min(axis=1)[~cx].max()))
        if not cy.all():
            bound = max(bound, float(grid.min(axis=0)[~cy].max()))
        return bound

    def solve(self) -> float:
        stack: List[_Node] = [_Node(0, (), 0.0)]
        while stack:
            if self.nodes >= self.budget:
                self.exhausted = True
                self.open_bound = min(self._node_bound(node) for node in stack)
                logger.warning(f"Branch-and-bound agotado tras {self.nodes} nodos")
                break
            node = stack.pop()
            self.nodes += 1

            cx, cy = self._covered(node.members) if node.members else (
                np.zeros(self.n, dtype=bool), np.zeros(self.m, dtype=bool))
            if cx.all() and cy.all():
                if node.value < self.global_upper_bound:
                    logger.debug(f"Nuevo incumbente {node.value:.6g} en el nodo {self.nodes}")
                    self.seed(node.members, node.value)
                continue
            if node.k == self.n * self.m:
                continue

            costs = self._costs(node)
            if self.lower_bound(node, cx, cy, costs) >= self.global_upper_bound:
                continue

            p = int(self.order[node.k])
            stack.append(_Node(node.k + 1, node.members, node.value))
            if costs[p] < self.global_upper_bound:
                stack.append(_Node(node.k + 1, node.members + (p,), float(costs[p])))
        return self.global_upper_bound

    def _node_bound(self, node: _Node) -> float:
        cx, cy = self._covered(node.members) if node.members else (
            np.zeros(self.n, dtype=bool), np.zeros(self.m, dtype=bool))
        return min(self.global_upper_bound, self.lower_bound(node, cx, cy, self._costs(node)))


def lex_smallest_witness(
    disc: np.ndarray,
    n: int,
    m: int,
    threshold: float,
    budget: int,
) -> Optional[Tuple[int, ...]]:
    """
    Correspondencia de distorsión ≤ threshold cuya lista ordenada de pares es
    lexicográficamente mínima. DFS en orden de índice: primero se comprueba si
    el prefijo ya es correspondencia, luego incluir antes que excluir.
    """
    size = n * m
    xs = np.repeat(np.arange(n), m)
    ys = np.tile(np.arange(m), n)
    compatible = disc <= threshold
    steps = 0

    def covers(members: List[int]) -> bool:
        return len(set(xs[members])) == n and len(set(ys[members])) == m

    def reachable(members: List[int], start: int, allowed: np.ndarray) -> bool:
        cand = allowed.copy()
        cand[:start] = False
        cx = np.zeros(n, dtype=bool)
        cy = np.zeros(m, dtype=bool)
        cx[xs[members]] = True
        cy[ys[members]] = True
        cx[xs[cand]] = True
        cy[ys[cand]] = True
        return bool(cx.all() and cy.all())

    def visit(members: List[int], start: int, allowed: np.ndarray) -> str:
        nonlocal steps
        steps += 1
        if steps > budget:
            return "stop"
        if members and covers(members):
            return "found"
        if not reachable(members, start, allowed):
            return "dead"
        return "open"

    # Pila explícita: el testigo puede tener tantos pares como |X|·|Y|
    root = np.ones(size, dtype=bool)
    status = visit([], 0, root)
    if status != "open":
        return None
    stack = [([], root, 0)]
    while stack:
        members, allowed, start = stack[-1]
        pending = np.flatnonzero(allowed[start:])
        if len(pending) == 0:
            stack.pop()
            continue
        p = start + int(pending[0])
        stack[-1] = (members, allowed, p + 1)
        child, child_allowed = members + [p], allowed & compatible[p]
        status = visit(child, p + 1, child_allowed)
        if status == "found":
            return tuple(child)
        if status == "stop":
            return None
        if status == "open":
            stack.append((child, child_allowed, p + 1))
    return None


def gh_exact(
    X: PseudoMetricSpace,
    Y: PseudoMetricSpace,
    budget: Optional[int] = None,
    strict: bool = False,
) -> GhResult:
    """
    Distancia GH exacta por branch-and-bound.

    Args:
        budget: máximo de nodos (GHLAB_GH_BUDGET por defecto)
        strict: si se agota el presupuesto lanza BudgetExhausted en lugar de
            devolver la horquilla con exact=False

    Returns:
        GhResult con lower = upper = GH y testigo lexicográficamente mínimo
    """
    budget = budget or get_settings().gh_node_budget
    n, m = X.n, Y.n
    disc = discrepancy_matrix(X, Y)

    solver = GhBranchAndBound(disc, n, m, budget)
    solver.seed(range(n * m), _set_distortion(disc, np.arange(n * m)))
    local = gh_upper_local(X, Y, restarts=min(8, get_settings().local_restarts), disc=disc)
    xs, ys = local.witness.arrays()
    solver.seed(xs * m + ys, 2.0 * local.upper)

    best = solver.solve()

    if solver.exhausted:
        lower = max(min(gh_lower(X, Y), best / 2.0), solver.open_bound / 2.0)
        result = GhResult(
            lower=lower,
            upper=best / 2.0,
            witness=_to_correspondence(solver.best_solution, n, m),
            exact=lower == best / 2.0,
            nodes=solver.nodes,
        )
        if strict and not result.exact:
            raise BudgetExhausted(solver.nodes, result)
        return result

    members = lex_smallest_witness(disc, n, m, best, budget)
    if members is None:
        logger.warning("Desempate lexicográfico sin terminar; se usa el incumbente")
        members = solver.best_solution

    logger.debug(f"GH exacta {best / 2.0:.6g} en {solver.nodes} nodos")
    return GhResult(
        lower=best / 2.0,
        upper=best / 2.0,
        witness=_to_correspondence(members, n, m),
        exact=True,
        nodes=solver.nodes,
    )


# =============================================================================
# ORÁCULO POR ENUMERACIÓN
# =============================================================================

def gh_enumerate(X: PseudoMetricSpace, Y: PseudoMetricSpace) -> GhResult:
    """
    Enumera todos los subconjuntos de X × Y (máximo 20 pares).

    Recorre las máscaras por su bit más alto b: la distorsión de una máscara
    con bit alto b es el máximo entre la de la máscara sin b y la discrepancia
    de b con el resto.
    """
    cap = get_settings().enumeration_max_pairs
    n, m = X.n, Y.n
    size = n * m
    if size > cap:
        raise ProductTooLarge(size, cap)
    disc = discrepancy_matrix(X, Y)
    xs = np.repeat(np.arange(n), m)
    ys = np.tile(np.arange(m), n)

    total = 1 << size
    value = np.zeros(total)
    cover_x = np.zeros(total, dtype=np.int64)
    cover_y = np.zeros(total, dtype=np.int64)
    masks = np.arange(total, dtype=np.int64)
    for b in range(size):
        low = masks[: 1 << b]
        contrib = np.zeros(1 << b)
        for q in range(b):
            has_q = (low >> q) & 1 == 1
            contrib = np.where(has_q, np.maximum(contrib, disc[b, q]), contrib)
        block = slice(1 << b, 1 << (b + 1))
        value[block] = np.maximum(value[: 1 << b], contrib)
        cover_x[block] = cover_x[: 1 << b] | (1 << int(xs[b]))
        cover_y[block] = cover_y[: 1 << b] | (1 << int(ys[b]))

    valid = (cover_x == (1 << n) - 1) & (cover_y == (1 << m) - 1)
    best = float(value[valid].min())
    optimal = np.nonzero(valid & (value == best))[0]
    candidates = [[p for p in range(size) if (int(mask) >> p) & 1] for mask in optimal]
    members = min(candidates)
    return GhResult(best / 2.0, best / 2.0, _to_correspondence(members, n, m), True, nodes=total)


# =============================================================================
# ε-APROXIMACIONES
# =============================================================================

def check_eps_approx(a: EpsApproximation, X: PseudoMetricSpace, Y: PseudoMetricSpace) -> bool:
    """
    Las tres condiciones, con desigualdad estricta y sin tolerancia:
        (1) |d(x, x') − e(f x, f x')| < ε
        (2) |e(y, y') − d(g y, g y')| < ε
        (3) d(g f x, x) < ε  y  e(f g y, y) < ε
    """
    f = np.asarray(a.f, dtype=int)
    g = np.asarray(a.g, dtype=int)
    if len(f) != X.n or len(g) != Y.n:
        raise InvalidParameter("f/g", (len(f), len(g)), f"se esperaban longitudes {X.n} y {Y.n}")
    if (f < 0).any() or (f >= Y.n).any() or (g < 0).any() or (g >= X.n).any():
        raise InvalidParameter("f/g", (a.f, a.g), "índices fuera de rango")

    eps = a.eps
    if not np.all(np.abs(X.dist - Y.dist[np.ix_(f, f)]) < eps):
        return False
    if not np.all(np.abs(Y.dist - X.dist[np.ix_(g, g)]) < eps):
        return False
    if not np.all(X.dist[g[f], np.arange(X.n)] < eps):
        return False
    return bool(np.all(Y.dist[f[g], np.arange(Y.n)] < eps))


def approximation_from_net(
    f: Sequence[int],
    X: PseudoMetricSpace,
    Y: PseudoMetricSpace,
    eps: float,
) -> EpsApproximation:
    """
    Si f cumple (1) con ε y f(X) es ε-densa en Y, g(y) = punto de X cuya
    imagen está más cerca de y completa una 3ε-aproximación.
    """
    f_arr = np.asarray(f, dtype=int)
    if not np.all(np.abs(X.dist - Y.dist[np.ix_(f_arr, f_arr)]) < eps):
        raise ApproximationError(f"f no distorsiona menos de ε={eps}")
    to_image = Y.dist[f_arr, :]  # [x, y] = e(f x, y)
    nearest = to_image.min(axis=0)
    if not np.all(nearest < eps):
        y = int(np.argmax(nearest >= eps))
        raise ApproximationError(f"f(X) no es ε-densa: y={y} queda a {nearest[y]:.6g}")
    g = np.argmin(to_image, axis=0)
    return EpsApproximation(tuple(int(v) for v in f_arr), tuple(int(v) for v in g), 3.0 * eps)


def approximation_from_correspondence(
    R: Correspondence,
    X: PseudoMetricSpace,
    Y: PseudoMetricSpace,
) -> EpsApproximation:
    """f y g eligen la menor pareja en R; vale para cualquier ε > dis(R)"""
    _check_sizes(R, X, Y)
    f = [min(y for x, y in R.pairs if x == i) for i in range(X.n)]
    g = [min(x for x, y in R.pairs if y == j) for j in range(Y.n)]
    eps = float(np.nextafter(distortion(R, X, Y), np.inf))
    return EpsApproximation(tuple(f), tuple(g), eps)


def correspondence_from_approximation(a: EpsApproximation) -> Correspondence:
    """graph(f) ∪ graph(g)ᵀ"""
    pairs = {(x, y) for x, y in enumerate(a.f)} | {(x, y) for y, x in enumerate(a.g)}
    return Correspondence(frozenset(pairs), len(a.f), len(a.g))


# =============================================================================
# ORÁCULO DE ISOMETRÍA
# =============================================================================

def isometry_oracle(X: PseudoMetricSpace, Y: PseudoMetricSpace) -> Optional[List[int]]:
    """
    Biyección φ con e(φx, φx') = d(x, x') (tolerancia 1e-9 relativa) o None.

    Filtros previos: multiconjunto global de distancias y, por punto, fila
    ordenada de distancias.
    """
    if X.n != Y.n:
        raise SizeMismatch(X.n, Y.n)
    limit = get_settings().isometry_max_points
    if X.n > limit:
        raise InvalidParameter("n", X.n, f"el oráculo de isometría admite hasta {limit} puntos")

    n = X.n
    tol = get_settings().isometry_tol * max(1.0, diameter(X), diameter(Y))
    upper = np.triu_indices(n, 1)
    if not np.allclose(np.sort(X.dist[upper]), np.sort(Y.dist[upper]), rtol=0.0, atol=tol):
        return None

    rows_x = np.sort(X.dist, axis=1)
    rows_y = np.sort(Y.dist, axis=1)
    candidates = [
        [j for j in range(n) if np.allclose(rows_x[i], rows_y[j], rtol=0.0, atol=tol)]
        for i in range(n)
    ]
    if any(not c for c in candidates):
        return None

    assignment: List[int] = []
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in candidates[i]:
            if used[j]:
                continue
            if all(abs(X.dist[i, k] - Y.dist[j, assignment[k]]) <= tol for k in range(i)):
                used[j] = True
                assignment.append(j)
                if extend(i + 1):
                    return True
                assignment.pop()
                used[j] = False
        return False

    return list(assignment) if extend(0) else None
