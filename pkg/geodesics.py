"""
================================================================================
GEODESICS - Geodésicas de Gromov-Hausdorff y haces ramificados
================================================================================

Construcciones:
    - StraightGeodesic: (R, (1−s)d + s·e) entre dos espacios con R óptima
    - ProductExpandedGeodesic: fuera del conjunto de ceros A de ζ, el punto
      se multiplica (ℓ∞) por el factor C escalado por ζ(s)
    - BunchSlice: haz A-ramificado F(·, q); fuera de A se añade la cola
      identificadora U_q colgada del punto base o

Cada familia fija un conjunto portador común (pares de R, R×C, ...) y en cada
s devuelve el espacio y la aplicación portador → punto. La correspondencia
entre F(s) y F(t) es la imagen del portador por ambas aplicaciones; así los
extremos, las ramas y los cocientes comparten el mismo código.

Verificación:
    - verify_geodesic(): dis/2 ≤ |s−t|·L en toda la rejilla y cota inferior
      L − sup(0,s) − sup(t,1) por la desigualdad triangular
    - bunch_distinctness(): certifica F(s,q) ≇ F(t,r) o lo marca inconcluso

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import get_settings
from constructors import CubePoint, TailSpec, cantor_beta, cantor_parts, one_point_parts, u_space, u_space_modulus
from errors import (
    GeodesicViolation,
    InvalidParameter,
    LipschitzBudgetExceeded,
)
from gh_solver import Correspondence, distortion, gh_exact, isometry_oracle
from metric_core import (
    FiniteMetricSpace,
    LipschitzZeroSet,
    PseudoMetricSpace,
    diameter,
    linf_product,
    scale,
    validate,
    validate_pseudo,
)

logger = logging.getLogger(__name__)

_BUDGET_RTOL = 1e-12


# =============================================================================
# COCIENTE
# =============================================================================

def quotient_map(P: PseudoMetricSpace) -> Tuple[FiniteMetricSpace, np.ndarray]:
    """
    Colapsa las clases de distancia 0. Devuelve el espacio cociente y, para
    cada punto de P, el índice de su clase. El representante de cada clase es
    su primer punto y conserva su etiqueta.
    """
    n = P.n
    classes = np.full(n, -1, dtype=int)
    representatives: List[int] = []
    for i in range(n):
        if classes[i] >= 0:
            continue
        same = (P.dist[i] == 0) & (classes < 0)
        classes[same] = len(representatives)
        representatives.append(i)

    if len(representatives) == n:
        return validate(P.dist, P.labels), classes

    reps = np.array(representatives)
    # la distancia inducida no depende del representante
    induced = P.dist[np.ix_(reps, reps)]
    if not np.allclose(P.dist, induced[np.ix_(classes, classes)], rtol=0.0, atol=1e-12 * max(1.0, diameter(P))):
        raise InvalidParameter("P", P, "la relación de distancia 0 no es compatible con la métrica")
    logger.debug(f"Cociente: {n} puntos -> {len(reps)} clases")
    return validate(induced, [P.labels[r] for r in reps]), classes


def quotient(P: PseudoMetricSpace) -> FiniteMetricSpace:
    return quotient_map(P)[0]


# =============================================================================
# FAMILIAS
# =============================================================================

class GeodesicFamily:
    """
    Base de las familias s ↦ F(s).

    Las subclases implementan embed(s) -> (espacio, portador → índice).

    Atributos:
        name: identificador de la construcción
        L: distancia GH entre los extremos
        carrier_size: tamaño del conjunto portador común
    """

    name = "family"

    def __init__(self, L: float, carrier_size: int):
        self.L = float(L)
        self.carrier_size = carrier_size
        self._cache: Dict[float, Tuple[FiniteMetricSpace, np.ndarray]] = {}

    def embed(self, s: float) -> Tuple[FiniteMetricSpace, np.ndarray]:
        s = float(s)
        if not 0.0 <= s <= 1.0:
            raise InvalidParameter("s", s, "debe estar en [0, 1]")
        if s not in self._cache:
            self._cache[s] = self._embed(s)
        return self._cache[s]

    def _embed(self, s: float) -> Tuple[FiniteMetricSpace, np.ndarray]:
        raise NotImplementedError

    def point(self, s: float) -> FiniteMetricSpace:
        return self.embed(s)[0]

    def correspondence(self, s: float, t: float) -> Correspondence:
        """Correspondencia de la construcción entre F(s) y F(t)"""
        P, left = self.embed(s)
        Q, right = self.embed(t)
        return Correspondence(frozenset(zip(left.tolist(), right.tolist())), P.n, Q.n)


class ConstantFamily(GeodesicFamily):
    """F(s) = X para todo s (L = 0)"""

    name = "constant"

    def __init__(self, X: FiniteMetricSpace):
        super().__init__(0.0, X.n)
        self.X = X

    def _embed(self, s):
        return self.X, np.arange(self.X.n)


class StraightGeodesic(GeodesicFamily):
    """
    γ(0) = X, γ(1) = Y y γ(s) = (R, D_s) con D_s = (1−s)d + s·e.

    R debe ser óptima: dis(R) = 2L. El portador es R (pares ordenados).
    """

    name = "straight"

    def __init__(self, X: FiniteMetricSpace, Y: FiniteMetricSpace, R: Correspondence, L: float):
        if not L > 0:
            raise InvalidParameter("L", L, "los extremos deben ser distintos")
        dis = distortion(R, X, Y)
        if abs(dis - 2.0 * L) > _BUDGET_RTOL * max(1.0, dis):
            raise InvalidParameter("R", dis, f"dis(R) debe ser 2L = {2.0 * L}")
        super().__init__(L, len(R))
        self.X, self.Y, self.R = X, Y, R
        self.xs, self.ys = R.arrays()

    @classmethod
    def from_endpoints(cls, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> "StraightGeodesic":
        """Usa el testigo óptimo de gh_exact"""
        result = gh_exact(X, Y, strict=True)
        return cls(X, Y, result.witness, result.upper)

    def raw_point(self, s: float) -> PseudoMetricSpace:
        D = (1.0 - s) * self.X.dist[np.ix_(self.xs, self.xs)] + s * self.Y.dist[np.ix_(self.ys, self.ys)]
        labels = [f"({self.X.labels[x]},{self.Y.labels[y]})" for x, y in zip(self.xs, self.ys)]
        return validate_pseudo(D, labels)

    def _embed(self, s):
        if s == 0.0:
            return self.X, self.xs.copy()
        if s == 1.0:
            return self.Y, self.ys.copy()
        return quotient_map(self.raw_point(s))


class ProductExpandedGeodesic(GeodesicFamily):
    """
    F(s) = γ(s) si s ∈ A, y γ(s) ×∞ ζ(s)·h si s ∉ A.

    Requiere L_ζ · δ(C) ≤ 2·GH(X, Y); check_budget=False permite construir
    familias corruptas a propósito. Portador: R × C con índice r·|C| + a.
    """

    name = "product"

    def __init__(
        self,
        base: StraightGeodesic,
        C: FiniteMetricSpace,
        zeta: LipschitzZeroSet,
        check_budget: bool = True,
    ):
        budget = 2.0 * base.L
        if check_budget and zeta.L * diameter(C) > budget * (1.0 + _BUDGET_RTOL):
            raise LipschitzBudgetExceeded(zeta.L, diameter(C), budget)
        super().__init__(base.L, base.carrier_size * C.n)
        self.base, self.C, self.zeta = base, C, zeta

    def _embed(self, s):
        space, smap = self.base.embed(s)
        k = self.C.n
        if self.zeta.contains(s):
            return space, np.repeat(smap, k)
        product = linf_product(space, scale(self.C, self.zeta(s)))
        carrier = (smap[:, None] * k + np.arange(k)[None, :]).reshape(-1)
        return quotient_map_compose(product, carrier)


def quotient_map_compose(P: PseudoMetricSpace, carrier: np.ndarray) -> Tuple[FiniteMetricSpace, np.ndarray]:
    space, classes = quotient_map(P)
    return space, classes[carrier]


def straight_point(g: StraightGeodesic, s: float) -> FiniteMetricSpace:
    return g.point(s)


def product_expanded_point(
    base: StraightGeodesic,
    C: FiniteMetricSpace,
    zeta: LipschitzZeroSet,
    s: float,
) -> FiniteMetricSpace:
    return ProductExpandedGeodesic(base, C, zeta).point(s)


# =============================================================================
# HAZ RAMIFICADO
# =============================================================================

@dataclass
class BranchSpec:
    """
    Datos del haz: geodésica base, factor C (δ ≤ 2), ζ₂ con ceros en A,
    familia de colas y punto base o (índice del portador de W = R × C).

    ζ₁ tiene ceros {0, 1} y la misma constante de Lipschitz GH(X, Y).
    """
    base: StraightGeodesic
    C: FiniteMetricSpace
    zeta2: LipschitzZeroSet
    tail: TailSpec
    o: int = 0
    zeta1: LipschitzZeroSet = field(init=False)
    W: ProductExpandedGeodesic = field(init=False, repr=False)

    def __post_init__(self):
        if diameter(self.C) > 2.0:
            raise InvalidParameter("C", diameter(self.C), "el factor debe tener diámetro ≤ 2")
        if not 0 <= self.o < self.base.carrier_size * self.C.n:
            raise InvalidParameter("o", self.o, "punto base fuera de W")
        budget = 2.0 * self.base.L
        tail_diameter = 0.5
        if self.zeta2.L * tail_diameter > budget * (1.0 + _BUDGET_RTOL):
            raise LipschitzBudgetExceeded(self.zeta2.L, tail_diameter, budget)
        self.zeta1 = LipschitzZeroSet((0.0, 1.0), self.base.L)
        self.W = ProductExpandedGeodesic(self.base, self.C, self.zeta1)

    @property
    def A(self) -> Tuple[float, ...]:
        return self.zeta2.A


DEFAULT_FACTOR_DEPTH = 3


def build_branch_spec(
    X: FiniteMetricSpace,
    Y: FiniteMetricSpace,
    A: Sequence[float],
    factor: Optional[FiniteMetricSpace] = None,
    J: int = 1,
    tail: str = "point",
    o: int = 0,
    depth: int = 2,
) -> BranchSpec:
    """
    Resuelve GH(X, Y) exacta, toma su testigo como R y fija ζ₁, ζ₂ con
    constante de Lipschitz GH(X, Y). Factor por defecto: cantor_beta(1/2, 3).
    """
    base = StraightGeodesic.from_endpoints(X, Y)
    C = factor if factor is not None else cantor_beta(0.5, DEFAULT_FACTOR_DEPTH)
    if tail == "point":
        parts = one_point_parts(J)
    elif tail == "cantor":
        parts = cantor_parts(J, depth)
    else:
        raise InvalidParameter("tail", tail, "se esperaba 'point' o 'cantor'")
    spec = BranchSpec(
        base=base,
        C=C,
        zeta2=LipschitzZeroSet(tuple(A), base.L),
        tail=TailSpec(parts, CubePoint((0.0,) * J)),
        o=o,
    )
    logger.info(f"Haz con GH={base.L:.6g}, |R|={len(base.R)}, |C|={C.n}, J={J}, A={spec.A}")
    return spec


def tailed_raw(spec: BranchSpec, s: float, q: CubePoint) -> PseudoMetricSpace:
    """
    (Z_q, H_{s,q}) para s ∈ (0, 1): W×{∞} ∪ {o}×U_q con H = E_s ×∞ ζ₂(s)·e_q.
    En s ∈ A es sólo pseudométrico y su cociente es (W, E_s).
    """
    if not 0.0 < s < 1.0:
        raise InvalidParameter("s", s, "la cola sólo se define en (0, 1)")
    W, wmap = spec.W.embed(s)
    U = u_space(spec.tail.with_q(q))
    z2 = spec.zeta2(s)
    o = int(wmap[spec.o])
    nW, nU = W.n, U.n

    H = np.zeros((nW + nU - 1, nW + nU - 1))
    H[:nW, :nW] = W.dist
    H[nW:, nW:] = z2 * U.dist[1:, 1:]
    cross = np.maximum(W.dist[:, o][:, None], z2 * U.dist[0, 1:][None, :])
    H[:nW, nW:] = cross
    H[nW:, :nW] = cross.T

    labels = [f"({w},inf)" for w in W.labels] + [f"(o,{u})" for u in U.labels[1:]]
    return validate_pseudo(H, labels)


class BunchSlice(GeodesicFamily):
    """
    F(·, q) para un q fijo.

    Portador: W (índices r·|C| + a) seguido de los puntos de U_q salvo ∞.
    En s ∈ A los puntos de la cola van al punto base; fuera de A a (o, u).
    """

    name = "bunch"

    def __init__(self, spec: BranchSpec, q: CubePoint):
        self.spec = spec
        self.q = q.padded(spec.tail.J)
        self.tail_size = u_space(spec.tail.with_q(self.q)).n - 1
        super().__init__(spec.base.L, spec.W.carrier_size + self.tail_size)

    def _embed(self, s):
        if s in (0.0, 1.0) or self.spec.zeta2.contains(s):
            space, wmap = self.spec.W.embed(s)
            tail = np.full(self.tail_size, wmap[self.spec.o])
            return space, np.concatenate([wmap, tail])

        W, wmap = self.spec.W.embed(s)
        raw = tailed_raw(self.spec, s, self.q)
        carrier = np.concatenate([wmap, W.n + np.arange(self.tail_size)])
        return quotient_map_compose(raw, carrier)


def tailed_point(spec: BranchSpec, s: float, q: CubePoint) -> FiniteMetricSpace:
    """F(s, q)"""
    return BunchSlice(spec, q).point(s)


def q_continuity_bound(spec: BranchSpec, s: float, q: CubePoint, r: CubePoint) -> Tuple[float, float]:
    """
    (dis/2 de la correspondencia portador a portador entre F(s,q) y F(s,r),
     ζ₂(s)·módulo(q, r)/2). El primero nunca supera al segundo.
    """
    left, right = BunchSlice(spec, q), BunchSlice(spec, r)
    P, lmap = left.embed(s)
    Q, rmap = right.embed(s)
    R = Correspondence(frozenset(zip(lmap.tolist(), rmap.tolist())), P.n, Q.n)
    J = spec.tail.J
    modulus = u_space_modulus(q.padded(J), r.padded(J), J)
    return distortion(R, P, Q) / 2.0, spec.zeta2(s) * modulus / 2.0


# =============================================================================
# VERIFICACIÓN
# =============================================================================

@dataclass
class GeodesicReport:
    """Filas (s, t, upper, lower, bound) y resumen de la verificación"""
    family: str
    L: float
    rows: List[Dict] = field(default_factory=list)
    max_excess: float = 0.0
    passed: bool = True

    def to_dict(self) -> Dict:
        return {
            "family": self.family,
            "L": self.L,
            "max_excess": self.max_excess,
            "passed": self.passed,
            "rows": self.rows,
        }


def verify_geodesic(
    family: GeodesicFamily,
    grid: Sequence[float],
    L: Optional[float] = None,
    tol: float = 1e-9,
) -> GeodesicReport:
    """
    Para cada par s < t de la rejilla: upper = dis(correspondencia)/2 debe
    cumplir upper ≤ |s−t|·L + tol. La cota inferior L − upper(0,s) −
    upper(t,1) vale cuando L es la GH exacta de los extremos.

    Raises:
        GeodesicViolation: en el primer par que falla (el informe va adjunto)
    """
    L = family.L if L is None else float(L)
    points = sorted({float(s) for s in grid})
    if points[0] != 0.0 or points[-1] != 1.0:
        raise InvalidParameter("grid", grid, "la rejilla debe incluir 0 y 1")

    upper: Dict[Tuple[float, float], float] = {}
    for i, s in enumerate(points):
        for t in points[i + 1:]:
            R = family.correspondence(s, t)
            upper[(s, t)] = distortion(R, family.point(s), family.point(t)) / 2.0

    report = GeodesicReport(family.name, L)
    first_violation = None
    for (s, t), value in upper.items():
        bound = (t - s) * L
        head = upper[(0.0, s)] if s > 0.0 else 0.0
        tail = upper[(t, 1.0)] if t < 1.0 else 0.0
        lower = max(0.0, L - head - tail)
        excess = value - bound
        report.rows.append({"s": s, "t": t, "upper": value, "lower": lower, "bound": bound})
        report.max_excess = max(report.max_excess, excess)
        if excess > tol and first_violation is None:
            first_violation = (s, t, excess)

    if first_violation is not None:
        report.passed = False
        logger.warning(f"Geodésica '{family.name}' violada en {first_violation[:2]}")
        raise GeodesicViolation(*first_violation, report=report)
    logger.info(f"Geodésica '{family.name}' verificada en {len(report.rows)} pares")
    return report


class Verdict(Enum):
    ISOMETRIC = "isometric"
    NON_ISOMETRIC = "non_isometric"
    INCONCLUSIVE = "inconclusive"


def _fingerprint(X: PseudoMetricSpace) -> np.ndarray:
    return np.sort(X.dist[np.triu_indices(X.n, 1)])


def bunch_distinctness(
    spec: BranchSpec,
    samples: Sequence[Tuple[float, CubePoint]],
    tol: float = 1e-9,
) -> List[Dict]:
    """
    Para cada par de muestras (s, q), (t, r) decide:
        - s ≠ t: cota inferior por geodésica > 0 => no isométricos
        - huellas (multiconjunto de distancias) distintas => no isométricos
        - oráculo de isometría si caben (≤ 10 puntos)
        - en otro caso "inconclusive", nunca un falso negativo
    """
    slices = {}

    def slice_for(q: CubePoint) -> BunchSlice:
        key = q.padded(spec.tail.J).coords
        if key not in slices:
            slices[key] = BunchSlice(spec, q)
        return slices[key]

    L = spec.base.L
    limit = get_settings().isometry_max_points
    rows = []
    for i, (s, q) in enumerate(samples):
        for t, r in samples[i + 1:]:
            P, Q = slice_for(q).point(s), slice_for(r).point(t)
            verdict, method = Verdict.INCONCLUSIVE, "none"

            if s != t:
                (a, qa), (b, qb) = sorted(((s, q), (t, r)), key=lambda item: item[0])
                fam = slice_for(qa)
                head = distortion(fam.correspondence(0.0, a), fam.point(0.0), fam.point(a)) / 2.0
                fam = slice_for(qb)
                tail = distortion(fam.correspondence(b, 1.0), fam.point(b), fam.point(1.0)) / 2.0
                if L - head - tail > tol:
                    verdict, method = Verdict.NON_ISOMETRIC, "geodesic"

            if verdict is Verdict.INCONCLUSIVE:
                fp, fq = _fingerprint(P), _fingerprint(Q)
                if len(fp) != len(fq) or not np.allclose(fp, fq, rtol=0.0, atol=tol):
                    verdict, method = Verdict.NON_ISOMETRIC, "fingerprint"
                elif P.n <= limit:
                    found = isometry_oracle(P, Q)
                    verdict = Verdict.ISOMETRIC if found is not None else Verdict.NON_ISOMETRIC
                    method = "oracle"

            if verdict is Verdict.INCONCLUSIVE:
                logger.warning(f"Par inconcluso: (s={s}, q={q.coords}) vs (t={t}, r={r.coords})")
            rows.append({
                "s": s,
                "q": list(q.coords),
                "t": t,
                "r": list(r.coords),
                "verdict": verdict.value,
                "method": method,
            })
    return rows
