"""
Módulo de Segmentación para PilaLPR
Calcula los puntos eficientes soportados q₁..q_l, las tasas de ganancia ξ
y los parámetros K(C), L(C) óptimos para todas las capacidades en tiempo lineal
"""

import bisect
import logging
from typing import List, Dict, Optional, Tuple

import numpy as np

import configuracion
from .errores import ErrorCapacidad
from .moddist import StackDistribution

logger = logging.getLogger(__name__)


class KLParams:
    """Parámetros de una política KL para la capacidad C"""

    def __init__(self, K: int, L: int, C: int):
        self.K = K
        self.L = L
        self.C = C

    def to_dict(self) -> Dict:
        return {'C': self.C, 'K': self.K, 'L': self.L}

    def __iter__(self):
        return iter((self.K, self.L))

    def __eq__(self, otro) -> bool:
        return isinstance(otro, KLParams) and (self.K, self.L, self.C) == (otro.K, otro.L, otro.C)

    def __repr__(self) -> str:
        return f"KLParams(K={self.K}, L={self.L}, C={self.C})"


class Segmentation:
    """
    Segmentación de las profundidades en segmentos Q_i = [q_i + 1, q_{i+1}]

    `xi[j]` es la tasa de ganancia de la profundidad j (constante en cada
    segmento, igual al promedio del segmento); `segment_of[j]` es el índice
    (desde 0) del segmento de j. Las posiciones 0 y 1 no pertenecen a ningún
    segmento. No depende de la capacidad.
    """

    def __init__(self, q: List[int], xi: np.ndarray, tasas_literales: np.ndarray):
        self.q = tuple(int(x) for x in q)
        self.V = self.q[-1]
        self.xi = xi
        self.tasas_literales = tasas_literales
        self.segment_of = np.full(self.V + 1, -1, dtype=np.int64)
        for i in range(len(self.q) - 1):
            self.segment_of[self.q[i] + 1:self.q[i + 1] + 1] = i
        for arreglo in (self.xi, self.tasas_literales, self.segment_of):
            arreglo.setflags(write=False)

    @property
    def num_segments(self) -> int:
        return len(self.q) - 1

    def bounds(self, i: int) -> Tuple[int, int]:
        """Primera y última profundidad del segmento i"""
        return self.q[i] + 1, self.q[i + 1]

    def lengths(self) -> List[int]:
        return [self.q[i + 1] - self.q[i] for i in range(self.num_segments)]

    def to_dict(self) -> Dict:
        return {
            'q': list(self.q),
            'xi': [float(x) for x in self.xi[2:]],
        }


def _tasa_kl(dist: StackDistribution, K: int, L: int, C: int) -> float:
    """Tasa de fallos de KL en forma cerrada (sin validar)"""
    if L == C:
        return 1.0 - dist.S(C)
    return 1.0 - (dist.S(K) * (L - C) + dist.S(L) * (C - K)) / (L - K)


def _no_mayor(a: float, b: float, tolerancia: float) -> bool:
    """a ≤ b salvo error de redondeo relativo"""
    return a <= b + tolerancia * max(abs(a), abs(b))


def _recorrido_graham(dist: StackDistribution) -> Tuple[List[int], List[float], List[int]]:
    """Recorrido hacia atrás con fusión de segmentos; devuelve ν, π y Δ indexados desde 1"""
    V = dist.V
    s = [0.0] + [float(x) for x in dist.s]
    nu = [0] * (V + 2)
    pi = [0.0] * (V + 2)
    delta = [0] * (V + 2)
    nu[1], pi[1], delta[1] = 1, s[1], 1
    nu[V + 1], pi[V + 1], delta[V + 1] = V + 1, 0.0, 1
    tolerancia = configuracion.TOLERANCIA_CASCO
    for j in range(V, 1, -1):
        nu[j], pi[j], delta[j] = j, s[j], 1
        n = nu[j] + 1
        # π[j]/Δ[j] ≤ π[n]/Δ[n] por productos cruzados, con tolerancia relativa
        while n <= V and _no_mayor(pi[j] * delta[n], pi[n] * delta[j], tolerancia):
            nu[j] = nu[n]
            pi[j] += pi[n]
            delta[j] += delta[n]
            n = nu[j] + 1
    return nu, pi, delta


def segmentation(dist: StackDistribution) -> Segmentation:
    """Segmentación en tiempo lineal (especialización del recorrido de Graham)"""
    V = dist.V
    nu, pi, delta = _recorrido_graham(dist)

    q = [nu[1]]
    j = 2
    while j <= V:
        q.append(nu[j])
        j = nu[j] + 1

    literales = np.full(V + 1, np.nan)
    xi = np.full(V + 1, np.nan)
    for j in range(2, V + 1):
        literales[j] = pi[j] / delta[j]
    for i in range(len(q) - 1):
        cabeza = q[i] + 1
        xi[cabeza:q[i + 1] + 1] = pi[cabeza] / delta[cabeza]

    logger.debug("Segmentación con V=%d: %d segmentos", V, len(q) - 1)
    return Segmentation(q, xi, literales)


def profit_rates(dist: StackDistribution) -> List[float]:
    """Valores π[j]/Δ[j] para j = 2..V tal como los deja el recorrido"""
    _, pi, delta = _recorrido_graham(dist)
    return [pi[j] / delta[j] for j in range(2, dist.V + 1)]


def kl_for_capacity(seg: Segmentation, C: int) -> KLParams:
    """K(C) = q_i < C ≤ q_{i+1} = L(C); para C=1 devuelve K=L=1"""
    if C == 1:
        return KLParams(1, 1, 1)
    if not 2 <= C <= seg.V:
        raise ErrorCapacidad(f"Capacidad {C} fuera de [1, {seg.V}]")
    indice = bisect.bisect_left(seg.q, C)
    return KLParams(seg.q[indice - 1], seg.q[indice], C)


def brute_force_kl(dist: StackDistribution, C: int,
                   seg: Optional[Segmentation] = None) -> Tuple[int, int, float]:
    """Minimiza la tasa KL en forma cerrada sobre todos los pares (K, L) admisibles"""
    if not 2 <= C <= dist.V:
        raise ErrorCapacidad(f"Capacidad {C} fuera de [2, {dist.V}]")
    mejor = None
    for K in range(1, C):
        for L in range(C, dist.V + 1):
            tasa = _tasa_kl(dist, K, L, C)
            if mejor is None or tasa < mejor[2]:
                mejor = (K, L, tasa)
    seg = seg or segmentation(dist)
    K, L = kl_for_capacity(seg, C)
    tasa = _tasa_kl(dist, K, L, C)
    if tasa <= mejor[2] + configuracion.TOLERANCIA_CASCO:
        return K, L, tasa
    return mejor


def ev_costs(dist: StackDistribution, k: int) -> Tuple[float, float]:
    """Costos (ocupación, fallos) de la política ev_k: desalojar al pasar de la profundidad k"""
    if not 1 <= k <= dist.V:
        raise ErrorCapacidad(f"Umbral {k} fuera de [1, {dist.V}]")
    return k / dist.V, (1.0 - dist.S(k)) / dist.V


def sep_hull_oracle(dist: StackDistribution) -> List[int]:
    """Vértices de la envolvente inferior de los puntos ev_k por recorrido O(V²)"""
    V = dist.V
    tolerancia = configuracion.TOLERANCIA_CASCO
    vertices = [1]
    a = 1
    while a < V:
        medias = [dist.media(a + 1, b) for b in range(a + 1, V + 1)]
        maxima = max(medias)
        # con empates se toma el punto más lejano
        siguiente = max(b for b, m in zip(range(a + 1, V + 1), medias) if m >= maxima - tolerancia)
        vertices.append(siguiente)
        a = siguiente
    return vertices
