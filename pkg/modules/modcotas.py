"""
Módulo de Cotas para PilaLPR
Cota inferior del óptimo fuera de línea, transformación cuasi uniforme,
cota superior del cociente competitivo estocástico y su medición empírica
"""

import math
import logging
from typing import Dict, Optional, Tuple

import numpy as np

import configuracion
from .errores import ErrorCapacidad, ErrorParametros
from .moddist import StackDistribution, LruStack, build_distribution, generate_trace, make_rng
from .modsegmentos import segmentation, kl_for_capacity, _tasa_kl
from .modpoliticas import PoliticaLPR, simulate, simulate_belady

logger = logging.getLogger(__name__)


def l_opt_term(dist: StackDistribution, C: int, G: int) -> float:
    """Término G de la cota: G / Σ_{j=0}^{C+G−1} 1/(1 − S(j)), nulo si algún S(j) = 1"""
    if not 1 <= G <= dist.V - C:
        raise ErrorParametros(f"G={G} fuera de [1, {dist.V - C}]")
    restos = [1.0 - dist.S(j) for j in range(C + G)]
    if min(restos) <= 0:
        return 0.0
    return G / sum(1.0 / r for r in restos)


def l_opt(dist: StackDistribution, C: int) -> Tuple[int, float]:
    """
    Máximo sobre G ∈ [1, V−C] de G / Σ_{j=0}^{C+G−1} 1/(1 − S(j))

    Los G cuyo rango incluye algún S(j) = 1 dan cota nula y se omiten.
    Devuelve (G, cota); (0, 0.0) si ningún G es utilizable.
    """
    V = dist.V
    if not 1 <= C < V:
        raise ErrorCapacidad(f"Capacidad {C} fuera de [1, {V - 1}]")
    mejor_G, mejor = 0, 0.0
    suma = 0.0
    for j in range(C):
        resto = 1.0 - dist.S(j)
        suma += 1.0 / resto if resto > 0 else math.inf
    for G in range(1, V - C + 1):
        resto = 1.0 - dist.S(C + G - 1)
        if resto <= 0:
            break
        suma += 1.0 / resto
        cota = G / suma
        if cota > mejor:
            mejor_G, mejor = G, cota
    return mejor_G, mejor


class QuasiUniform:
    """
    Distribución [σ, η, …, η, η′] de largo W con la misma tasa LPR que la original

    Con cola, W = L + D + 1; sin cola la distribución termina en L y η′ = η.
    """

    def __init__(self, sigma: float, eta: float, eta_prima: float, D: int, K: int, L: int,
                 W: Optional[int] = None):
        self.sigma = sigma
        self.eta = eta
        self.eta_prima = eta_prima
        self.D = D
        self.K = K
        self.L = L
        self.W = L + D + 1 if W is None else W
        self.dist = build_distribution([sigma] + [eta] * (self.W - 2) + [eta_prima])

    def to_dict(self) -> Dict:
        return {
            'sigma': self.sigma, 'eta': self.eta, 'eta_prima': self.eta_prima,
            'D': self.D, 'W': self.W, 's': [float(x) for x in self.dist.s]
        }


def quasi_uniform_transform(dist: StackDistribution, C: int) -> QuasiUniform:
    """
    Aplana [K+1, L] a η = s̄(K+1, L), concentra [1, K] en la primera posición
    y reparte 1 − S(L) en D posiciones de masa η más un resto η′ ∈ (0, η]
    """
    if not 2 <= C <= dist.V:
        raise ErrorCapacidad(f"Capacidad {C} fuera de [2, {dist.V}]")
    K, L = kl_for_capacity(segmentation(dist), C)
    eta = dist.media(K + 1, L)
    sigma = dist.S(K) - (K - 1) * eta
    cola = 1.0 - dist.S(L)
    if cola <= configuracion.TOLERANCIA_CASCO:
        # sin cola: la ventana termina en L y el resto se suma a σ
        logger.debug("Transformación cuasi uniforme sin cola: K=%d, L=%d", K, L)
        return QuasiUniform(sigma + cola, eta, eta, 0, K, L, W=L)
    D = max(math.ceil(cola / eta - configuracion.TOLERANCIA_CASCO) - 1, 0)
    eta_prima = cola - D * eta
    if eta_prima <= 0 and D > 0:
        D -= 1
        eta_prima += eta
    logger.debug("Transformación cuasi uniforme: K=%d, L=%d, D=%d", K, L, D)
    return QuasiUniform(sigma, eta, eta_prima, D, K, L)


def lpr_miss_rate(dist: StackDistribution, C: int) -> float:
    """Tasa de fallos de LPR con capacidad C (la de KL(K(C), L(C)))"""
    if C >= dist.V:
        return 0.0
    K, L = kl_for_capacity(segmentation(dist), C)
    return _tasa_kl(dist, K, L, C)


class ChiBound:
    """Cota χ̃ y formas de comparación"""

    def __init__(self, C: int, chi_tilde: float, directa: float, W: int,
                 forma_ln_C: Optional[float], forma_ln_M: Optional[float], razon_lru: float):
        self.C = C
        self.chi_tilde = chi_tilde
        self.directa = directa
        self.W = W
        self.forma_ln_C = forma_ln_C
        self.forma_ln_M = forma_ln_M
        self.razon_lru = razon_lru

    def to_dict(self) -> Dict:
        return {
            'chi_tilde': self.chi_tilde,
            'direct_ratio': self.directa,
            'W': self.W,
            'ln_C_form': self.forma_ln_C,
            'ln_inv_M_form': self.forma_ln_M,
            'lru_ratio': self.razon_lru
        }


def chi_upper_bound(dist: StackDistribution, C: int) -> ChiBound:
    """
    χ̃ = [η′+(W−1−C)η]/(W−C) · [2 + (2/η)·ln(((W−2)η+η′)/(((W−2−C)/2)η+η′))]
    sobre la transformada cuasi uniforme; si W − C ≤ 2 devuelve M^LPR/L^OPT
    """
    qu = quasi_uniform_transform(dist, C)
    M = lpr_miss_rate(dist, C)
    _, cota = l_opt(dist, C)
    directa = M / cota if cota > 0 else math.inf
    razon_lru = (1.0 - dist.S(C)) / cota if cota > 0 else math.inf
    W, eta, eta_prima = qu.W, qu.eta, qu.eta_prima
    forma_ln_M = math.log(1.0 / M) if M > 0 else None

    if W - C <= 2:
        return ChiBound(C, directa, directa, W, None, forma_ln_M, razon_lru)

    numerador = (W - 2) * eta + eta_prima
    denominador = ((W - 2 - C) / 2.0) * eta + eta_prima
    chi = ((eta_prima + (W - 1 - C) * eta) / (W - C)
           * (2.0 + (2.0 / eta) * math.log(numerador / denominador)))
    forma_ln_C = 2.0 * math.log(2.0 * (W - 1) / (W - 2 - C))
    return ChiBound(C, chi, directa, W, forma_ln_C, forma_ln_M, razon_lru)


def empirical_chi(dist: StackDistribution, C: int, N: int,
                  seed: int = configuracion.SEMILLA_POR_DEFECTO) -> Tuple[float, int, int]:
    """Cociente fallos LPR / fallos Belady sobre una traza generada; devuelve (χ, fallos LPR, fallos OPT)"""
    if N <= 0:
        raise ErrorParametros(f"Cantidad de accesos inválida: {N}")
    pila = LruStack.identity(dist.V)
    traza = generate_trace(dist, pila, N, make_rng(seed))
    lpr = simulate(PoliticaLPR(segmentation(dist)), traza, C, initial_stack=pila)
    opt = simulate_belady(traza, C)
    return lpr.misses / opt.misses, lpr.misses, opt.misses


def bound_report(dist: StackDistribution, C: int, N: int = 0,
                 seed: int = configuracion.SEMILLA_POR_DEFECTO) -> Dict:
    """Reporte de cotas para la capacidad C; la parte empírica sólo con N > 0"""
    G, cota = l_opt(dist, C)
    chi = chi_upper_bound(dist, C)
    reporte = {
        'C': C,
        'L_opt': cota,
        'best_G': G,
        'M_lpr': lpr_miss_rate(dist, C),
        'chi_tilde': chi.chi_tilde,
        'empirical_chi': None
    }
    reporte.update({k: v for k, v in chi.to_dict().items() if k != 'chi_tilde'})
    if N > 0:
        razon, fallos_lpr, fallos_opt = empirical_chi(dist, C, N, seed)
        reporte['empirical_chi'] = razon
        reporte['empirical_M_opt'] = fallos_opt / N
        reporte['empirical_M_lpr'] = fallos_lpr / N
    return reporte
