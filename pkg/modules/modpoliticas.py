"""
Módulo de Políticas para PilaLPR
Simulación de referencia (una capacidad por corrida) de LRU, MRU, FIFO, KL,
LPR y el óptimo fuera de línea de Belady, más la tasa de fallos de KL en forma cerrada
"""

import heapq
import logging
from collections import deque
from typing import List, Dict, Optional, Tuple, Sequence, Iterable

import numpy as np

from .errores import ErrorParametros, ErrorCapacidad, ErrorTraza
from .moddist import StackDistribution, LruStack, Trace, lru_update
from .modsegmentos import Segmentation, _tasa_kl

logger = logging.getLogger(__name__)


class SimResult:
    """Resultado de una simulación: fallos, accesos y registro opcional de desalojos"""

    def __init__(self, misses: int, accesses: int, politica: str, capacidad: int,
                 desalojos: Optional[List[Tuple[int, int]]] = None):
        self.misses = misses
        self.accesses = accesses
        self.politica = politica
        self.capacidad = capacidad
        self.desalojos = desalojos

    @property
    def miss_rate(self) -> float:
        return self.misses / self.accesses if self.accesses else 0.0

    def to_row(self) -> List:
        return [self.capacidad, self.politica, self.accesses, self.misses, repr(self.miss_rate)]

    def to_dict(self) -> Dict:
        return {
            'capacity': self.capacidad,
            'policy': self.politica,
            'accesses': self.accesses,
            'misses': self.misses,
            'miss_rate': self.miss_rate
        }


# ============ POLÍTICAS ============

class Politica:
    """Regla de desalojo: recibe el simulador tras la rotación de la pila"""

    nombre = 'base'
    usa_orden_carga = False

    def validar(self, C: int, V: int) -> None:
        """Verifica los parámetros de la política para la capacidad C"""

    def elegir_victima(self, sim: 'BufferSimulator') -> int:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.nombre


class PoliticaLRU(Politica):
    nombre = 'lru'

    def elegir_victima(self, sim):
        return sim.item_en(max(sim.profundidades_residentes()))


class PoliticaMRU(Politica):
    nombre = 'mru'

    def elegir_victima(self, sim):
        return sim.item_en(min(sim.profundidades_residentes()))


class PoliticaFIFO(Politica):
    nombre = 'fifo'
    usa_orden_carga = True

    def elegir_victima(self, sim):
        return sim.orden_carga[0]


class PoliticaKL(Politica):
    """Desaloja Λ(L+1) si está en el buffer, si no Λ(K+1), y si no el LRU"""

    def __init__(self, K: int, L: int):
        self.K = K
        self.L = L
        self.nombre = f'kl:{K}:{L}'

    def validar(self, C, V):
        if not 1 <= self.K < C <= self.L <= V:
            raise ErrorParametros(f"Parámetros KL inválidos: K={self.K}, L={self.L}, C={C}, V={V}")

    def elegir_victima(self, sim):
        profundidades = sim.profundidades_residentes()
        for d in (self.L + 1, self.K + 1):
            if d in profundidades:
                return sim.item_en(d)
        return sim.item_en(max(profundidades))


class PoliticaLPR(Politica):
    """Desaloja el residente de menor tasa de ganancia"""

    nombre = 'lpr'

    def __init__(self, seg: Segmentation):
        self.seg = seg

    def elegir_victima(self, sim):
        return sim.item_en(lpr_evict_choice(self.seg, sim.profundidades_residentes()))


class PoliticaOPT(Politica):
    """Marcador del óptimo fuera de línea (se simula con simulate_belady)"""

    nombre = 'opt'


def parse_policy(texto: str, seg: Optional[Segmentation] = None) -> Politica:
    """Interpreta 'lru', 'mru', 'fifo', 'lpr', 'opt' o 'kl:K:L'"""
    texto = texto.strip().lower()
    simples = {'lru': PoliticaLRU, 'mru': PoliticaMRU, 'fifo': PoliticaFIFO, 'opt': PoliticaOPT}
    if texto in simples:
        return simples[texto]()
    if texto == 'lpr':
        if seg is None:
            raise ErrorParametros("La política lpr requiere una distribución")
        return PoliticaLPR(seg)
    partes = texto.split(':')
    if len(partes) == 3 and partes[0] == 'kl':
        try:
            return PoliticaKL(int(partes[1]), int(partes[2]))
        except ValueError:
            pass
    raise ErrorParametros(f"Política desconocida: {texto}")


def lpr_evict_choice(seg: Segmentation, depths: Iterable[int]) -> int:
    """
    Profundidad a desalojar según LPR

    Mínimo ξ entre los residentes fuera del tope; empate hacia el tope.
    Las profundidades mayores que V tienen probabilidad nula y cuentan con ξ = 0.
    """
    candidatos = [d for d in depths if d > 1]
    if not candidatos:
        raise ErrorParametros("No hay candidatos a desalojo")

    def clave(d):
        return (float(seg.xi[d]) if d <= seg.V else 0.0, d)

    return min(candidatos, key=clave)


def kl_miss_rate(dist: StackDistribution, K: int, L: int, C: int) -> float:
    """M = 1 − [S(K)(L−C) + S(L)(C−K)]/(L−K); con L=C se reduce a 1 − S(C)"""
    if not 1 <= K < C <= L <= dist.V:
        raise ErrorParametros(f"Parámetros KL inválidos: K={K}, L={L}, C={C}, V={dist.V}")
    return _tasa_kl(dist, K, L, C)


# ============ SIMULADOR ============

class BufferState:
    """Contenido del buffer de capacidad C"""

    def __init__(self, capacidad: int):
        self.capacidad = capacidad
        self.residentes = set()

    @property
    def lleno(self) -> bool:
        return len(self.residentes) >= self.capacidad


class BufferSimulator:
    """
    Simulador de un buffer de capacidad fija con arranque en frío

    Sin pila inicial, la pila LRU crece a medida que aparecen ítems nuevos.
    """

    def __init__(self, politica: Politica, C: int, initial_stack: Optional[LruStack] = None,
                 registrar: bool = False):
        if C < 1:
            raise ErrorCapacidad(f"Capacidad inválida: {C}")
        self.politica = politica
        self.estado = BufferState(C)
        self.pila = initial_stack.copy() if initial_stack is not None else LruStack([])
        self.pila_fija = initial_stack is not None
        self.orden_carga = deque()
        self.misses = 0
        self.accesses = 0
        self.desalojos = [] if registrar else None

    @property
    def residentes(self) -> set:
        return self.estado.residentes

    def item_en(self, d: int) -> int:
        return self.pila.items[d - 1]

    def profundidades_residentes(self) -> List[int]:
        return [self.pila.inversa[r] + 1 for r in self.estado.residentes]

    def procesar(self, item: int) -> bool:
        """Procesa un acceso; devuelve True si fue acierto"""
        if item in self.pila.inversa:
            lru_update(self.pila, item)
        elif self.pila_fija:
            raise ErrorTraza(f"Ítem desconocido: {item}")
        else:
            self.pila.push(item)

        acierto = item in self.estado.residentes
        if not acierto:
            self.misses += 1
            if self.estado.lleno:
                victima = self.politica.elegir_victima(self)
                self.estado.residentes.remove(victima)
                if self.politica.usa_orden_carga:
                    self.orden_carga.popleft()
                if self.desalojos is not None:
                    self.desalojos.append((self.accesses, victima))
            self.estado.residentes.add(item)
            if self.politica.usa_orden_carga:
                self.orden_carga.append(item)
        self.accesses += 1
        return acierto

    def resultado(self) -> SimResult:
        return SimResult(self.misses, self.accesses, self.politica.nombre,
                         self.estado.capacidad, self.desalojos)


def simulate(policy: Politica, trace: Trace, C: int, initial_stack: Optional[LruStack] = None,
             registrar: bool = False) -> SimResult:
    """Simula la política sobre la traza con un buffer inicialmente vacío"""
    if isinstance(policy, PoliticaOPT):
        return simulate_belady(trace, C)
    V = len(initial_stack) if initial_stack is not None else max(trace.V, C)
    policy.validar(C, V)
    sim = BufferSimulator(policy, C, initial_stack, registrar)
    for item in trace:
        sim.procesar(item)
    logger.debug("Simulación %s con C=%d: %d fallos en %d accesos",
                 policy.nombre, C, sim.misses, sim.accesses)
    return sim.resultado()


def simulate_belady(trace: Trace, C: int) -> SimResult:
    """
    Óptimo fuera de línea: desaloja el ítem de uso siguiente más lejano

    Los ítems que no vuelven a usarse se desalojan primero, por id creciente.
    """
    if C < 1:
        raise ErrorCapacidad(f"Capacidad inválida: {C}")
    accesos = [int(x) for x in trace]
    N = len(accesos)
    universo = (max(accesos) + 1) if accesos else 0

    # próximo uso por una pasada hacia atrás
    proximo = [0] * N
    ultimo = {}
    for t in range(N - 1, -1, -1):
        x = accesos[t]
        proximo[t] = ultimo.get(x, N + universo - x)
        ultimo[x] = t

    residentes = {}
    monticulo = []
    misses = 0
    for t, x in enumerate(accesos):
        if x not in residentes:
            misses += 1
            if len(residentes) >= C:
                while True:
                    clave, victima = heapq.heappop(monticulo)
                    if residentes.get(victima) == -clave:
                        break
                del residentes[victima]
        residentes[x] = proximo[t]
        heapq.heappush(monticulo, (-proximo[t], x))
    return SimResult(misses, N, 'opt', C)
