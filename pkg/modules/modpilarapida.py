"""
Módulo de Pila Rápida para PilaLPR
Distancias de pila LPR para todas las capacidades a la vez en O(log V) por acceso,
con un oráculo directo O(V) por acceso para verificación
"""

import logging
from typing import List, Dict, Optional, Tuple, Iterable

import numpy as np

from .errores import ErrorTraza
from .moddist import LruStack, Trace, lru_update
from .modsegmentos import Segmentation

logger = logging.getLogger(__name__)


# ============ DISTANCIA LRU EN O(log V) ============

class ArbolFenwick:
    """Árbol de Fenwick sobre enteros: suma de prefijos y actualización puntual"""

    def __init__(self, valores: Iterable[int]):
        self._v = [0] + [int(x) for x in valores]
        n = len(self._v)
        for i in range(1, n):
            padre = i + (i & -i)
            if padre < n:
                self._v[padre] += self._v[i]

    def __len__(self) -> int:
        return len(self._v) - 1

    def add(self, i: int, delta: int) -> None:
        """Suma delta a la posición i (desde 0)"""
        i += 1
        n = len(self._v)
        while i < n:
            self._v[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        """Suma de las posiciones 0..i"""
        i += 1
        total = 0
        while i > 0:
            total += self._v[i]
            i -= i & -i
        return total


class DistanciaLRU:
    """
    Profundidad LRU por marcas de último acceso sobre un eje de tiempo

    Cada ítem visto ocupa la ranura de su último acceso; la profundidad es
    1 + ranuras marcadas posteriores. El eje se compacta al llenarse.
    """

    def __init__(self, capacidad: int = 2, initial_stack: Optional[LruStack] = None):
        self.ultimo = {}
        items = initial_stack.items if initial_stack is not None else []
        k = len(items)
        self.capacidad = max(2 * k, capacidad, 2)
        for j, item in enumerate(items):
            self.ultimo[item] = k - 1 - j
        self.reloj = k
        self.arbol = ArbolFenwick([1] * k + [0] * (self.capacidad - k))

    def __len__(self) -> int:
        return len(self.ultimo)

    def _compactar(self) -> None:
        orden = sorted(self.ultimo, key=self.ultimo.get)
        k = len(orden)
        self.capacidad = max(self.capacidad, 2 * (k + 1))
        for nueva, item in enumerate(orden):
            self.ultimo[item] = nueva
        self.reloj = k
        self.arbol = ArbolFenwick([1] * k + [0] * (self.capacidad - k))

    def access(self, item: int) -> Tuple[int, bool]:
        """Registra el acceso; devuelve (profundidad previa, acceso en frío)"""
        ranura = self.ultimo.pop(item, None)
        if ranura is None:
            d, frio = len(self.ultimo) + 1, True
        else:
            d = 1 + (len(self.ultimo) + 1) - self.arbol.prefix(ranura)
            self.arbol.add(ranura, -1)
            frio = False
        if self.reloj == self.capacidad:
            self._compactar()
        self.arbol.add(self.reloj, 1)
        self.ultimo[item] = self.reloj
        self.reloj += 1
        return d, frio


# ============ SECUENCIA IMPLÍCITA (TREAP) ============

class _Nodo:
    __slots__ = ('valor', 'prioridad', 'tamano', 'izq', 'der')

    def __init__(self, valor: int, prioridad: float):
        self.valor = valor
        self.prioridad = prioridad
        self.tamano = 1
        self.izq = None
        self.der = None


def _tam(nodo: Optional[_Nodo]) -> int:
    return nodo.tamano if nodo is not None else 0


def _actualizar(nodo: _Nodo) -> _Nodo:
    nodo.tamano = 1 + _tam(nodo.izq) + _tam(nodo.der)
    return nodo


def _dividir(nodo: Optional[_Nodo], k: int) -> Tuple[Optional[_Nodo], Optional[_Nodo]]:
    """Separa los primeros k elementos"""
    if nodo is None:
        return None, None
    tam_izq = _tam(nodo.izq)
    if k <= tam_izq:
        a, b = _dividir(nodo.izq, k)
        nodo.izq = b
        return a, _actualizar(nodo)
    a, b = _dividir(nodo.der, k - tam_izq - 1)
    nodo.der = a
    return _actualizar(nodo), b


def _unir(a: Optional[_Nodo], b: Optional[_Nodo]) -> Optional[_Nodo]:
    if a is None:
        return b
    if b is None:
        return a
    if a.prioridad > b.prioridad:
        a.der = _unir(a.der, b)
        return _actualizar(a)
    b.izq = _unir(a, b.izq)
    return _actualizar(b)


class SecuenciaImplicita:
    """Secuencia con acceso por rango y corrimientos cíclicos en O(log n) esperado"""

    def __init__(self, valores: List[int], rng: np.random.Generator):
        prioridades = rng.random(len(valores))
        nodos = [_Nodo(v, float(p)) for v, p in zip(valores, prioridades)]
        # árbol cartesiano en O(n)
        pila = []
        for nodo in nodos:
            anterior = None
            while pila and pila[-1].prioridad < nodo.prioridad:
                anterior = pila.pop()
            nodo.izq = anterior
            if pila:
                pila[-1].der = nodo
            pila.append(nodo)
        self.raiz = pila[0] if pila else None
        for nodo in self._postorden():
            _actualizar(nodo)

    def _postorden(self) -> List[_Nodo]:
        salida, pendientes = [], [self.raiz] if self.raiz is not None else []
        while pendientes:
            nodo = pendientes.pop()
            salida.append(nodo)
            for hijo in (nodo.izq, nodo.der):
                if hijo is not None:
                    pendientes.append(hijo)
        return salida[::-1]

    def __len__(self) -> int:
        return _tam(self.raiz)

    def get(self, i: int) -> int:
        """Elemento en la posición i (desde 0)"""
        nodo = self.raiz
        while True:
            tam_izq = _tam(nodo.izq)
            if i < tam_izq:
                nodo = nodo.izq
            elif i == tam_izq:
                return nodo.valor
            else:
                i -= tam_izq + 1
                nodo = nodo.der

    def rotate_right(self, r: int) -> None:
        """Rotación cíclica a la derecha de toda la secuencia en r posiciones"""
        n = len(self)
        r %= n if n else 1
        if r:
            a, b = _dividir(self.raiz, n - r)
            self.raiz = _unir(b, a)

    def shift_prefix(self, p: int) -> None:
        """Corrimiento cíclico unitario a la derecha del prefijo de largo p"""
        if p <= 1:
            return
        prefijo, resto = _dividir(self.raiz, p)
        cuerpo, ultimo = _dividir(prefijo, p - 1)
        self.raiz = _unir(_unir(ultimo, cuerpo), resto)

    def to_list(self) -> List[int]:
        salida, pendientes, nodo = [], [], self.raiz
        while pendientes or nodo is not None:
            while nodo is not None:
                pendientes.append(nodo)
                nodo = nodo.izq
            nodo = pendientes.pop()
            salida.append(nodo.valor)
            nodo = nodo.der
        return salida


# ============ ÁRBOL AUXILIAR DE CONTADORES ============

class ArbolContadores:
    """
    Árbol estático balanceado sobre los segmentos

    Cada nodo guarda un contador de rotaciones pendientes y el borde derecho
    máximo de sus segmentos descendientes (campo de búsqueda).
    """

    def __init__(self, seg: Segmentation):
        self.izq: List[int] = []
        self.der: List[int] = []
        self.contador: List[int] = []
        self.busqueda: List[int] = []
        self.hoja: List[int] = []
        self.raiz = self._construir(seg.q, 0, seg.num_segments - 1) if seg.num_segments else -1

    def _construir(self, q, lo: int, hi: int) -> int:
        nodo = len(self.contador)
        self.izq.append(-1)
        self.der.append(-1)
        self.contador.append(0)
        self.busqueda.append(q[hi + 1])
        self.hoja.append(lo if lo == hi else -1)
        if lo != hi:
            medio = (lo + hi) // 2
            self.izq[nodo] = self._construir(q, lo, medio)
            self.der[nodo] = self._construir(q, medio + 1, hi)
        return nodo

    def descend(self, d: int) -> Tuple[int, int]:
        """
        Baja hasta el segmento que contiene d

        Registra una rotación en cada hijo izquierdo fuera del camino, acumula
        los contadores del camino y los anula en la hoja. Devuelve
        (segmento, rotaciones pendientes del segmento).
        """
        nodo = self.raiz
        acumulado = 0
        while self.hoja[nodo] < 0:
            acumulado += self.contador[nodo]
            izquierdo = self.izq[nodo]
            if d <= self.busqueda[izquierdo]:
                nodo = izquierdo
            else:
                self.contador[izquierdo] += 1
                nodo = self.der[nodo]
        acumulado += self.contador[nodo]
        self.contador[nodo] -= acumulado
        return self.hoja[nodo], acumulado


# ============ SIMULADOR LPR ============

class LprSimulator:
    """
    Distancias de pila LPR en O(log V) por acceso

    ρ(j) es la profundidad LPR del ítem en la profundidad LRU j; restringido
    al segmento i se guarda en R_i como desplazamientos desde q_i.
    """

    def __init__(self, seg: Segmentation, initial_stack: Optional[LruStack] = None, seed: int = 0):
        self.seg = seg
        self.V = seg.V
        if initial_stack is not None and sorted(initial_stack.items) != list(range(self.V)):
            raise ErrorTraza(f"La pila inicial debe ser una permutación de [0, {self.V})")
        self.lru = DistanciaLRU(2 * self.V, initial_stack)
        rng = np.random.Generator(np.random.PCG64(seed))
        self.secuencias = [SecuenciaImplicita(list(range(1, m + 1)), rng) for m in seg.lengths()]
        self.arbol = ArbolContadores(seg)

    def step(self, item: int) -> int:
        """Procesa un acceso y devuelve su profundidad LPR (V+1 si es en frío)"""
        if not 0 <= item < self.V:
            raise ErrorTraza(f"Ítem desconocido: {item}")
        d, frio = self.lru.access(item)
        if d == 1:
            return self.V + 1 if frio else 1
        a, pendientes = self.arbol.descend(d)
        R = self.secuencias[a]
        base = self.seg.q[a]
        if pendientes:
            R.rotate_right(pendientes % len(R))
        p = d - base
        rho = base + R.get(p - 1)
        R.shift_prefix(p)
        return self.V + 1 if frio else rho

    def rho(self) -> List[int]:
        """Materializa ρ(1..V) sin alterar el estado (índice 0 sin uso)"""
        valores = [0, 1]
        nodo_hojas = self._pendientes_por_segmento()
        for i, R in enumerate(self.secuencias):
            actual = R.to_list()
            r = nodo_hojas[i] % len(actual)
            if r:
                actual = actual[-r:] + actual[:-r]
            valores.extend(self.seg.q[i] + x for x in actual)
        return valores[:self.V + 1]

    def _pendientes_por_segmento(self) -> List[int]:
        pendientes = [0] * self.seg.num_segments
        if self.arbol.raiz < 0:
            return pendientes
        porvisitar = [(self.arbol.raiz, 0)]
        while porvisitar:
            nodo, suma = porvisitar.pop()
            suma += self.arbol.contador[nodo]
            if self.arbol.hoja[nodo] >= 0:
                pendientes[self.arbol.hoja[nodo]] = suma
            else:
                porvisitar.append((self.arbol.izq[nodo], suma))
                porvisitar.append((self.arbol.der[nodo], suma))
        return pendientes


def new_simulator(seg: Segmentation, initial_stack: Optional[LruStack] = None,
                  seed: int = 0) -> LprSimulator:
    """Estructuras iniciales: R_i identidad y contadores en cero"""
    return LprSimulator(seg, initial_stack, seed)


def step(sim: LprSimulator, item: int) -> int:
    return sim.step(item)


# ============ ORÁCULO DIRECTO ============

class OraculoIngenuo:
    """ρ como arreglo plano con la actualización por casos en O(V)"""

    def __init__(self, seg: Segmentation, initial_stack: Optional[LruStack] = None):
        self.seg = seg
        self.V = seg.V
        self.pila = initial_stack.copy() if initial_stack is not None else LruStack([])
        self.pila_fija = initial_stack is not None
        self.rho = list(range(self.V + 1))

    def step(self, item: int) -> int:
        if not 0 <= item < self.V:
            raise ErrorTraza(f"Ítem desconocido: {item}")
        frio = item not in self.pila.inversa
        if frio:
            if self.pila_fija:
                raise ErrorTraza(f"Ítem desconocido: {item}")
            self.pila.push(item)
            d = len(self.pila)
        else:
            d = lru_update(self.pila, item)
        salida = self.rho[d]
        if d > 1:
            viejo = list(self.rho)
            for i in range(self.seg.num_segments):
                lo, hi = self.seg.bounds(i)
                if lo > d:
                    break
                # segmento completo por encima del acceso, o tramo [lo, d] del segmento accedido
                m = min(hi, d) - lo + 1
                for h in range(m):
                    # el % de Python es no negativo: h=0 toma el último del tramo
                    self.rho[lo + h] = viejo[lo + (h - 1) % m]
        return self.V + 1 if frio else salida


def naive_oracle_step(oracle_state: OraculoIngenuo, access: int) -> int:
    return oracle_state.step(access)


# ============ CURVA DE FALLOS ============

class MissCurve:
    """Fallos por capacidad C ∈ [1, V] a partir del histograma de profundidades LPR"""

    def __init__(self, histograma: np.ndarray, V: int):
        self.V = V
        self.histograma = histograma
        self.accesses = int(histograma.sum())
        # fallos[C] = #{profundidad > C}
        self.fallos = self.accesses - np.cumsum(histograma)
        self.fallos.setflags(write=False)

    @staticmethod
    def from_depths(profundidades: Iterable[int], V: int) -> 'MissCurve':
        arreglo = np.asarray(list(profundidades), dtype=np.int64)
        return MissCurve(np.bincount(arreglo, minlength=V + 2)[:V + 2], V)

    def misses(self, C: int) -> int:
        return int(self.fallos[C])

    def miss_rate(self, C: int) -> float:
        return self.misses(C) / self.accesses if self.accesses else 0.0

    def rows(self) -> List[List]:
        return [[C, self.misses(C), repr(self.miss_rate(C))] for C in range(1, self.V + 1)]

    def to_dict(self) -> Dict:
        return {
            'V': self.V,
            'accesses': self.accesses,
            'misses': [self.misses(C) for C in range(1, self.V + 1)],
            'depth_histogram': {str(d): int(n) for d, n in enumerate(self.histograma) if n}
        }


def miss_curve(seg: Segmentation, trace: Trace, initial_stack: Optional[LruStack] = None,
               sim: Optional[LprSimulator] = None) -> MissCurve:
    """Curva de fallos LPR para todas las capacidades en una pasada"""
    sim = sim or new_simulator(seg, initial_stack)
    profundidades = [sim.step(item) for item in trace]
    logger.debug("Curva de fallos sobre %d accesos con V=%d", len(profundidades), seg.V)
    return MissCurve.from_depths(profundidades, seg.V)
