"""
Módulo de Asignación para PilaLPR
Generadores característicos de un ítem, problema escalarizado de ocupación
contra fallos, barrido de puntos eficientes soportados, asignación codiciosa
de la capacidad entre ítems y partición de un buffer entre procesos
"""

import math
import logging
from typing import List, Dict, Optional, Tuple, Sequence, Union

import numpy as np

import configuracion
from .errores import ErrorCapacidad, ErrorParametros, ErrorDistribucion
from .moddist import StackDistribution
from .modsegmentos import segmentation
from .modcontrol import FiniteMdp, relative_value_iteration

logger = logging.getLogger(__name__)

# extremos del barrido angular
ANGULO_MINIMO = 1e-7
ANGULO_MAXIMO = math.pi / 2 - 1e-7
TOLERANCIA_BARRIDO = 1e-12
TOLERANCIA_DESALOJO = 1e-9


class CharacteristicGenerator:
    """
    Cadena de Markov del estado de un ítem y su indicador de referencia

    `P[z, z']` es la probabilidad de pasar de z a z'; `r[z] = True` cuando
    estar en z significa que el ítem acaba de ser referenciado.
    """

    def __init__(self, P: Sequence[Sequence[float]], r: Sequence[bool]):
        self.P = np.array(P, dtype=np.float64)
        self.r = np.array(r, dtype=bool)
        n = self.r.size
        if self.P.shape != (n, n):
            raise ErrorParametros(f"Matriz de transición de forma {self.P.shape} para {n} estados")
        if np.any(self.P < 0) or not np.allclose(self.P.sum(axis=1), 1.0,
                                                 atol=configuracion.TOLERANCIA_SUMA):
            raise ErrorDistribucion("Las filas de la matriz de transición deben sumar 1")
        if not self.r.any():
            raise ErrorParametros("El generador no tiene estados de referencia")

    @property
    def n(self) -> int:
        return int(self.r.size)

    @property
    def estado_acierto(self) -> int:
        """z* del estado de acierto x* = (z*, en buffer)"""
        return int(np.flatnonzero(self.r)[0])

    def to_dict(self) -> Dict:
        return {'P': self.P.tolist(), 'r': [bool(x) for x in self.r]}


def lrusm_cg(dist: StackDistribution) -> CharacteristicGenerator:
    """Posición del ítem en la pila: P[i→1] = s(i), P[i→i] = S(i−1), P[i→i+1] = 1 − S(i)"""
    V = dist.V
    P = np.zeros((V, V))
    for i in range(1, V + 1):
        P[i - 1, 0] += dist.prob(i)
        if i > 1:
            P[i - 1, i - 1] += dist.S(i - 1)
        if i < V:
            P[i - 1, i] += 1.0 - dist.S(i)
    r = np.zeros(V, dtype=bool)
    r[0] = True
    return CharacteristicGenerator(P, r)


# ============ POLÍTICAS DE UN ÍTEM ============

class Rmop:
    """Mezcla aleatoria de dos políticas, sorteada cada vez que se deja x*"""

    def __init__(self, politica_a: np.ndarray, politica_b: np.ndarray, gamma: float):
        if not 0.0 <= gamma <= 1.0:
            raise ErrorParametros(f"Peso de mezcla fuera de [0, 1]: {gamma}")
        self.politica_a = politica_a
        self.politica_b = politica_b
        self.gamma = gamma


def _mdp_item(cg: CharacteristicGenerator, theta: float) -> FiniteMdp:
    """MDP (z, β) con perturbación z'; el índice del estado es 2z + β"""
    n = cg.n
    estados = [(z, b) for z in range(n) for b in (0, 1)]
    probabilidades = np.repeat(cg.P, 2, axis=0)
    costos = np.zeros((2 * n, n))
    opciones = []
    for z, b in estados:
        fila = []
        for z2 in range(n):
            costos[2 * z + b, z2] = math.cos(theta) * b + math.sin(theta) * (cg.r[z2] and not b)
            if cg.r[z2]:
                fila.append([(2 * z2 + 1, 0)])
            elif b:
                fila.append([(2 * z2 + 1, 0), (2 * z2, 1)])
            else:
                fila.append([(2 * z2, 0)])
        opciones.append(fila)
    return FiniteMdp(estados, probabilidades, costos, opciones, range(n))


def _matriz_politica(cg: CharacteristicGenerator, desalojo: np.ndarray) -> np.ndarray:
    """Transiciones sobre los estados 2z + β bajo una política estacionaria"""
    n = cg.n
    T = np.zeros((2 * n, 2 * n))
    for z in range(n):
        for z2 in range(n):
            p = cg.P[z, z2]
            if p == 0.0:
                continue
            if cg.r[z2]:
                T[2 * z, 2 * z2 + 1] += p
                T[2 * z + 1, 2 * z2 + 1] += p
            else:
                T[2 * z, 2 * z2] += p
                T[2 * z + 1, 2 * z2 + int(not desalojo[z, z2])] += p
    return T


def evaluate_item_policy(cg: CharacteristicGenerator, desalojo: np.ndarray) -> Tuple[float, float]:
    """(J_oc, J_ms) exactos de la política por su distribución estacionaria"""
    T = _matriz_politica(cg, desalojo)
    m = T.shape[0]
    A = np.vstack([T.T - np.eye(m), np.ones(m)])
    b = np.zeros(m + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    J_oc = float(pi[1::2].sum())
    prob_referencia = cg.P @ cg.r.astype(np.float64)
    J_ms = float(pi[0::2] @ prob_referencia)
    return J_oc, J_ms


def scalarized_solve(cg: CharacteristicGenerator, theta: float) -> Tuple[np.ndarray, float, float]:
    """
    Resuelve el problema con costo cos(θ)·ocupación + sin(θ)·fallos

    Devuelve la matriz desalojo[z, z'] de la política óptima (con empate se
    conserva el ítem) y sus costos evaluados por separado.
    """
    if not 0.0 <= theta <= math.pi / 2:
        raise ErrorParametros(f"Ángulo fuera de [0, π/2]: {theta}")
    mdp = _mdp_item(cg, theta)
    ref = 2 * cg.estado_acierto + 1
    _, h = relative_value_iteration(mdp, tol=TOLERANCIA_BARRIDO, ref=ref)
    desalojo = np.zeros((cg.n, cg.n), dtype=bool)
    for z in range(cg.n):
        for z2 in range(cg.n):
            if not cg.r[z2]:
                desalojo[z, z2] = h[2 * z2] < h[2 * z2 + 1] - TOLERANCIA_DESALOJO
    J_oc, J_ms = evaluate_item_policy(cg, desalojo)
    logger.debug("θ=%.6f: J_oc=%.6f, J_ms=%.6f", theta, J_oc, J_ms)
    return desalojo, J_oc, J_ms


def simulate_item(cg: CharacteristicGenerator, politica: Union[np.ndarray, Rmop], n: int,
                  rng: np.random.Generator) -> Tuple[float, float]:
    """Costos empíricos (J_oc, J_ms) de n pasos desde el estado de acierto"""
    if n <= 0:
        raise ErrorParametros(f"Cantidad de pasos inválida: {n}")
    acumuladas = np.cumsum(cg.P, axis=1)
    uniformes = rng.random(n)
    mezcla = isinstance(politica, Rmop)
    z, b = cg.estado_acierto, 1
    activa = politica
    if mezcla:
        activa = politica.politica_a if rng.random() < politica.gamma else politica.politica_b
    ocupacion = 0
    fallos = 0
    for u in uniformes:
        ocupacion += b
        z2 = min(int(np.searchsorted(acumuladas[z], u, side='right')), cg.n - 1)
        if cg.r[z2]:
            fallos += 1 - b
            b2 = 1
        elif b and activa[z, z2]:
            b2 = 0
        else:
            b2 = b
        if mezcla and (z, b) == (cg.estado_acierto, 1) and (z2, b2) != (z, b):
            activa = politica.politica_a if rng.random() < politica.gamma else politica.politica_b
        z, b = z2, b2
    return ocupacion / n, fallos / n


# ============ PUNTOS EFICIENTES ============

class SepPoint:
    """Punto eficiente soportado (η = J_oc, ζ = J_ms) y la política que lo realiza"""

    def __init__(self, eta: float, zeta: float, politica: Optional[np.ndarray] = None):
        self.eta = eta
        self.zeta = zeta
        self.politica = politica

    def to_dict(self) -> Dict:
        return {'eta': self.eta, 'zeta': self.zeta}

    def __repr__(self) -> str:
        return f"SepPoint(eta={self.eta!r}, zeta={self.zeta!r})"


class SepList:
    """Lista de puntos con η creciente, ζ decreciente y ganancias marginales decrecientes"""

    def __init__(self, puntos: Sequence[SepPoint]):
        self.puntos = list(puntos)
        if not self.puntos:
            raise ErrorParametros("La lista de puntos eficientes está vacía")

    @staticmethod
    def from_pairs(pares: Sequence[Tuple[float, float]]) -> 'SepList':
        lista = SepList([SepPoint(float(e), float(z)) for e, z in pares])
        if not lista.is_convex():
            raise ErrorParametros(f"Los puntos no forman una frontera convexa: {list(pares)}")
        return lista

    def __len__(self) -> int:
        return len(self.puntos)

    def __getitem__(self, i: int) -> SepPoint:
        return self.puntos[i]

    @property
    def etas(self) -> List[float]:
        return [p.eta for p in self.puntos]

    @property
    def zetas(self) -> List[float]:
        return [p.zeta for p in self.puntos]

    def marginal_gain(self, i: int) -> float:
        """Ganancia de pasar del punto i al i+1: −Δζ/Δη"""
        a, b = self.puntos[i], self.puntos[i + 1]
        return (a.zeta - b.zeta) / (b.eta - a.eta)

    def gains(self) -> List[float]:
        return [self.marginal_gain(i) for i in range(len(self) - 1)]

    def is_convex(self) -> bool:
        pares = list(zip(self.puntos, self.puntos[1:]))
        if any(b.eta <= a.eta or b.zeta >= a.zeta for a, b in pares):
            return False
        ganancias = self.gains()
        return all(g1 > g2 for g1, g2 in zip(ganancias, ganancias[1:]))

    def scaled(self, factor: float) -> 'SepList':
        """Misma frontera con ζ multiplicado por el factor"""
        return SepList([SepPoint(p.eta, factor * p.zeta, p.politica) for p in self.puntos])

    def to_dict(self) -> Dict:
        return {'points': [p.to_dict() for p in self.puntos]}


def _debajo_de_cuerda(a: SepPoint, b: SepPoint, c: SepPoint, theta: float) -> bool:
    valor = lambda p: math.cos(theta) * p.eta + math.sin(theta) * p.zeta
    return valor(c) < valor(a) - TOLERANCIA_BARRIDO * max(1.0, abs(valor(a)))


def sep_sweep(cg: CharacteristicGenerator, epsilon: float = 1e-9) -> SepList:
    """
    Barrido angular recursivo de la frontera soportada

    Resuelve en los dos extremos y luego en el ángulo normal a cada cuerda,
    agregando el punto sólo si queda estrictamente por debajo. Se detiene
    con el criterio (1+ε) o al llegar a 4·|Z| resoluciones.
    """
    if epsilon <= 0:
        raise ErrorParametros(f"Tolerancia inválida: {epsilon}")
    limite = 4 * cg.n
    resoluciones = 0

    def resolver(theta):
        nonlocal resoluciones
        resoluciones += 1
        politica, eta, zeta = scalarized_solve(cg, theta)
        return SepPoint(eta, zeta, politica)

    a = resolver(ANGULO_MINIMO)
    b = resolver(ANGULO_MAXIMO)
    if b.eta - a.eta <= TOLERANCIA_BARRIDO or a.zeta - b.zeta <= TOLERANCIA_BARRIDO:
        return SepList([a])
    puntos = [a, b]

    def refinar(a, b):
        if resoluciones >= limite:
            return
        theta = math.atan2(b.eta - a.eta, a.zeta - b.zeta)
        c = resolver(theta)
        if not _debajo_de_cuerda(a, b, c, theta):
            return
        cuerda = math.cos(theta) * a.eta + math.sin(theta) * a.zeta
        puntos.append(c)
        if math.cos(theta) * c.eta + math.sin(theta) * c.zeta >= cuerda / (1.0 + epsilon):
            return
        refinar(a, c)
        refinar(c, b)

    refinar(a, b)
    puntos.sort(key=lambda p: p.eta)
    logger.debug("Barrido con %d resoluciones: %d puntos", resoluciones, len(puntos))
    return SepList(puntos)


# ============ ASIGNACIÓN CODICIOSA ============

class Allocation:
    """
    Punto elegido por ítem y a lo sumo una mezcla

    `mezcla` es (ítem, γ): el ítem usa su punto elegido con probabilidad γ y
    el siguiente con probabilidad 1 − γ.
    """

    def __init__(self, listas: List[SepList], elecciones: List[int],
                 mezcla: Optional[Tuple[int, float]] = None):
        self.listas = listas
        self.elecciones = elecciones
        self.mezcla = mezcla

    def costos_item(self, w: int) -> Tuple[float, float]:
        lista, i = self.listas[w], self.elecciones[w]
        if self.mezcla is not None and self.mezcla[0] == w:
            gamma = self.mezcla[1]
            a, b = lista[i], lista[i + 1]
            return (gamma * a.eta + (1 - gamma) * b.eta,
                    gamma * a.zeta + (1 - gamma) * b.zeta)
        return lista[i].eta, lista[i].zeta

    @property
    def total_ocupacion(self) -> float:
        return sum(self.costos_item(w)[0] for w in range(len(self.listas)))

    @property
    def total_fallos(self) -> float:
        return sum(self.costos_item(w)[1] for w in range(len(self.listas)))

    def to_dict(self) -> Dict:
        items = []
        for w in range(len(self.listas)):
            eta, zeta = self.costos_item(w)
            entrada = {'item': w, 'sep_index': self.elecciones[w], 'eta': eta, 'zeta': zeta}
            if self.mezcla is not None and self.mezcla[0] == w:
                entrada['gamma'] = self.mezcla[1]
            items.append(entrada)
        return {'items': items, 'C': self.total_ocupacion, 'M': self.total_fallos}


def greedy_allocate(listas: Sequence[SepList], C: float) -> Allocation:
    """
    Avanza siempre el ítem de mayor ganancia marginal hasta agotar la capacidad

    Parte de B = Σ η¹; los empates favorecen el ítem de menor índice. El último
    paso parcial se realiza como mezcla con γ tal que la ocupación total sea C.
    """
    listas = list(listas)
    if not listas:
        raise ErrorParametros("No hay ítems para asignar")
    elecciones = [0] * len(listas)
    B = sum(lista[0].eta for lista in listas)
    if C < B - configuracion.TOLERANCIA_SUMA:
        raise ErrorCapacidad(f"Capacidad {C} menor que la ocupación mínima {B}")

    while B < C:
        mejor = None
        for w, lista in enumerate(listas):
            i = elecciones[w]
            if i + 1 < len(lista):
                ganancia = lista.marginal_gain(i)
                if mejor is None or ganancia > mejor[1]:
                    mejor = (w, ganancia)
        if mejor is None:
            break
        w = mejor[0]
        lista, i = listas[w], elecciones[w]
        paso = lista[i + 1].eta - lista[i].eta
        if B + paso <= C + configuracion.TOLERANCIA_SUMA:
            elecciones[w] = i + 1
            B += paso
            continue
        resto = B - lista[i].eta
        gamma = (lista[i + 1].eta - (C - resto)) / paso
        if 0.0 < gamma < 1.0:
            logger.debug("Mezcla en el ítem %d con γ=%.6f", w, gamma)
            return Allocation(listas, elecciones, (w, gamma))
        break
    return Allocation(listas, elecciones)


# ============ PARTICIÓN DEL BUFFER ============

class Partition:
    """Capacidad asignada a cada proceso y la asignación subyacente"""

    def __init__(self, capacidades: List[float], asignacion: Allocation, pesos: List[float]):
        self.capacidades = capacidades
        self.asignacion = asignacion
        self.pesos = pesos

    def to_dict(self) -> Dict:
        datos = self.asignacion.to_dict()
        datos['weights'] = self.pesos
        datos['capacities'] = self.capacidades
        return datos


def dist_frontier(dist: StackDistribution) -> SepList:
    """Frontera agregada de un proceso: (q_j, 1 − S(q_j)) para los puntos de segmentación"""
    seg = segmentation(dist)
    return SepList([SepPoint(float(q), 1.0 - dist.S(q)) for q in seg.q])


Fuente = Union[StackDistribution, Sequence[Union[SepList, CharacteristicGenerator]]]


def partition_buffer(procesos: Sequence[Tuple[Fuente, float]], C: float) -> Partition:
    """
    Reparte la capacidad C entre procesos con pesos π_i

    Cada proceso es una distribución (frontera agregada) o una lista por ítem
    de fronteras o generadores característicos (estos se barren con
    `sep_sweep`); los fallos de sus ítems se escalan por π_i.
    """
    pesos = [float(p) for _, p in procesos]
    if not pesos or any(p <= 0 for p in pesos) or abs(sum(pesos) - 1.0) > configuracion.TOLERANCIA_SUMA:
        raise ErrorParametros(f"Los pesos deben ser positivos y sumar 1: {pesos}")

    listas = []
    duenos = []
    for k, (fuente, peso) in enumerate(procesos):
        if isinstance(fuente, StackDistribution):
            propias = [dist_frontier(fuente)]
        else:
            propias = [sep_sweep(f) if isinstance(f, CharacteristicGenerator) else f for f in fuente]
        for lista in propias:
            listas.append(lista.scaled(peso))
            duenos.append(k)

    asignacion = greedy_allocate(listas, C)
    capacidades = [0.0] * len(procesos)
    for w, k in enumerate(duenos):
        capacidades[k] += asignacion.costos_item(w)[0]
    logger.debug("Partición de C=%s: %s", C, capacidades)
    return Partition(capacidades, asignacion, pesos)
