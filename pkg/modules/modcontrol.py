"""
Módulo de Control Óptimo para PilaLPR
Programación dinámica de horizonte finito con controles que conocen la
perturbación, iteración de valores relativa para costo promedio, la solución
cerrada de Bellman para C=2 y el contraejemplo de políticas no de pila
"""

import itertools
import logging
from typing import List, Dict, Optional, Tuple, Callable, Sequence

import numpy as np

import configuracion
from .errores import ErrorEspacioEstados, ErrorCapacidad, ErrorConvergencia, ErrorDistribucion, ErrorParametros
from .moddist import StackDistribution, build_distribution

logger = logging.getLogger(__name__)

# Distribución del contraejemplo (en dieciseisavos)
DISTRIBUCION_CONTRAEJEMPLO = [1 / 16, 3 / 16, 3 / 16, 0.0, 4 / 16, 0.0, 0.0, 5 / 16]
HORIZONTE_CONTRAEJEMPLO = 5


class FiniteMdp:
    """
    MDP finito con perturbación observada antes de decidir

    Para cada (estado, perturbación) hay una lista de opciones admisibles;
    los arreglos se rellenan repitiendo la primera opción hasta `u_max`.
    `acciones` etiqueta cada opción (en el MDP de ocupación, la profundidad
    desalojada tras la rotación, 0 si no hay desalojo).
    """

    def __init__(self, estados: List, probabilidades: np.ndarray, costos: np.ndarray,
                 opciones: List[List[List[Tuple[int, int]]]], disturbios: Sequence[int]):
        self.estados = list(estados)
        self.indice = {x: i for i, x in enumerate(self.estados)}
        self.probabilidades = probabilidades
        self.costos = costos
        self.disturbios = list(disturbios)
        n, nd = costos.shape
        u_max = max(len(o) for fila in opciones for o in fila)
        self.siguientes = np.empty((n, nd, u_max), dtype=np.int64)
        self.acciones = np.empty((n, nd, u_max), dtype=np.int64)
        self.num_opciones = np.empty((n, nd), dtype=np.int64)
        for i, fila in enumerate(opciones):
            for k, lista in enumerate(fila):
                relleno = lista + [lista[0]] * (u_max - len(lista))
                self.siguientes[i, k] = [sig for sig, _ in relleno]
                self.acciones[i, k] = [u for _, u in relleno]
                self.num_opciones[i, k] = len(lista)
        filas = probabilidades.sum(axis=1)
        if not np.allclose(filas, 1.0, atol=configuracion.TOLERANCIA_SUMA):
            raise ErrorDistribucion("Las probabilidades de perturbación no suman 1")

    @property
    def n(self) -> int:
        return len(self.estados)

    # ============ ACCESO A LA DINÁMICA ============

    def g(self, x, d) -> float:
        """Costo instantáneo"""
        return float(self.costos[self.indice[x], self.disturbios.index(d)])

    def U(self, x, d) -> List[int]:
        """Controles admisibles"""
        i, k = self.indice[x], self.disturbios.index(d)
        return [int(u) for u in self.acciones[i, k, :self.num_opciones[i, k]]]

    def f(self, x, d, u):
        """Estado siguiente para un control admisible"""
        i, k = self.indice[x], self.disturbios.index(d)
        for sig, accion in zip(self.siguientes[i, k, :self.num_opciones[i, k]],
                               self.acciones[i, k, :self.num_opciones[i, k]]):
            if accion == u:
                return self.estados[sig]
        raise ErrorCapacidad(f"Control {u} no admisible en {x} con perturbación {d}")

    # ============ OPERADORES ============

    def continuation(self, h: np.ndarray) -> np.ndarray:
        """Costo g + h(f) por opción, forma (n, nd, u_max)"""
        return self.costos[:, :, None] + h[self.siguientes]

    def bellman(self, h: np.ndarray) -> np.ndarray:
        """(T h)(x) = E_w[min_u {g + h(f)}], mínimo dentro de la esperanza"""
        return (self.probabilidades * self.continuation(h).min(axis=2)).sum(axis=1)

    def evaluate(self, h: np.ndarray, seleccion: np.ndarray) -> np.ndarray:
        """Operador de una regla fija: seleccion[x, w] es el índice de opción"""
        filas = np.arange(self.n)[:, None]
        cols = np.arange(len(self.disturbios))[None, :]
        siguientes = self.siguientes[filas, cols, seleccion]
        return (self.probabilidades * (self.costos + h[siguientes])).sum(axis=1)


class OccupancyMdp(FiniteMdp):
    """MDP de ocupación: x(j)=1 cuando el ítem en la profundidad LRU j está en el buffer"""

    def __init__(self, dist: StackDistribution, C: int, estados, probabilidades, costos,
                 opciones, solo_estado):
        super().__init__(estados, probabilidades, costos, opciones, range(1, dist.V + 1))
        self.dist = dist
        self.C = C
        self.V = dist.V
        P = max(len(o) for o in solo_estado)
        self.siguientes_estado = np.empty((self.n, self.V, P), dtype=np.int64)
        for i, lista in enumerate(solo_estado):
            relleno = lista + [lista[0]] * (P - len(lista))
            for p, fila in enumerate(relleno):
                self.siguientes_estado[i, :, p] = fila


def _rotar(x: Tuple[int, ...], d: int) -> List[int]:
    """Rotación R_d del prefijo de largo d del vector de ocupación"""
    y = list(x)
    y[:d] = [x[d - 1]] + list(x[:d - 1])
    return y


def build_mdp(dist: StackDistribution, C: int, solo_llenos: bool = False) -> OccupancyMdp:
    """
    MDP de ocupación con estados de a lo sumo C unos (exactamente C con solo_llenos)

    En un acierto sólo se admite no desalojar; en un fallo con buffer lleno el
    control recorre las profundidades residentes (≥ 2) del estado rotado.
    """
    V = dist.V
    if V > configuracion.MAX_V_MDP:
        raise ErrorEspacioEstados(f"V={V} excede el límite de {configuracion.MAX_V_MDP} para el MDP")
    if not 1 <= C <= V:
        raise ErrorCapacidad(f"Capacidad {C} fuera de [1, {V}]")

    tamanos = [C] if solo_llenos else range(C + 1)
    estados = []
    for c in tamanos:
        for unos in itertools.combinations(range(V), c):
            x = [0] * V
            for j in unos:
                x[j] = 1
            estados.append(tuple(x))
    indice = {x: i for i, x in enumerate(estados)}

    costos = np.zeros((len(estados), V))
    opciones = []
    solo_estado = []
    for i, x in enumerate(estados):
        lleno = sum(x) == C
        fila = []
        for d in range(1, V + 1):
            y = _rotar(x, d)
            if x[d - 1]:
                fila.append([(indice[tuple(y)], 0)])
                continue
            costos[i, d - 1] = 1.0
            y[0] = 1
            if not lleno:
                fila.append([(indice[tuple(y)], 0)])
                continue
            lista = []
            for j in range(2, V + 1):
                if y[j - 1]:
                    z = list(y)
                    z[j - 1] = 0
                    lista.append((indice[tuple(z)], j))
            fila.append(lista)
        opciones.append(fila)

        # desalojo elegido antes de ver la perturbación: el ítem en la posición p
        residentes = [p for p in range(1, V + 1) if x[p - 1]] if lleno else []
        alternativas = []
        for p in residentes or [0]:
            destinos = []
            for d in range(1, V + 1):
                y = _rotar(x, d)
                if not x[d - 1] and lleno:
                    y[0] = 1
                    y[(p + 1 if p < d else p) - 1] = 0
                elif not x[d - 1]:
                    y[0] = 1
                destinos.append(indice[tuple(y)])
            alternativas.append(destinos)
        solo_estado.append(alternativas)

    probabilidades = np.tile(dist.s, (len(estados), 1))
    logger.debug("MDP de ocupación con V=%d, C=%d: %d estados", V, C, len(estados))
    return OccupancyMdp(dist, C, estados, probabilidades, costos, opciones, solo_estado)


def occupancy_state(V: int, profundidades: Sequence[int]) -> Tuple[int, ...]:
    """Vector de ocupación con unos en las profundidades dadas"""
    x = [0] * V
    for j in profundidades:
        x[j - 1] = 1
    return tuple(x)


# ============ HORIZONTE FINITO ============

class HorizonTable:
    """Costos óptimos J*_τ(x) para τ = 0..T y conjuntos de acciones óptimas"""

    def __init__(self, mdp: FiniteMdp, J: np.ndarray):
        self.mdp = mdp
        self.J = J

    @property
    def horizon(self) -> int:
        return self.J.shape[0] - 1

    def cost(self, x, tau: Optional[int] = None) -> float:
        tau = self.horizon if tau is None else tau
        return float(self.J[tau, self.mdp.indice[x]])

    def optimal_actions(self, x, tau: int, d, tolerancia: Optional[float] = None) -> List[int]:
        """Controles que minimizan g + J*_{τ−1}(f) en (x, τ, d); los empates se devuelven todos"""
        tolerancia = configuracion.TOLERANCIA_ACCIONES if tolerancia is None else tolerancia
        i, k = self.mdp.indice[x], self.mdp.disturbios.index(d)
        m = self.mdp.num_opciones[i, k]
        valores = self.J[tau - 1][self.mdp.siguientes[i, k, :m]]
        minimo = valores.min()
        return sorted(int(u) for u, v in zip(self.mdp.acciones[i, k, :m], valores)
                      if v <= minimo + tolerancia)

    def to_dict(self) -> Dict:
        return {
            'horizon': self.horizon,
            'states': [''.join(str(b) for b in x) if isinstance(x, tuple) else x
                       for x in self.mdp.estados],
            'J': [[float(v) for v in fila] for fila in self.J]
        }


def dp_optimal(mdp: FiniteMdp, tau: int) -> HorizonTable:
    """Inducción hacia atrás: J*_τ = T J*_{τ−1}, J*_0 = 0"""
    if tau < 0:
        raise ErrorCapacidad(f"Horizonte inválido: {tau}")
    J = np.zeros((tau + 1, mdp.n))
    for k in range(1, tau + 1):
        J[k] = mdp.bellman(J[k - 1])
    return HorizonTable(mdp, J)


def dp_state_only(mdp: OccupancyMdp, tau: int) -> np.ndarray:
    """Horizonte finito con el ítem a desalojar elegido antes de conocer la perturbación"""
    J = np.zeros(mdp.n)
    for _ in range(tau):
        valores = mdp.costos[:, :, None] + J[mdp.siguientes_estado]
        J = (mdp.probabilidades[:, :, None] * valores).sum(axis=1).min(axis=1)
    return J


def rule_selection(mdp: FiniteMdp, regla: str) -> np.ndarray:
    """Índices de opción de la regla 'lru' (más profunda) o 'mru' (menos profunda)"""
    if regla == 'lru':
        return mdp.acciones.argmax(axis=2)
    if regla == 'mru':
        enmascaradas = np.where(mdp.acciones > 0, mdp.acciones, np.iinfo(np.int64).max)
        sin_desalojo = mdp.acciones.max(axis=2) == 0
        return np.where(sin_desalojo, 0, enmascaradas.argmin(axis=2))
    raise ErrorCapacidad(f"Regla desconocida: {regla}")


def policy_cost(mdp: FiniteMdp, regla: str, tau: int) -> np.ndarray:
    """Costo esperado en τ pasos de aplicar siempre la regla dada"""
    seleccion = rule_selection(mdp, regla)
    J = np.zeros(mdp.n)
    for _ in range(tau):
        J = mdp.evaluate(J, seleccion)
    return J


# ============ COSTO PROMEDIO ============

def verify_unichain(mdp: FiniteMdp, ref: int = 0) -> bool:
    """
    Condición suficiente de unicadena: desde todo estado se llega a `ref` con
    probabilidad positiva sin importar los controles elegidos
    """
    alcanzan = np.zeros(mdp.n, dtype=bool)
    alcanzan[ref] = True
    posibles = mdp.probabilidades > 0
    cambio = True
    while cambio:
        todas_dentro = np.ones(mdp.siguientes.shape[:2], dtype=bool)
        for u in range(mdp.siguientes.shape[2]):
            todas_dentro &= alcanzan[mdp.siguientes[:, :, u]]
        nuevos = (todas_dentro & posibles).any(axis=1) & ~alcanzan
        cambio = bool(nuevos.any())
        alcanzan |= nuevos
    return bool(alcanzan.all())


def relative_value_iteration(mdp: FiniteMdp, tol: Optional[float] = None, ref: int = 0,
                             max_iter: Optional[int] = None,
                             amortiguacion: float = 0.5) -> Tuple[float, np.ndarray]:
    """
    Iteración de valores relativa sobre el operador con mínimo dentro de la esperanza

    Usa la transformación de aperiodicidad h ← (1−α)h + αTh, que no cambia λ
    ni h. Termina cuando span(Th − h) < tol; devuelve (λ, h) con h(ref) = 0.
    """
    tol = configuracion.TOLERANCIA_RVI if tol is None else tol
    max_iter = configuracion.MAX_ITERACIONES_RVI if max_iter is None else max_iter
    if tol <= 0:
        raise ErrorCapacidad(f"Tolerancia inválida: {tol}")
    h = np.zeros(mdp.n)
    for iteracion in range(max_iter):
        Th = mdp.bellman(h)
        diferencia = Th - h
        if diferencia.max() - diferencia.min() < tol:
            logger.debug("Iteración relativa convergió en %d pasos", iteracion)
            return float(Th[ref] - h[ref]), h - h[ref]
        h = (1.0 - amortiguacion) * h + amortiguacion * Th
        h = h - h[ref]
    raise ErrorConvergencia(f"La iteración relativa no convergió en {max_iter} pasos")


# ============ SOLUCIÓN CERRADA C=2 ============

class BellmanC2Solution:
    """β, φ, ρ, λ y h(j) para j ∈ [2, V] (índices por profundidad)"""

    def __init__(self, dist: StackDistribution, beta: List[float], phi: List[int],
                 rho: List[float], lam: float, h: List[float]):
        self.dist = dist
        self.beta = beta
        self.phi = phi
        self.rho = rho
        self.lam = lam
        self.h = h

    @property
    def lambda_comparable(self) -> float:
        """λ − s(1): la ecuación cuenta el acierto en el tope como fallo"""
        return self.lam - self.dist.prob(1)

    def residuals(self) -> List[float]:
        """|h(j) − (1 − s(j) − λ + S(j−1)·min{0,h(j)} + (1−S(j))·min{0,h(j+1)})|"""
        d = self.dist
        h = self.h + [0.0]
        salida = []
        for j in range(2, d.V + 1):
            derecha = (1.0 - d.prob(j) - self.lam + d.S(j - 1) * min(0.0, h[j])
                       + (1.0 - d.S(j)) * min(0.0, h[j + 1]))
            salida.append(abs(h[j] - derecha))
        return salida

    def max_residual(self) -> float:
        return max(self.residuals(), default=0.0)

    def to_dict(self) -> Dict:
        return {
            'lambda': self.lam,
            'lambda_comparable': self.lambda_comparable,
            'beta2': self.beta[2],
            'h': {str(j): self.h[j] for j in range(2, self.dist.V + 1)},
            'phi': {str(j): self.phi[j] for j in range(2, self.dist.V + 1)},
            'rho': {str(j): self.rho[j] for j in range(2, self.dist.V + 1)},
            'max_residual': self.max_residual()
        }


def bellman_c2(dist: StackDistribution) -> BellmanC2Solution:
    """Solución cerrada con λ = 1 − β(2)"""
    V = dist.V
    if V < 2:
        raise ErrorCapacidad("La solución para C=2 requiere V ≥ 2")
    tolerancia = configuracion.TOLERANCIA_ACCIONES

    beta = [0.0] * (V + 2)
    for j in range(2, V + 1):
        beta[j] = max(dist.media(j, b) for b in range(j, V + 1))
    b2 = beta[2]

    phi = [0] * (V + 2)
    rho = [0.0] * (V + 2)
    for j in range(2, V + 1):
        for l in range(1, V - j + 2):
            fin = j + l - 1
            if all(dist.media(j + k, fin) >= b2 - tolerancia for k in range(l)):
                phi[j] = l
        if phi[j]:
            rho[j] = dist.media(j, j + phi[j] - 1) - b2
        else:
            rho[j] = beta[j] - b2

    h = [0.0] * (V + 1)
    for j in range(2, V + 1):
        S = dist.S(j - 1)
        h[j] = b2 - dist.prob(j) - S / (1.0 - S) * phi[j] * rho[j] - phi[j + 1] * rho[j + 1]
    return BellmanC2Solution(dist, beta, phi, rho, 1.0 - b2, h)


def build_c2_chain(dist: StackDistribution) -> FiniteMdp:
    """
    Cadena reducida de C=2 cuya ecuación de Bellman es la de la forma cerrada

    El estado j es la profundidad del segundo residente. Con d = j no hay
    costo y se pasa a 2; en otro caso cuesta 1 y se elige entre mantener
    (j, o j+1 si d > j) y pasar a 2.
    """
    V = dist.V
    if V < 2:
        raise ErrorCapacidad("La cadena de C=2 requiere V ≥ 2")
    estados = list(range(2, V + 1))
    costos = np.ones((len(estados), V))
    opciones = []
    for i, j in enumerate(estados):
        fila = []
        for d in range(1, V + 1):
            if d == j:
                costos[i, d - 1] = 0.0
                fila.append([(0, 2)])
            else:
                conservar = j if d < j else j + 1
                fila.append([(conservar - 2, conservar), (0, 2)])
        opciones.append(fila)
    probabilidades = np.tile(dist.s, (len(estados), 1))
    return FiniteMdp(estados, probabilidades, costos, opciones, range(1, V + 1))


# ============ CONTRAEJEMPLO ============

def counterexample_check(horizonte: int = HORIZONTE_CONTRAEJEMPLO) -> Dict:
    """
    Reproduce el contraejemplo de ocho profundidades

    Buffers iniciales {Λ(1), Λ(4)} para C=2 y {Λ(1), Λ(4), Λ(7)} para C=3,
    acceso a Λ(8). Las profundidades de desalojo son posteriores a la rotación.
    """
    dist = build_distribution(DISTRIBUCION_CONTRAEJEMPLO)
    iniciales = {2: [1, 4], 3: [1, 4, 7]}
    acceso = 8
    reporte = {}
    buffers = {}
    for C, residentes in iniciales.items():
        mdp = build_mdp(dist, C, solo_llenos=True)
        x0 = occupancy_state(dist.V, residentes)
        tabla = dp_optimal(mdp, horizonte - 1)
        i, k = mdp.indice[x0], mdp.disturbios.index(acceso)
        m = mdp.num_opciones[i, k]
        finitas = tabla.J[horizonte - 1][mdp.siguientes[i, k, :m]]
        acciones = mdp.acciones[i, k, :m]
        optimas = [int(u) for u, v in zip(acciones, finitas)
                   if v <= finitas.min() + configuracion.TOLERANCIA_UNICIDAD]

        ref = mdp.indice[occupancy_state(dist.V, range(1, C + 1))]
        _, h = relative_value_iteration(mdp, ref=ref)
        sesgos = h[mdp.siguientes[i, k, :m]]
        infinitas = [int(u) for u, v in zip(acciones, sesgos)
                     if v <= sesgos.min() + configuracion.TOLERANCIA_UNICIDAD]

        profundidad = optimas[0]
        # tras la rotación, la posición p ≥ 2 contiene a Λ₀(p−1) y el tope a Λ₀(8); Λ₀(p) tiene id p−1
        nuevo = [acceso - 1] + [p - 1 for p in residentes if p != profundidad - 1]
        buffers[C] = sorted(nuevo)
        reporte[f'C{C}_eviction_depth'] = profundidad
        reporte[f'C{C}_unique'] = len(optimas) == 1
        reporte[f'C{C}_infinite_horizon_depth'] = infinitas[0]
        reporte[f'C{C}_buffer_after'] = buffers[C]
        logger.debug("C=%d: desalojo óptimo %s, horizonte infinito %s", C, optimas, infinitas)

    reporte['horizon'] = horizonte
    reporte['infinite_horizon_agrees'] = all(
        reporte[f'C{C}_eviction_depth'] == reporte[f'C{C}_infinite_horizon_depth'] for C in iniciales)
    reporte['inclusion_violated'] = not set(buffers[2]) <= set(buffers[3])
    return reporte


# ============ PROCESOS DEPENDIENTES ============

class DependentHorizonTable:
    """Costos óptimos por (prefijo de profundidades, estado) con horizonte L"""

    def __init__(self, mdp: FiniteMdp, J_prefijo: Dict[Tuple[int, ...], np.ndarray], L: int):
        self.mdp = mdp
        self.J_prefijo = J_prefijo
        self.L = L

    @property
    def horizon(self) -> int:
        return self.L

    def _valores(self, prefijo: Tuple[int, ...]) -> np.ndarray:
        if len(prefijo) == self.L:
            return np.zeros(self.mdp.n)
        if prefijo not in self.J_prefijo:
            raise ErrorParametros(f"Prefijo inalcanzable o fuera del horizonte: {prefijo}")
        return self.J_prefijo[prefijo]

    def cost(self, x, prefijo: Tuple[int, ...] = ()) -> float:
        return float(self._valores(tuple(prefijo))[self.mdp.indice[x]])

    def optimal_actions(self, x, prefijo: Tuple[int, ...], d,
                        tolerancia: Optional[float] = None) -> List[int]:
        """Controles que minimizan el costo restante tras observar d a continuación del prefijo"""
        tolerancia = configuracion.TOLERANCIA_ACCIONES if tolerancia is None else tolerancia
        prefijo = tuple(prefijo)
        if len(prefijo) >= self.L:
            raise ErrorParametros(f"El prefijo {prefijo} agota el horizonte {self.L}")
        siguiente = self._valores(prefijo + (d,))
        i, k = self.mdp.indice[x], self.mdp.disturbios.index(d)
        m = self.mdp.num_opciones[i, k]
        valores = siguiente[self.mdp.siguientes[i, k, :m]]
        minimo = valores.min()
        return sorted(int(u) for u, v in zip(self.mdp.acciones[i, k, :m], valores)
                      if v <= minimo + tolerancia)

    def to_dict(self) -> Dict:
        return {
            'horizon': self.L,
            'states': [''.join(str(b) for b in x) for x in self.mdp.estados],
            'J': {','.join(str(d) for d in prefijo): [float(v) for v in fila]
                  for prefijo, fila in sorted(self.J_prefijo.items(), key=lambda par: (len(par[0]), par[0]))}
        }


def _validar_condicional(p: np.ndarray, V: int, no_creciente: bool, prefijo) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (V,) or np.any(p < 0) or abs(p.sum() - 1.0) > configuracion.TOLERANCIA_SUMA:
        raise ErrorDistribucion(f"Distribución condicional inválida para el prefijo {prefijo}")
    if no_creciente and np.any(np.diff(p) > configuracion.TOLERANCIA_SUMA):
        raise ErrorDistribucion(f"Distribución condicional creciente para el prefijo {prefijo}")
    return p


def _dp_prefijos(mdp: FiniteMdp, conditional: Callable, L: int, no_creciente: bool,
                 seleccion: Optional[np.ndarray]) -> Dict[Tuple[int, ...], np.ndarray]:
    V = len(mdp.disturbios)
    valores = {}

    def valor(prefijo):
        if len(prefijo) == L:
            return np.zeros(mdp.n)
        if prefijo in valores:
            return valores[prefijo]
        p = _validar_condicional(conditional(prefijo), V, no_creciente, prefijo)
        total = np.zeros(mdp.n)
        for k in range(V):
            if p[k] == 0:
                continue
            siguiente = valor(prefijo + (k + 1,))
            if seleccion is None:
                cont = siguiente[mdp.siguientes[:, k, :]].min(axis=1)
            else:
                cont = siguiente[mdp.siguientes[np.arange(mdp.n), k, seleccion[:, k]]]
            total += p[k] * (mdp.costos[:, k] + cont)
        valores[prefijo] = total
        return total

    valor(())
    return valores


def dp_dependent(conditional: Callable[[Tuple[int, ...]], Sequence[float]], V: int, C: int,
                 L: int, no_creciente: bool = True) -> DependentHorizonTable:
    """
    Programación dinámica sobre pares (prefijo, estado) para profundidades dependientes

    conditional(ζ) devuelve la ley de la próxima profundidad dado el prefijo ζ.
    """
    estructura = build_mdp(build_distribution([1.0 / V] * V), C)
    valores = _dp_prefijos(estructura, conditional, L, no_creciente, None)
    return DependentHorizonTable(estructura, valores, L)


def policy_cost_dependent(conditional: Callable, V: int, C: int, L: int, regla: str = 'lru',
                          no_creciente: bool = False) -> DependentHorizonTable:
    """Costo de aplicar siempre la regla con profundidades dependientes"""
    estructura = build_mdp(build_distribution([1.0 / V] * V), C)
    valores = _dp_prefijos(estructura, conditional, L, no_creciente,
                           rule_selection(estructura, regla))
    return DependentHorizonTable(estructura, valores, L)


def lru_gap_dependent(conditional: Callable, V: int, C: int, L: int) -> Tuple[float, Tuple[int, ...]]:
    """Mayor exceso de LRU sobre el óptimo y el estado inicial donde ocurre"""
    optimo = dp_dependent(conditional, V, C, L, no_creciente=False)
    lru = policy_cost_dependent(conditional, V, C, L, 'lru')
    brecha = lru.J_prefijo[()] - optimo.J_prefijo[()]
    i = int(brecha.argmax())
    return float(brecha[i]), optimo.mdp.estados[i]
