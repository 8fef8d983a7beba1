"""
Módulo de Distribuciones para PilaLPR
Maneja distribuciones de profundidad de pila, pilas LRU, generación de trazas
y cálculo directo de distancias de pila
"""

import struct
import logging
from typing import List, Dict, Optional, Sequence, Iterable

import numpy as np

import configuracion
from .errores import ErrorDistribucion, ErrorTraza
from .modreportes import escribir_atomico

logger = logging.getLogger(__name__)

MAGIA_TRAZA = b'LPRT'
VERSION_TRAZA = 1
_CABECERA_TRAZA = struct.Struct('<4sIQ')


class StackDistribution:
    """
    Ley de profundidades de pila s(1..V) con sumas acumuladas S(j)

    Los arreglos internos son de solo lectura; `acumulada[0] = S(0) = 0`.
    """

    def __init__(self, s: Sequence[float]):
        self.s = np.array(s, dtype=np.float64)
        self.acumulada = np.concatenate(([0.0], np.cumsum(self.s)))
        self.s.setflags(write=False)
        self.acumulada.setflags(write=False)
        self.V = len(self.s)

    @property
    def cum(self) -> np.ndarray:
        """S(1..V)"""
        return self.acumulada[1:]

    def S(self, j: int) -> float:
        """Suma acumulada S(j) con S(0)=0 y S(j)=1 para j ≥ V"""
        if j <= 0:
            return 0.0
        return float(self.acumulada[min(j, self.V)])

    def prob(self, j: int) -> float:
        """s(j) con indexación desde 1; cero fuera de [1, V]"""
        if 1 <= j <= self.V:
            return float(self.s[j - 1])
        return 0.0

    def media(self, i: int, j: int) -> float:
        """Promedio móvil s̄(i, j) = (S(j) − S(i−1)) / (j − i + 1)"""
        return (self.S(j) - self.S(i - 1)) / (j - i + 1)

    def to_dict(self) -> Dict:
        return {'V': self.V, 's': [float(x) for x in self.s]}

    @staticmethod
    def from_dict(datos: Dict) -> 'StackDistribution':
        return build_distribution(datos['s'])

    def __eq__(self, otra) -> bool:
        return isinstance(otra, StackDistribution) and np.array_equal(self.s, otra.s)

    def __repr__(self) -> str:
        return f"StackDistribution(V={self.V})"


def build_distribution(raw: Iterable[float], normalize: bool = False) -> StackDistribution:
    """
    Valida una lista de probabilidades y recorta los ceros finales

    Args:
        raw: probabilidades s(1), s(2), ...
        normalize: reescala en lugar de rechazar cuando la suma no es 1
    """
    valores = np.array(list(raw), dtype=np.float64)
    if valores.size == 0:
        raise ErrorDistribucion("La distribución está vacía")
    if not np.all(np.isfinite(valores)):
        raise ErrorDistribucion(f"La distribución contiene valores no finitos: {valores.tolist()}")
    negativos = np.flatnonzero(valores < 0)
    if negativos.size:
        j = int(negativos[0])
        raise ErrorDistribucion(f"Probabilidad negativa en la profundidad {j + 1}: {valores[j]}")
    total = float(valores.sum())
    if total == 0.0:
        raise ErrorDistribucion("La distribución es toda cero")
    if normalize:
        valores = valores / total
    elif abs(total - 1.0) > configuracion.TOLERANCIA_SUMA:
        raise ErrorDistribucion(f"La suma de la distribución es {total!r}, se esperaba 1")

    ultimo = int(np.flatnonzero(valores > 0)[-1])
    if ultimo + 1 < valores.size:
        logger.debug("Recortando %d ceros finales", valores.size - ultimo - 1)
    return StackDistribution(valores[:ultimo + 1])


class LruStack:
    """Pila LRU: permutación de ítems (posición 1 = más reciente) y su inversa"""

    def __init__(self, items: Sequence[int]):
        self.items = [int(x) for x in items]
        self.inversa = {item: pos for pos, item in enumerate(self.items)}
        if len(self.inversa) != len(self.items):
            raise ErrorTraza("La pila inicial contiene ítems repetidos")

    @staticmethod
    def identity(V: int) -> 'LruStack':
        """Pila identidad [0, 1, …, V−1]"""
        return LruStack(range(V))

    def __len__(self) -> int:
        return len(self.items)

    def copy(self) -> 'LruStack':
        return LruStack(self.items)

    def depth(self, item: int) -> int:
        """Profundidad (desde 1) de un ítem sin modificar la pila"""
        try:
            return self.inversa[item] + 1
        except KeyError:
            raise ErrorTraza(f"Ítem desconocido: {item}")

    def rotate(self, d: int) -> int:
        """Corrimiento cíclico unitario del prefijo de largo d; devuelve el ítem que sube"""
        item = self.items.pop(d - 1)
        self.items.insert(0, item)
        for pos in range(d):
            self.inversa[self.items[pos]] = pos
        return item

    def push(self, item: int) -> None:
        """Agrega un ítem nuevo al tope (pila que crece en frío)"""
        if item in self.inversa:
            raise ErrorTraza(f"El ítem {item} ya está en la pila")
        self.items.append(item)
        self.inversa[item] = len(self.items) - 1
        self.rotate(len(self.items))

    def is_consistent(self) -> bool:
        """Verifica que items e inversa sean biyecciones mutuamente inversas"""
        return (len(self.inversa) == len(self.items)
                and all(self.inversa[item] == pos for pos, item in enumerate(self.items)))

    def to_dict(self) -> Dict:
        return {'items': list(self.items)}


def lru_update(stack: LruStack, item: int) -> int:
    """Procesa un acceso: devuelve la profundidad previa y sube el ítem al tope"""
    d = stack.depth(item)
    if d > 1:
        stack.rotate(d)
    return d


class Trace:
    """Secuencia inmutable de accesos a ítems en [0, V)"""

    def __init__(self, accesos: Iterable[int], V: Optional[int] = None):
        arreglo = np.asarray(list(accesos) if not isinstance(accesos, np.ndarray) else accesos)
        if arreglo.size and (arreglo.min() < 0 or arreglo.max() >= 2 ** 32):
            raise ErrorTraza("Los identificadores deben ser enteros sin signo de 32 bits")
        self.accesos = arreglo.astype(np.uint32)
        self.accesos.setflags(write=False)
        maximo = int(self.accesos.max()) + 1 if self.accesos.size else 0
        if V is None:
            V = maximo
        elif maximo > V:
            raise ErrorTraza(f"Identificador {maximo - 1} fuera del espacio virtual de tamaño {V}")
        self.V = V

    def __len__(self) -> int:
        return int(self.accesos.size)

    def __iter__(self):
        return (int(x) for x in self.accesos)

    def __getitem__(self, indice):
        return self.accesos[indice]

    def distinct(self) -> int:
        """Cantidad de ítems distintos"""
        return int(np.unique(self.accesos).size)


# ============ GENERADOR ALEATORIO ============

def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generador PCG64 reproducible; la corrida i usa la semilla seed + i"""
    return np.random.Generator(np.random.PCG64(seed + stream))


# ============ MUESTREO Y TRAZAS ============

def sample_depth(dist: StackDistribution, rng: np.random.Generator) -> int:
    """Una profundidad j con probabilidad s(j) por búsqueda binaria sobre S"""
    u = rng.random()
    return min(int(np.searchsorted(dist.cum, u, side='right')) + 1, dist.V)


def sample_depths(dist: StackDistribution, rng: np.random.Generator, n: int) -> np.ndarray:
    """n profundidades i.i.d. (versión vectorizada de sample_depth)"""
    u = rng.random(n)
    profundidades = np.searchsorted(dist.cum, u, side='right') + 1
    return np.minimum(profundidades, dist.V).astype(np.int64)


def trace_from_depths(depths: Iterable[int], initial_stack: LruStack) -> Trace:
    """Reconstruye la traza a partir de la secuencia de profundidades"""
    pila = initial_stack.copy()
    accesos = []
    for d in depths:
        d = int(d)
        if not 1 <= d <= len(pila):
            raise ErrorTraza(f"Profundidad {d} fuera de la pila de tamaño {len(pila)}")
        accesos.append(pila.rotate(d) if d > 1 else pila.items[0])
    return Trace(np.array(accesos, dtype=np.uint32), V=len(pila))


def depths_from_trace(trace: Iterable[int], initial_stack: LruStack) -> np.ndarray:
    """Distancias de pila LRU de cada acceso (cálculo directo O(V) por acceso)"""
    pila = initial_stack.copy()
    return np.array([lru_update(pila, int(item)) for item in trace], dtype=np.int64)


def generate_trace(dist: StackDistribution, initial_stack: LruStack, n: int,
                   rng: np.random.Generator) -> Trace:
    """Genera n accesos muestreando profundidades y rotando la pila"""
    if n < 0:
        raise ErrorTraza(f"Cantidad de accesos inválida: {n}")
    if len(initial_stack) < dist.V:
        raise ErrorTraza(f"La pila inicial tiene {len(initial_stack)} ítems y V={dist.V}")
    profundidades = sample_depths(dist, rng, n)
    logger.debug("Generando traza de %d accesos con V=%d", n, dist.V)
    return trace_from_depths(profundidades, initial_stack)


# ============ ARCHIVOS ============

def _lineas_utiles(ruta: str) -> List[str]:
    with open(ruta, 'r', encoding='utf-8') as f:
        lineas = [linea.split('#', 1)[0].strip() for linea in f]
    return [linea for linea in lineas if linea]


def read_distribution(ruta: str, normalize: bool = False) -> StackDistribution:
    """Lee un archivo de distribución: una probabilidad por línea, '#' comenta"""
    try:
        valores = [float(linea) for linea in _lineas_utiles(ruta)]
    except ValueError as e:
        raise ErrorDistribucion(f"Valor inválido en {ruta}: {e}")
    return build_distribution(valores, normalize=normalize)


def write_distribution(dist: StackDistribution, ruta: str) -> None:
    texto = "".join(f"{float(x)!r}\n" for x in dist.s)
    escribir_atomico(ruta, texto.encode('utf-8'))


def read_stack(ruta: str) -> LruStack:
    """Lee una pila inicial: un identificador por línea, desde el tope"""
    try:
        return LruStack([int(linea) for linea in _lineas_utiles(ruta)])
    except ValueError as e:
        raise ErrorTraza(f"Identificador inválido en {ruta}: {e}")


def read_trace(ruta: str, V: Optional[int] = None) -> Trace:
    """Lee una traza en formato texto o binario (detectado por la cabecera)"""
    with open(ruta, 'rb') as f:
        contenido = f.read()
    if contenido[:4] == MAGIA_TRAZA:
        if len(contenido) < _CABECERA_TRAZA.size:
            raise ErrorTraza(f"Cabecera binaria truncada en {ruta}")
        _, version, cantidad = _CABECERA_TRAZA.unpack_from(contenido)
        if version != VERSION_TRAZA:
            raise ErrorTraza(f"Versión de traza no soportada: {version}")
        esperado = _CABECERA_TRAZA.size + 4 * cantidad
        if len(contenido) != esperado:
            raise ErrorTraza(f"Traza binaria de largo {len(contenido)}, se esperaban {esperado} bytes")
        accesos = np.frombuffer(contenido, dtype='<u4', offset=_CABECERA_TRAZA.size)
        return Trace(accesos.astype(np.uint32), V=V)
    try:
        accesos = [int(linea) for linea in _lineas_utiles(ruta)]
    except ValueError as e:
        raise ErrorTraza(f"Identificador inválido en {ruta}: {e}")
    return Trace(np.array(accesos, dtype=np.int64), V=V)


def write_trace(trace: Trace, ruta: str, binary: bool = False) -> None:
    """Escribe la traza en texto (un id por línea) o en el formato binario LPRT"""
    if binary:
        contenido = (_CABECERA_TRAZA.pack(MAGIA_TRAZA, VERSION_TRAZA, len(trace))
                     + trace.accesos.astype('<u4').tobytes())
    else:
        contenido = "".join(f"{int(x)}\n" for x in trace.accesos).encode('utf-8')
    escribir_atomico(ruta, contenido)
