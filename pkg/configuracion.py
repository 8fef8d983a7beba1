"""
Módulo de configuración para PilaLPR
Constantes numéricas, rutas, variables de entorno y configuración de logging
"""

import os
import logging
from typing import List, Dict, Optional


# Ruta de los datos incluidos con el proyecto
DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')
RUTA_CONTRAEJEMPLO = os.path.join(DATA_DIR, 'contraejemplo.txt')

# Tolerancias
TOLERANCIA_SUMA = 1e-9
TOLERANCIA_CASCO = 1e-12
TOLERANCIA_ACCIONES = 1e-12
TOLERANCIA_UNICIDAD = 1e-9
TOLERANCIA_RVI = 1e-10

# Límites
MAX_ITERACIONES_RVI = 10 ** 6
MAX_V_MDP = 12

SEMILLA_POR_DEFECTO = int(os.environ.get('PILALPR_SEMILLA', '42'))
NIVEL_LOG_POR_DEFECTO = os.environ.get('PILALPR_LOG_LEVEL', 'WARNING')

FORMATO_LOG = "%(asctime)s %(levelname)s %(name)s: %(message)s"
FORMATOS_SALIDA = ('csv', 'json')


def configurar_logging(nivel: Optional[str] = None) -> None:
    """
    Configura el logger raíz una sola vez

    Args:
        nivel: nombre del nivel (DEBUG, INFO, ...); por defecto PILALPR_LOG_LEVEL
    """
    from modules.errores import ErrorValidacion

    nivel = (nivel or NIVEL_LOG_POR_DEFECTO).upper()
    valor = getattr(logging, nivel, None)
    if not isinstance(valor, int):
        raise ErrorValidacion(f"Nivel de log inválido: {nivel}")
    logging.basicConfig(level=valor, format=FORMATO_LOG)
    logging.getLogger().setLevel(valor)


def parsear_capacidades(capacidades: Optional[str], sueltas: Optional[List[int]] = None) -> List[int]:
    """Convierte '--capacities A..B' y '--capacity C' repetido en una lista ordenada"""
    from modules.errores import ErrorValidacion

    resultado = set(sueltas or [])
    if capacidades:
        partes = capacidades.split('..')
        try:
            if len(partes) == 2:
                inicio, fin = int(partes[0]), int(partes[1])
                resultado.update(range(inicio, fin + 1))
            elif len(partes) == 1:
                resultado.add(int(partes[0]))
            else:
                raise ValueError(capacidades)
        except ValueError:
            raise ErrorValidacion(f"Rango de capacidades inválido: {capacidades}")
    return sorted(resultado)


class ConfiguracionEjecucion:
    """Parámetros de una ejecución del CLI"""

    def __init__(self, subcomando: str, ruta_distribucion: Optional[str] = None,
                 ruta_traza: Optional[str] = None, V: Optional[int] = None,
                 capacidades: Optional[List[int]] = None,
                 semilla: int = SEMILLA_POR_DEFECTO, n: Optional[int] = None,
                 ruta_salida: Optional[str] = None, formato: str = 'csv',
                 ruta_pila: Optional[str] = None):
        self.subcomando = subcomando
        self.ruta_distribucion = ruta_distribucion
        self.ruta_traza = ruta_traza
        self.V = V
        self.capacidades = list(capacidades or [])
        self.semilla = semilla
        self.n = n
        self.ruta_salida = ruta_salida
        self.formato = formato
        self.ruta_pila = ruta_pila

    def to_dict(self) -> Dict:
        return {
            'subcomando': self.subcomando,
            'ruta_distribucion': self.ruta_distribucion,
            'ruta_traza': self.ruta_traza,
            'V': self.V,
            'capacidades': self.capacidades,
            'semilla': self.semilla,
            'n': self.n,
            'ruta_salida': self.ruta_salida,
            'formato': self.formato,
            'ruta_pila': self.ruta_pila
        }

    @staticmethod
    def from_dict(datos: Dict) -> 'ConfiguracionEjecucion':
        return ConfiguracionEjecucion(**datos)

    def validar(self, V: Optional[int] = None) -> 'ConfiguracionEjecucion':
        """
        Verifica rutas de lectura, formato y rango de capacidades

        Args:
            V: tamaño del espacio virtual cuando ya se conoce
        """
        from modules.errores import ErrorValidacion, ErrorCapacidad

        for ruta in (self.ruta_distribucion, self.ruta_traza, self.ruta_pila):
            if ruta is not None and not os.path.exists(ruta):
                raise ErrorValidacion(f"No existe el archivo: {ruta}")
        if self.formato not in FORMATOS_SALIDA:
            raise ErrorValidacion(f"Formato de salida inválido: {self.formato}")
        if self.n is not None and self.n < 0:
            raise ErrorValidacion(f"Cantidad de accesos inválida: {self.n}")
        if not 0 <= self.semilla < 2 ** 64:
            raise ErrorValidacion(f"La semilla debe ser un entero de 64 bits sin signo: {self.semilla}")
        if V is not None:
            self.V = V
        if self.V is not None:
            fuera = [c for c in self.capacidades if not 1 <= c <= self.V]
            if fuera:
                raise ErrorCapacidad(f"Capacidades fuera de [1, {self.V}]: {fuera}")
        return self
