"""
Módulo de errores para PilaLPR
Jerarquía de excepciones usada por todos los módulos
"""


class ErrorPilaLPR(Exception):
    """Error base del paquete"""


class ErrorValidacion(ErrorPilaLPR, ValueError):
    """Entrada inválida (el CLI la traduce a código de salida 1)"""


class ErrorDistribucion(ErrorValidacion):
    """Distribución de profundidades inválida"""


class ErrorTraza(ErrorValidacion):
    """Traza o pila LRU inválida"""


class ErrorParametros(ErrorValidacion):
    """Parámetros de política o de control fuera de rango"""


class ErrorCapacidad(ErrorValidacion):
    """Capacidad de buffer fuera de rango"""


class ErrorEspacioEstados(ErrorValidacion):
    """El espacio de estados del MDP excede el límite permitido"""


class ErrorConvergencia(ErrorPilaLPR, RuntimeError):
    """La iteración de valores no convergió dentro del límite"""
