"""
Módulo de Reportes para PilaLPR
Escritura atómica de reportes JSON y CSV (archivo temporal + renombrado)
"""

import os
import io
import csv
import json
import logging
import tempfile
from typing import List, Dict, Optional, Sequence

from .errores import ErrorValidacion

logger = logging.getLogger(__name__)


def escribir_atomico(ruta: str, contenido: bytes) -> None:
    """
    Escribe bytes en un temporal del mismo directorio y lo mueve a su lugar

    Si algo falla el archivo destino no se toca y el temporal se elimina.
    """
    directorio = os.path.dirname(os.path.abspath(ruta))
    descriptor, temporal = tempfile.mkstemp(prefix='.tmp-', dir=directorio)
    try:
        with os.fdopen(descriptor, 'wb') as f:
            f.write(contenido)
        os.replace(temporal, ruta)
    except BaseException:
        if os.path.exists(temporal):
            os.remove(temporal)
        raise


class ReportesManager:
    """Gestor de salida de reportes en JSON y CSV"""

    def __init__(self, salida_estandar: Optional[io.TextIOBase] = None):
        self.salida_estandar = salida_estandar

    # ============ SERIALIZACIÓN ============

    @staticmethod
    def json_a_texto(datos: Dict) -> str:
        """Serializa un reporte JSON de forma determinista"""
        return json.dumps(datos, ensure_ascii=False, indent=2) + "\n"

    @staticmethod
    def csv_a_texto(encabezado: Sequence[str], filas: List[Sequence]) -> str:
        """Serializa filas CSV con fin de línea '\\n'"""
        buffer = io.StringIO()
        escritor = csv.writer(buffer, lineterminator='\n')
        escritor.writerow(encabezado)
        for fila in filas:
            escritor.writerow(fila)
        return buffer.getvalue()

    # ============ ESCRITURA ============

    def guardar_texto(self, texto: str, ruta: Optional[str]) -> bool:
        """Guarda el texto en la ruta indicada, o lo emite por la salida estándar"""
        if ruta is None:
            if self.salida_estandar is not None:
                self.salida_estandar.write(texto)
            return True
        try:
            escribir_atomico(ruta, texto.encode('utf-8'))
            logger.info("Reporte guardado en %s", ruta)
            return True
        except OSError as e:
            logger.error("Error al guardar reporte en %s: %s", ruta, e)
            raise

    def guardar_json(self, datos: Dict, ruta: Optional[str]) -> bool:
        """Guarda un reporte JSON"""
        return self.guardar_texto(self.json_a_texto(datos), ruta)

    def guardar_csv(self, encabezado: Sequence[str], filas: List[Sequence],
                    ruta: Optional[str]) -> bool:
        """Guarda un reporte CSV"""
        return self.guardar_texto(self.csv_a_texto(encabezado, filas), ruta)

    def guardar(self, reporte: Dict, ruta: Optional[str], formato: str) -> bool:
        """
        Guarda un reporte en el formato pedido

        El reporte trae 'json' (diccionario) y opcionalmente 'encabezado' y
        'filas' para la versión CSV. Sin filas CSV se usa siempre JSON.
        """
        if formato == 'csv' and 'filas' in reporte:
            return self.guardar_csv(reporte['encabezado'], reporte['filas'], ruta)
        return self.guardar_json(reporte['json'], ruta)

    # ============ LECTURA ============

    @staticmethod
    def leer_json(ruta: str) -> Dict:
        """Lee un archivo JSON de entrada (fronteras, procesos)"""
        try:
            with open(ruta, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error("Error al leer %s: %s", ruta, e)
            raise ErrorValidacion(f"No se pudo leer el JSON {ruta}: {e}")
