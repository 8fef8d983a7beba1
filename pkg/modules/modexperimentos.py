"""
Módulo de Experimentos para PilaLPR
Arma los reportes de cada subcomando a partir de los módulos de cálculo
"""

import logging
from typing import List, Dict, Optional

import configuracion
from .errores import ErrorPilaLPR, ErrorParametros
from .moddist import (StackDistribution, LruStack, Trace, generate_trace, make_rng,
                      build_distribution)
from .modsegmentos import segmentation, profit_rates, kl_for_capacity
from .modpoliticas import parse_policy, simulate, kl_miss_rate
from .modpilarapida import miss_curve
from .modcontrol import (build_mdp, dp_optimal, relative_value_iteration, bellman_c2,
                         counterexample_check, occupancy_state)
from .modcotas import bound_report
from .modasignacion import SepList, greedy_allocate, partition_buffer

logger = logging.getLogger(__name__)

ENCABEZADO_SIMULACION = ['capacity', 'policy', 'accesses', 'misses', 'miss_rate']
ENCABEZADO_CURVA = ['capacity', 'misses', 'miss_rate']
ENCABEZADO_COTAS = ['capacity', 'L_opt', 'best_G', 'M_lpr', 'chi_tilde', 'empirical_chi']


def _estado_a_texto(x) -> str:
    return ''.join(str(b) for b in x)


class ExperimentosManager:
    """Gestor de experimentos: un método por subcomando, cada uno devuelve un reporte"""

    def __init__(self, semilla: int = configuracion.SEMILLA_POR_DEFECTO):
        self.semilla = semilla

    # ============ TRAZAS ============

    def generar_traza(self, dist: StackDistribution, n: int, pila: Optional[LruStack] = None) -> Trace:
        """Traza de n accesos desde la pila dada (por defecto la identidad)"""
        pila = LruStack.identity(dist.V) if pila is None else pila
        try:
            return generate_trace(dist, pila, n, make_rng(self.semilla))
        except ErrorPilaLPR as e:
            logger.error("Error al generar traza: %s", e)
            raise

    def _traza(self, dist: Optional[StackDistribution], traza: Optional[Trace],
               n: Optional[int], pila: Optional[LruStack] = None) -> Trace:
        if traza is not None:
            return traza
        if dist is None or n is None:
            raise ErrorParametros("Se necesita --trace o bien --dist con --n")
        return self.generar_traza(dist, n, pila)

    # ============ SEGMENTACIÓN ============

    def segmentos(self, dist: StackDistribution) -> Dict:
        """Puntos q, tasas ξ y parámetros KL para cada capacidad"""
        try:
            seg = segmentation(dist)
            filas = []
            kl = []
            for C in range(2, dist.V + 1):
                K, L = kl_for_capacity(seg, C)
                tasa = kl_miss_rate(dist, K, L, C)
                kl.append({'C': C, 'K': K, 'L': L, 'miss_rate': tasa})
                filas.append([C, K, L, repr(tasa)])
            datos = seg.to_dict()
            datos['V'] = dist.V
            datos['profit_rates'] = profit_rates(dist)
            datos['kl'] = kl
            return {'json': datos, 'encabezado': ['capacity', 'K', 'L', 'miss_rate'], 'filas': filas}
        except ErrorPilaLPR as e:
            logger.error("Error al calcular la segmentación: %s", e)
            raise

    # ============ SIMULACIÓN ============

    def simular(self, politica: str, capacidades: List[int], dist: Optional[StackDistribution] = None,
                traza: Optional[Trace] = None, n: Optional[int] = None,
                pila: Optional[LruStack] = None) -> Dict:
        """Una simulación por capacidad con el buffer vacío y la pila LRU dada"""
        try:
            traza = self._traza(dist, traza, n, pila)
            seg = segmentation(dist) if dist is not None else None
            politica_obj = parse_policy(politica, seg)
            resultados = [simulate(politica_obj, traza, C, initial_stack=pila) for C in capacidades]
            return {
                'json': {'results': [r.to_dict() for r in resultados]},
                'encabezado': ENCABEZADO_SIMULACION,
                'filas': [r.to_row() for r in resultados]
            }
        except ErrorPilaLPR as e:
            logger.error("Error al simular %s: %s", politica, e)
            raise

    def curva_fallos(self, dist: StackDistribution, traza: Optional[Trace] = None,
                     n: Optional[int] = None, pila: Optional[LruStack] = None) -> Dict:
        """Curva de fallos LPR para todas las capacidades en una sola pasada"""
        try:
            traza = self._traza(dist, traza, n, pila)
            curva = miss_curve(segmentation(dist), traza, initial_stack=pila)
            return {'json': curva.to_dict(), 'encabezado': ENCABEZADO_CURVA, 'filas': curva.rows()}
        except ErrorPilaLPR as e:
            logger.error("Error al calcular la curva de fallos: %s", e)
            raise

    # ============ COTAS ============

    def cotas(self, dist: StackDistribution, capacidades: List[int], n: int = 0) -> Dict:
        try:
            reportes = [bound_report(dist, C, n, self.semilla) for C in capacidades]
            filas = [[r['C'], repr(r['L_opt']), r['best_G'], repr(r['M_lpr']),
                      repr(r['chi_tilde']), '' if r['empirical_chi'] is None else repr(r['empirical_chi'])]
                     for r in reportes]
            return {'json': {'bounds': reportes}, 'encabezado': ENCABEZADO_COTAS, 'filas': filas}
        except ErrorPilaLPR as e:
            logger.error("Error al calcular cotas: %s", e)
            raise

    # ============ CONTROL ============

    def programacion_dinamica(self, dist: StackDistribution, C: int, horizonte: int,
                              promedio: bool = False) -> Dict:
        """Tabla J*_τ por estado y, opcionalmente, ganancia y sesgo de costo promedio"""
        try:
            mdp = build_mdp(dist, C)
            tabla = dp_optimal(mdp, horizonte)
            estados = [_estado_a_texto(x) for x in mdp.estados]
            datos = {'V': dist.V, 'C': C, 'horizon': horizonte,
                     'J': {e: float(tabla.J[horizonte, i]) for i, e in enumerate(estados)}}
            if promedio:
                ref = mdp.indice[occupancy_state(dist.V, range(1, C + 1))]
                lam, h = relative_value_iteration(mdp, ref=ref)
                datos['lambda'] = lam
                datos['h'] = {e: float(h[i]) for i, e in enumerate(estados)}
            filas = [[e, repr(float(tabla.J[horizonte, i]))] for i, e in enumerate(estados)]
            return {'json': datos, 'encabezado': ['state', 'J'], 'filas': filas}
        except ErrorPilaLPR as e:
            logger.error("Error al resolver la programación dinámica: %s", e)
            raise

    def bellman_c2(self, dist: StackDistribution) -> Dict:
        try:
            return {'json': bellman_c2(dist).to_dict()}
        except ErrorPilaLPR as e:
            logger.error("Error al resolver la ecuación de Bellman para C=2: %s", e)
            raise

    def contraejemplo(self) -> Dict:
        try:
            return {'json': counterexample_check()}
        except ErrorPilaLPR as e:
            logger.error("Error al verificar el contraejemplo: %s", e)
            raise

    # ============ ASIGNACIÓN ============

    @staticmethod
    def _fronteras(items: List) -> List[SepList]:
        try:
            return [SepList.from_pairs([tuple(p) for p in pares]) for pares in items]
        except (TypeError, ValueError) as e:
            raise ErrorParametros(f"Fronteras inválidas: {e}")

    def asignar(self, especificacion: Dict, C: float) -> Dict:
        """especificacion = {"items": [[[η, ζ], ...], ...]}"""
        try:
            if 'items' not in especificacion:
                raise ErrorParametros("Falta la clave 'items'")
            asignacion = greedy_allocate(self._fronteras(especificacion['items']), C)
            return {'json': asignacion.to_dict()}
        except ErrorPilaLPR as e:
            logger.error("Error al asignar la capacidad: %s", e)
            raise

    def particionar(self, especificacion: Dict, C: float) -> Dict:
        """
        especificacion = {"processes": [{"weight": π, "dist": [...]} |
                                        {"weight": π, "items": [[[η, ζ], ...], ...]}]}
        """
        try:
            procesos = []
            for proceso in especificacion.get('processes', []):
                if 'weight' not in proceso:
                    raise ErrorParametros("Cada proceso necesita 'weight'")
                if 'dist' in proceso:
                    fuente = build_distribution(proceso['dist'])
                elif 'items' in proceso:
                    fuente = self._fronteras(proceso['items'])
                else:
                    raise ErrorParametros("Cada proceso necesita 'dist' o 'items'")
                procesos.append((fuente, proceso['weight']))
            return {'json': partition_buffer(procesos, C).to_dict()}
        except ErrorPilaLPR as e:
            logger.error("Error al particionar el buffer: %s", e)
            raise
