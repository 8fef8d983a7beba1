import logging

import click

import configuracion
from configuracion import ConfiguracionEjecucion, parsear_capacidades
from modules.errores import ErrorValidacion, ErrorParametros
from modules.moddist import read_distribution, read_trace, read_stack, write_trace
from modules.modreportes import ReportesManager
from modules.modexperimentos import ExperimentosManager

logger = logging.getLogger('pilalpr')


class GrupoPilaLPR(click.Group):
    """Grupo de comandos con códigos de salida 0 (éxito), 1 (validación) y 2 (interno)"""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.exceptions.Exit:
            raise
        except click.UsageError as e:
            e.show()
            ctx.exit(1)
        except ErrorValidacion as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(1)
        except Exception as e:
            logger.exception("Error interno")
            click.echo(f"Error interno: {e}", err=True)
            ctx.exit(2)


def _reportes() -> ReportesManager:
    return ReportesManager(click.get_text_stream('stdout'))


def _salida(funcion):
    funcion = click.option('--format', 'formato', type=click.Choice(configuracion.FORMATOS_SALIDA),
                           default=None, help='Formato del reporte')(funcion)
    return click.option('--out', 'ruta_salida', type=click.Path(dir_okay=False), default=None,
                        help='Archivo de salida (por defecto la salida estándar)')(funcion)


def _semilla(funcion):
    return click.option('--seed', 'semilla', type=int, default=configuracion.SEMILLA_POR_DEFECTO,
                        show_default=True, help='Semilla de 64 bits')(funcion)


def _capacidades(funcion):
    funcion = click.option('--capacities', 'rango', default=None, help='Rango A..B')(funcion)
    return click.option('--capacity', 'sueltas', type=int, multiple=True,
                        help='Capacidad (se puede repetir)')(funcion)


def _pila(funcion):
    return click.option('--stack', 'ruta_pila', type=click.Path(exists=True, dir_okay=False),
                        default=None, help='Pila LRU inicial: un id por línea desde el tope')(funcion)


def _cargar_pila(config: ConfiguracionEjecucion):
    return read_stack(config.ruta_pila) if config.ruta_pila else None


def _cargar(config: ConfiguracionEjecucion):
    """Valida la configuración y lee la distribución y la traza pedidas"""
    config.validar()
    dist = read_distribution(config.ruta_distribucion) if config.ruta_distribucion else None
    traza = read_trace(config.ruta_traza) if config.ruta_traza else None
    V = dist.V if dist is not None else (traza.V if traza is not None else None)
    config.validar(V)
    return dist, traza


@click.group(cls=GrupoPilaLPR)
@click.option('--log-level', 'nivel_log', default=None,
              help='Nivel de log (por defecto PILALPR_LOG_LEVEL)')
def cli(nivel_log):
    """PilaLPR: políticas de desalojo óptimas bajo el modelo de pila LRU"""
    configuracion.configurar_logging(nivel_log)


# ============ TRAZAS ============

@cli.command('gen-trace')
@click.option('--dist', 'ruta_distribucion', type=click.Path(dir_okay=False), required=True)
@click.option('--n', 'n', type=int, required=True, help='Cantidad de accesos')
@click.option('--binary', is_flag=True, help='Escribe el formato binario')
@click.option('--out', 'ruta_salida', type=click.Path(dir_okay=False), default=None)
@_semilla
@_pila
def gen_trace(ruta_distribucion, n, binary, ruta_salida, semilla, ruta_pila):
    """Genera una traza a partir de una distribución de profundidades"""
    config = ConfiguracionEjecucion('gen-trace', ruta_distribucion=ruta_distribucion, n=n,
                                    semilla=semilla, ruta_salida=ruta_salida, ruta_pila=ruta_pila)
    dist, _ = _cargar(config)
    traza = ExperimentosManager(semilla).generar_traza(dist, n, _cargar_pila(config))
    if ruta_salida is None:
        if binary:
            raise ErrorParametros("La salida binaria requiere --out")
        _reportes().guardar_texto("".join(f"{int(x)}\n" for x in traza.accesos), None)
    else:
        write_trace(traza, ruta_salida, binary=binary)


# ============ SEGMENTACIÓN Y SIMULACIÓN ============

@cli.command('segments')
@click.option('--dist', 'ruta_distribucion', type=click.Path(dir_okay=False), required=True)
@_salida
def segments(ruta_distribucion, ruta_salida, formato):
    """Puntos de segmentación, tasas de ganancia y parámetros KL"""
    config = ConfiguracionEjecucion('segments', ruta_distribucion=ruta_distribucion,
                                    ruta_salida=ruta_salida, formato=formato or 'json')
    dist, _ = _cargar(config)
    reporte = ExperimentosManager().segmentos(dist)
    _reportes().guardar(reporte, ruta_salida, config.formato)


@cli.command('simulate')
@click.option('--trace', 'ruta_traza', type=click.Path(dir_okay=False), default=None)
@click.option('--dist', 'ruta_distribucion', type=click.Path(dir_okay=False), default=None)
@click.option('--n', 'n', type=int, default=None)
@click.option('--policy', 'politica', default='lru', show_default=True,
              help='lru | mru | fifo | kl:K:L | lpr | opt')
@_capacidades
@_semilla
@_pila
@_salida
def simulate(ruta_traza, ruta_distribucion, n, politica, sueltas, rango, semilla, ruta_pila,
             ruta_salida, formato):
    """Simula una política con una o varias capacidades"""
    config = ConfiguracionEjecucion('simulate', ruta_distribucion=ruta_distribucion,
                                    ruta_traza=ruta_traza, capacidades=parsear_capacidades(rango, sueltas),
                                    semilla=semilla, n=n, ruta_salida=ruta_salida,
                                    formato=formato or 'csv', ruta_pila=ruta_pila)
    dist, traza = _cargar(config)
    if not config.capacidades:
        raise ErrorParametros("Indique al menos una capacidad")
    reporte = ExperimentosManager(semilla).simular(politica, config.capacidades, dist, traza, n,
                                                  _cargar_pila(config))
    _reportes().guardar(reporte, ruta_salida, config.formato)


@cli.command('miss-curve')
@click.option('--dist', 'ruta_distribucion', type=click.Path(dir_okay=False), required=True)
@click.option('--trace', 'ruta_traza', type=click.Path(dir_okay=False), default=None)
@click.option('--n', 'n', type=int, default=None)
@_semilla
@_pila
@_salida
def miss_curve_cmd(ruta_distribucion, ruta_traza, n, semilla, ruta_pila, ruta_salida, formato):
    """Curva de fallos LPR para todas las capacidades"""
    config = ConfiguracionEjecucion('miss-curve', ruta_distribucion=ruta_distribucion,
                                    ruta_traza=ruta_traza, semilla=semilla, n=n, ruta_salida=ruta_salida,
                                    formato=formato or 'csv', ruta_pila=ruta_pila)
    dist, traza = _cargar(config)
    reporte = ExperimentosManager(semilla).curva_fallos(dist, traza, n, _cargar_pila(config))
    _reportes().guardar(reporte, ruta_salida, config.formato)


# ============ COTAS Y CONTROL ============

@cli.command('bounds')
@click.option('--dist', 'ruta_distribucion', type=click.Path(dir_okay=False), required=True)
@click.option('--n', 'n', type=int, default=0, show_default=True,
              help='Accesos para el cociente empírico (0 lo omite)')
@_capacidades
@_semilla
@_salida
def bounds(ruta_distribucion, n, sueltas, rango, semilla, ruta_salida, formato):
    """Cota inferior del óptimo y cota del cociente competitivo"""
    config = ConfiguracionEjecucion('bounds', ruta_distribucion=ruta_distribucion,
                                    capacidades=parsear_capacidades(rango, sueltas), semilla=semilla,
                                    n=n, ruta_salida=ruta_salida, formato=formato or 'json')
    dist, _ = _cargar(config)
    capacidades = config.capacidades or list(range(2, dist.V))
    reporte = ExperimentosManager(semilla).cotas(dist, capacidades, n)
    _reportes().guardar(reporte, ruta_salida, config.formato)


@cli.command('dp')
@click.option('--dist', 'ruta_distribucion', type=click.Path(dir_okay=False), required=True)
@click.option('--capacity', 'capacidad', type=int, required=True)
@click.option('--horizon', 'horizonte', type=int, required=True)
@click.option('--average', 'promedio', is_flag=True, help='Agrega ganancia y sesgo de costo promedio')
@_salida
def dp(ruta_distribucion, capacidad, horizonte, promedio, ruta_salida, formato):
    """Costos óptimos de horizonte finito por estado de ocupación"""
    config = ConfiguracionEjecucion('dp', ruta_distribucion=ruta_distribucion,
                                    capacidades=[capacidad], ruta_salida=ruta_salida,
                                    formato=formato or 'json')
    dist, _ = _cargar(config)
    reporte = ExperimentosManager().programacion_dinamica(dist, capacidad, horizonte, promedio)
    _reportes().guardar(reporte, ruta_salida, config.formato)


@cli.command('bellman-c2')
@click.option('--dist', 'ruta_distribucion', type=click.Path(dir_okay=False), required=True)
@click.option('--out', 'ruta_salida', type=click.Path(dir_okay=False), default=None)
def bellman_c2_cmd(ruta_distribucion, ruta_salida):
    """Solución cerrada de la ecuación de costo promedio para C=2"""
    config = ConfiguracionEjecucion('bellman-c2', ruta_distribucion=ruta_distribucion,
                                    ruta_salida=ruta_salida, formato='json')
    dist, _ = _cargar(config)
    _reportes().guardar(ExperimentosManager().bellman_c2(dist), ruta_salida, 'json')


@cli.command('counterexample')
@click.option('--out', 'ruta_salida', type=click.Path(dir_okay=False), default=None)
def counterexample(ruta_salida):
    """Desalojos óptimos con C=2 y C=3 que violan la inclusión"""
    _reportes().guardar(ExperimentosManager().contraejemplo(), ruta_salida, 'json')


# ============ ASIGNACIÓN ============

@cli.command('allocate')
@click.option('--frontiers', 'ruta_fronteras', type=click.Path(dir_okay=False), required=True)
@click.option('--capacity', 'capacidad', type=float, required=True)
@click.option('--out', 'ruta_salida', type=click.Path(dir_okay=False), default=None)
def allocate(ruta_fronteras, capacidad, ruta_salida):
    """Asignación codiciosa de capacidad entre ítems"""
    reportes = _reportes()
    especificacion = reportes.leer_json(ruta_fronteras)
    reportes.guardar(ExperimentosManager().asignar(especificacion, capacidad), ruta_salida, 'json')


@cli.command('partition')
@click.option('--processes', 'ruta_procesos', type=click.Path(dir_okay=False), required=True)
@click.option('--capacity', 'capacidad', type=float, required=True)
@click.option('--out', 'ruta_salida', type=click.Path(dir_okay=False), default=None)
def partition(ruta_procesos, capacidad, ruta_salida):
    """Partición de un buffer entre procesos con pesos"""
    reportes = _reportes()
    especificacion = reportes.leer_json(ruta_procesos)
    reportes.guardar(ExperimentosManager().particionar(especificacion, capacidad), ruta_salida, 'json')


if __name__ == '__main__':
    cli()
