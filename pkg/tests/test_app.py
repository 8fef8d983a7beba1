"""
Pruebas de la interfaz de línea de comandos
"""

import json

import pytest
from click.testing import CliRunner

from app import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def ruta_frontera(tmp_path):
    ruta = tmp_path / 'fronteras.json'
    ruta.write_text(json.dumps({'items': [[[1, 0.5], [2, 0.1]], [[1, 0.4], [2, 0.35]]]}))
    return str(ruta)


def test_contraejemplo(runner):
    resultado = runner.invoke(cli, ['counterexample'])
    assert resultado.exit_code == 0
    datos = json.loads(resultado.output)
    assert (datos['C2_eviction_depth'], datos['C3_eviction_depth']) == (2, 5)


def test_segmentos(runner, ruta_contraejemplo):
    resultado = runner.invoke(cli, ['segments', '--dist', ruta_contraejemplo])
    assert resultado.exit_code == 0
    datos = json.loads(resultado.output)
    assert datos['q'] == [1, 3, 5, 8]
    assert datos['kl'][0] == {'C': 2, 'K': 1, 'L': 3, 'miss_rate': pytest.approx(0.75)}


def test_segmentos_a_archivo(runner, ruta_contraejemplo, tmp_path):
    salida = tmp_path / 'seg.csv'
    resultado = runner.invoke(cli, ['segments', '--dist', ruta_contraejemplo,
                                    '--format', 'csv', '--out', str(salida)])
    assert resultado.exit_code == 0
    lineas = salida.read_text().splitlines()
    assert lineas[0] == 'capacity,K,L,miss_rate'
    assert lineas[1].startswith('2,1,3,')
    assert not list(tmp_path.glob('.tmp-*'))


def test_generar_traza(runner, ruta_contraejemplo, tmp_path):
    resultado = runner.invoke(cli, ['gen-trace', '--dist', ruta_contraejemplo, '--n', '5', '--seed', '7'])
    assert resultado.exit_code == 0
    items = [int(x) for x in resultado.output.split()]
    assert len(items) == 5
    assert all(0 <= x < 8 for x in items)
    repetido = runner.invoke(cli, ['gen-trace', '--dist', ruta_contraejemplo, '--n', '5', '--seed', '7'])
    assert repetido.output == resultado.output


def test_traza_binaria_requiere_salida(runner, ruta_contraejemplo):
    resultado = runner.invoke(cli, ['gen-trace', '--dist', ruta_contraejemplo, '--n', '5', '--binary'])
    assert resultado.exit_code == 1


def test_simular_desde_archivo(runner, ruta_contraejemplo, tmp_path):
    traza = tmp_path / 'traza.bin'
    assert runner.invoke(cli, ['gen-trace', '--dist', ruta_contraejemplo, '--n', '300',
                               '--binary', '--out', str(traza)]).exit_code == 0
    resultado = runner.invoke(cli, ['simulate', '--trace', str(traza), '--policy', 'lru',
                                    '--capacities', '1..3'])
    assert resultado.exit_code == 0
    lineas = resultado.output.splitlines()
    assert lineas[0] == 'capacity,policy,accesses,misses,miss_rate'
    assert len(lineas) == 4


def test_curva_sin_accesos(runner, ruta_contraejemplo):
    resultado = runner.invoke(cli, ['miss-curve', '--dist', ruta_contraejemplo, '--n', '0'])
    assert resultado.exit_code == 0
    filas = resultado.output.splitlines()[1:]
    assert [fila.split(',')[1] for fila in filas] == ['0'] * 8


@pytest.fixture
def ruta_pila_invertida(tmp_path):
    ruta = tmp_path / 'pila.txt'
    ruta.write_text('# tope primero\n' + ''.join(f'{i}\n' for i in range(7, -1, -1)))
    return str(ruta)


def test_generar_traza_con_pila(runner, ruta_contraejemplo, ruta_pila_invertida):
    base = ['gen-trace', '--dist', ruta_contraejemplo, '--n', '50', '--seed', '3']
    identidad = [int(x) for x in runner.invoke(cli, base).output.split()]
    resultado = runner.invoke(cli, base + ['--stack', ruta_pila_invertida])
    assert resultado.exit_code == 0
    # la pila invertida renombra cada ítem x como 7 − x
    assert [int(x) for x in resultado.output.split()] == [7 - x for x in identidad]


def test_curva_con_pila(runner, ruta_contraejemplo, ruta_pila_invertida):
    resultado = runner.invoke(cli, ['miss-curve', '--dist', ruta_contraejemplo, '--n', '200',
                                    '--stack', ruta_pila_invertida])
    assert resultado.exit_code == 0
    filas = resultado.output.splitlines()
    # con la pila completa no hay accesos en frío
    assert filas[-1].split(',')[:2] == ['8', '0']


def test_simular_con_pila(runner, ruta_contraejemplo, ruta_pila_invertida, tmp_path):
    resultado = runner.invoke(cli, ['simulate', '--dist', ruta_contraejemplo, '--n', '200',
                                    '--stack', ruta_pila_invertida, '--policy', 'lpr', '--capacity', '2'])
    assert resultado.exit_code == 0
    assert resultado.output.splitlines()[1].startswith('2,lpr,200,')
    corta = tmp_path / 'corta.txt'
    corta.write_text('0\n1\n2\n')
    resultado = runner.invoke(cli, ['simulate', '--dist', ruta_contraejemplo, '--n', '200',
                                    '--stack', str(corta), '--capacity', '2'])
    assert resultado.exit_code == 1


def test_pila_inexistente(runner, ruta_contraejemplo, tmp_path):
    resultado = runner.invoke(cli, ['gen-trace', '--dist', ruta_contraejemplo, '--n', '5',
                                    '--stack', str(tmp_path / 'no.txt')])
    assert resultado.exit_code == 1


def test_segmentos_uniformes_no_diadicos(runner, tmp_path):
    ruta = tmp_path / 'decimos.txt'
    ruta.write_text('0.1\n' * 10)
    resultado = runner.invoke(cli, ['segments', '--dist', str(ruta)])
    assert resultado.exit_code == 0
    assert json.loads(resultado.output)['q'] == [1, 10]


def test_cotas(runner, ruta_contraejemplo):
    resultado = runner.invoke(cli, ['bounds', '--dist', ruta_contraejemplo, '--capacity', '2'])
    assert resultado.exit_code == 0
    cotas = json.loads(resultado.output)['bounds']
    assert cotas[0]['L_opt'] == pytest.approx(135 / 313)


def test_bellman_c2(runner, ruta_contraejemplo):
    resultado = runner.invoke(cli, ['bellman-c2', '--dist', ruta_contraejemplo])
    assert resultado.exit_code == 0
    assert json.loads(resultado.output)['beta2'] == pytest.approx(3 / 16)


def test_asignar(runner, ruta_frontera):
    resultado = runner.invoke(cli, ['allocate', '--frontiers', ruta_frontera, '--capacity', '3'])
    assert resultado.exit_code == 0
    assert json.loads(resultado.output)['M'] == pytest.approx(0.5)


def test_particionar(runner, tmp_path):
    ruta = tmp_path / 'procesos.json'
    ruta.write_text(json.dumps({'processes': [
        {'weight': 0.5, 'dist': [0.4, 0.3, 0.2, 0.1]},
        {'weight': 0.5, 'dist': [0.4, 0.3, 0.2, 0.1]},
    ]}))
    resultado = runner.invoke(cli, ['partition', '--processes', str(ruta), '--capacity', '4'])
    assert resultado.exit_code == 0
    assert json.loads(resultado.output)['capacities'] == pytest.approx([2.0, 2.0])


# ============ ERRORES ============

def test_distribucion_invalida(runner, tmp_path):
    ruta = tmp_path / 'mala.txt'
    ruta.write_text('0.5\n0.7\n')
    resultado = runner.invoke(cli, ['segments', '--dist', str(ruta)])
    assert resultado.exit_code == 1


def test_archivo_inexistente(runner, tmp_path):
    resultado = runner.invoke(cli, ['segments', '--dist', str(tmp_path / 'no.txt')])
    assert resultado.exit_code == 1


def test_capacidad_fuera_de_rango(runner, ruta_contraejemplo):
    resultado = runner.invoke(cli, ['bounds', '--dist', ruta_contraejemplo, '--capacity', '9'])
    assert resultado.exit_code == 1


def test_json_invalido(runner, tmp_path):
    ruta = tmp_path / 'roto.json'
    ruta.write_text('{items')
    resultado = runner.invoke(cli, ['allocate', '--frontiers', str(ruta), '--capacity', '2'])
    assert resultado.exit_code == 1


def test_opcion_faltante(runner):
    assert runner.invoke(cli, ['miss-curve']).exit_code == 1


def test_nivel_de_log_invalido(runner):
    assert runner.invoke(cli, ['--log-level', 'ruidoso', 'counterexample']).exit_code == 1
