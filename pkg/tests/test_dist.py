"""
Pruebas de distribuciones, pila LRU y trazas
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modules.errores import ErrorDistribucion, ErrorTraza
from modules.moddist import (
    StackDistribution, LruStack, Trace, build_distribution, lru_update, make_rng,
    sample_depth, sample_depths, generate_trace, trace_from_depths, depths_from_trace,
    read_distribution, write_distribution, read_stack, read_trace, write_trace
)
from tests.estrategias import distribuciones, trazas


# ============ build_distribution ============

def test_distribucion_contraejemplo(dist_contraejemplo):
    assert dist_contraejemplo.V == 8
    esperadas = [1, 4, 7, 7, 11, 11, 11, 16]
    for j, valor in enumerate(esperadas, start=1):
        assert dist_contraejemplo.S(j) == pytest.approx(valor / 16)
    assert dist_contraejemplo.S(0) == 0.0
    assert dist_contraejemplo.S(20) == pytest.approx(1.0)


def test_distribucion_punto():
    dist = build_distribution([1.0])
    assert dist.V == 1
    assert dist.S(1) == 1.0


def test_recorta_ceros_finales():
    dist = build_distribution([0.5, 0.5, 0.0])
    assert dist.V == 2
    assert dist.prob(3) == 0.0


@pytest.mark.parametrize('raw', [[], [0.5, -0.1, 0.6], [0.0, 0.0], [0.3, 0.3], [float('nan'), 1.0]])
def test_distribucion_invalida(raw):
    with pytest.raises(ErrorDistribucion):
        build_distribution(raw)


def test_normaliza():
    dist = build_distribution([1, 3, 3, 0, 4, 0, 0, 5], normalize=True)
    assert dist == build_distribution([1 / 16, 3 / 16, 3 / 16, 0, 4 / 16, 0, 0, 5 / 16])


def test_arreglos_de_solo_lectura(dist_contraejemplo):
    with pytest.raises(ValueError):
        dist_contraejemplo.s[0] = 0.5


def test_media(dist_contraejemplo):
    assert dist_contraejemplo.media(2, 3) == pytest.approx(3 / 16)
    assert dist_contraejemplo.media(6, 8) == pytest.approx(5 / 48)


def test_from_dict(dist_contraejemplo):
    assert StackDistribution.from_dict(dist_contraejemplo.to_dict()) == dist_contraejemplo


# ============ MUESTREO ============

def test_muestreo_punto():
    rng = make_rng(3)
    assert {sample_depth(build_distribution([1.0]), rng) for _ in range(20)} == {1}
    assert {sample_depth(build_distribution([0.0, 1.0]), rng) for _ in range(20)} == {2}


def test_frecuencia_empirica(dist_contraejemplo):
    profundidades = sample_depths(dist_contraejemplo, make_rng(42), 10 ** 6)
    assert np.mean(profundidades == 8) == pytest.approx(5 / 16, abs=0.002)
    # s(4) = 0
    assert not np.any(profundidades == 4)


@given(distribuciones(max_V=10), st.integers(0, 2 ** 32))
@settings(max_examples=50, deadline=None)
def test_muestras_en_rango(dist, semilla):
    profundidades = sample_depths(dist, make_rng(semilla), 200)
    assert profundidades.min() >= 1
    assert profundidades.max() <= dist.V
    for d in np.unique(profundidades):
        assert dist.prob(int(d)) > 0


# ============ PILA LRU ============

def test_lru_update_tope():
    pila = LruStack([0, 1, 2])
    assert lru_update(pila, 0) == 1
    assert pila.items == [0, 1, 2]


def test_lru_update_fondo():
    pila = LruStack([0, 1, 2])
    assert lru_update(pila, 2) == 3
    assert pila.items == [2, 0, 1]


def test_lru_update_dos_accesos():
    pila = LruStack([0, 1, 2])
    assert lru_update(pila, 2) == 3
    assert lru_update(pila, 1) == 3
    assert pila.items == [1, 2, 0]
    assert pila.is_consistent()


def test_item_desconocido():
    with pytest.raises(ErrorTraza):
        lru_update(LruStack([0, 1]), 7)


def test_pila_con_repetidos():
    with pytest.raises(ErrorTraza):
        LruStack([0, 1, 1])


def test_push_en_frio():
    pila = LruStack([])
    pila.push(4)
    pila.push(2)
    assert pila.items == [2, 4]
    assert pila.depth(4) == 2
    with pytest.raises(ErrorTraza):
        pila.push(2)


@given(trazas(6, max_size=60))
@settings(max_examples=50)
def test_pila_consistente(accesos):
    pila = LruStack.identity(6)
    for item in accesos:
        assert lru_update(pila, item) >= 1
        assert pila.items[0] == item
    assert pila.is_consistent()
    assert sorted(pila.items) == list(range(6))


# ============ TRAZAS ============

def test_traza_vacia(dist_contraejemplo, pila_identidad):
    traza = generate_trace(dist_contraejemplo, pila_identidad, 0, make_rng(1))
    assert len(traza) == 0


def test_traza_punto_en_tope():
    traza = generate_trace(build_distribution([1.0, 0.0, 0.0]), LruStack([5, 6, 7]), 3, make_rng(1))
    assert list(traza) == [5, 5, 5]


def test_profundidades_reproducidas(dist_contraejemplo, pila_identidad):
    esperadas = sample_depths(dist_contraejemplo, make_rng(7), 5)
    traza = generate_trace(dist_contraejemplo, pila_identidad, 5, make_rng(7))
    assert depths_from_trace(traza, pila_identidad).tolist() == esperadas.tolist()


def test_pila_inicial_corta(dist_contraejemplo):
    with pytest.raises(ErrorTraza):
        generate_trace(dist_contraejemplo, LruStack.identity(4), 10, make_rng(1))


def test_profundidad_fuera_de_pila():
    with pytest.raises(ErrorTraza):
        trace_from_depths([1, 4], LruStack.identity(3))


def test_generador_no_altera_pila(dist_contraejemplo, pila_identidad):
    generate_trace(dist_contraejemplo, pila_identidad, 100, make_rng(2))
    assert pila_identidad.items == list(range(8))


def test_traza_valida_rango():
    assert Trace([0, 3, 1]).V == 4
    assert Trace([0, 1], V=8).V == 8
    with pytest.raises(ErrorTraza):
        Trace([0, 9], V=8)
    with pytest.raises(ErrorTraza):
        Trace([-1, 2])
    assert Trace([2, 2, 5]).distinct() == 2


def test_semillas_reproducibles(dist_contraejemplo, pila_identidad):
    a = generate_trace(dist_contraejemplo, pila_identidad, 50, make_rng(11))
    b = generate_trace(dist_contraejemplo, pila_identidad, 50, make_rng(11))
    c = generate_trace(dist_contraejemplo, pila_identidad, 50, make_rng(11, stream=1))
    assert list(a) == list(b)
    assert list(a) != list(c)


# ============ ARCHIVOS ============

def test_traza_texto_y_binaria(tmp_path, dist_contraejemplo, pila_identidad):
    traza = generate_trace(dist_contraejemplo, pila_identidad, 300, make_rng(5))
    texto = tmp_path / 'traza.txt'
    binaria = tmp_path / 'traza.bin'
    write_trace(traza, str(texto))
    write_trace(traza, str(binaria), binary=True)
    assert binaria.read_bytes()[:4] == b'LPRT'
    assert list(read_trace(str(texto))) == list(traza)
    assert list(read_trace(str(binaria))) == list(traza)


def test_traza_binaria_truncada(tmp_path, dist_contraejemplo, pila_identidad):
    traza = generate_trace(dist_contraejemplo, pila_identidad, 10, make_rng(5))
    ruta = tmp_path / 'traza.bin'
    write_trace(traza, str(ruta), binary=True)
    ruta.write_bytes(ruta.read_bytes()[:-3])
    with pytest.raises(ErrorTraza):
        read_trace(str(ruta))


def test_archivo_distribucion_con_comentarios(tmp_path):
    ruta = tmp_path / 'd.txt'
    ruta.write_text("# profundidades\n0.25\n0.75  # fondo\n\n", encoding='utf-8')
    dist = read_distribution(str(ruta))
    assert dist.V == 2
    assert dist.prob(2) == 0.75


def test_archivo_distribucion_invalido(tmp_path):
    ruta = tmp_path / 'd.txt'
    ruta.write_text("0.5\nmedio\n", encoding='utf-8')
    with pytest.raises(ErrorDistribucion):
        read_distribution(str(ruta))


def test_escribe_distribucion(tmp_path, ruta_contraejemplo, dist_contraejemplo):
    assert read_distribution(ruta_contraejemplo) == dist_contraejemplo
    ruta = tmp_path / 'copia.txt'
    write_distribution(dist_contraejemplo, str(ruta))
    leida = read_distribution(str(ruta))
    assert all(math.isclose(a, b) for a, b in zip(leida.s, dist_contraejemplo.s))


def test_lee_pila(tmp_path):
    ruta = tmp_path / 'pila.txt'
    ruta.write_text("3\n1\n2\n0\n", encoding='utf-8')
    assert read_stack(str(ruta)).items == [3, 1, 2, 0]
