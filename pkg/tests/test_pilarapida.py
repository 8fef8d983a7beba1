"""
Pruebas del motor rápido de distancias LPR contra el oráculo directo
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modules.errores import ErrorTraza
from modules.moddist import LruStack, Trace, build_distribution, generate_trace, make_rng, depths_from_trace
from modules.modsegmentos import segmentation, kl_for_capacity
from modules.modpoliticas import PoliticaLPR, simulate, kl_miss_rate
from modules.modpilarapida import (
    ArbolFenwick, DistanciaLRU, SecuenciaImplicita, MissCurve,
    new_simulator, step, naive_oracle_step, OraculoIngenuo, miss_curve
)
from tests.estrategias import distribuciones, distribuciones_reales, pilas, trazas


# ============ ESTRUCTURAS ============

def test_fenwick():
    arbol = ArbolFenwick([3, 0, 2, 5])
    assert [arbol.prefix(i) for i in range(4)] == [3, 3, 5, 10]
    arbol.add(1, 4)
    assert arbol.prefix(1) == 7
    assert arbol.prefix(3) == 14


@given(trazas(10, max_size=300))
@settings(max_examples=50)
def test_distancia_lru_contra_pila(accesos):
    pila = LruStack.identity(10)
    rapida = DistanciaLRU(2, pila)
    esperadas = depths_from_trace(accesos, pila).tolist()
    assert [rapida.access(x)[0] for x in accesos] == esperadas


def test_distancia_lru_en_frio():
    rapida = DistanciaLRU()
    assert rapida.access(4) == (1, True)
    assert rapida.access(7) == (2, True)
    assert rapida.access(4) == (2, False)
    assert rapida.access(4) == (1, False)
    assert len(rapida) == 2


@given(st.lists(st.tuples(st.sampled_from(['rot', 'shift']), st.integers(0, 12)), max_size=40),
       st.integers(1, 12))
@settings(max_examples=50)
def test_secuencia_implicita(operaciones, n):
    secuencia = SecuenciaImplicita(list(range(n)), np.random.Generator(np.random.PCG64(0)))
    referencia = list(range(n))
    for op, k in operaciones:
        if op == 'rot':
            secuencia.rotate_right(k)
            r = k % n
            referencia = referencia[n - r:] + referencia[:n - r]
        else:
            p = min(k, n)
            secuencia.shift_prefix(p)
            if p > 1:
                referencia = [referencia[p - 1]] + referencia[:p - 1] + referencia[p:]
        assert secuencia.to_list() == referencia
    assert [secuencia.get(i) for i in range(n)] == referencia


# ============ SIMULADOR LPR ============

def test_estado_inicial(seg_contraejemplo):
    sim = new_simulator(seg_contraejemplo, LruStack.identity(8))
    assert [len(R) for R in sim.secuencias] == [2, 2, 3]
    assert sim.rho() == list(range(9))


def test_acceso_en_tope(seg_contraejemplo):
    pila = LruStack.identity(8)
    sim = new_simulator(seg_contraejemplo, pila)
    step(sim, 6)
    antes = sim.rho()
    assert step(sim, 6) == 1
    assert sim.rho() == antes


def test_decreciente_sin_desplazamientos(dist_decreciente):
    seg = segmentation(dist_decreciente)
    pila = LruStack.identity(5)
    traza = generate_trace(dist_decreciente, pila, 500, make_rng(4))
    sim = new_simulator(seg, pila)
    lpr = [step(sim, x) for x in traza]
    assert lpr == depths_from_trace(traza, pila).tolist()
    assert sim.rho() == list(range(6))


def test_V2_igual_a_lru():
    dist = build_distribution([0.3, 0.7])
    seg = segmentation(dist)
    assert seg.q == (1, 2)
    pila = LruStack.identity(2)
    traza = generate_trace(dist, pila, 50, make_rng(1))
    sim = new_simulator(seg, pila)
    assert [step(sim, x) for x in traza] == depths_from_trace(traza, pila).tolist()


def test_item_fuera_de_rango(seg_contraejemplo):
    sim = new_simulator(seg_contraejemplo)
    with pytest.raises(ErrorTraza):
        step(sim, 8)
    with pytest.raises(ErrorTraza):
        new_simulator(seg_contraejemplo, LruStack([0, 1, 2]))


def test_oraculo_desplazamiento(seg_contraejemplo):
    oraculo = OraculoIngenuo(seg_contraejemplo, LruStack.identity(8))
    # d = 5 en Q2 = [4, 5]: Q1 completo rota, en Q2 sólo el tramo [4, 5]
    assert naive_oracle_step(oraculo, 4) == 5
    assert oraculo.rho == [0, 1, 3, 2, 5, 4, 6, 7, 8]
    # d = 7 en Q3 = [6, 8]: rota el tramo [6, 7], la profundidad 8 no cambia
    assert naive_oracle_step(oraculo, 6) == 7
    assert oraculo.rho == [0, 1, 2, 3, 4, 5, 7, 6, 8]


@given(distribuciones(min_V=2, max_V=12), st.data())
@settings(max_examples=150, deadline=None)
def test_motor_rapido_igual_a_oraculo(dist, data):
    seg = segmentation(dist)
    pila = data.draw(pilas(dist.V))
    semilla = data.draw(st.integers(0, 2 ** 32))
    traza = generate_trace(dist, pila, 300, make_rng(semilla))
    rapido = new_simulator(seg, pila, seed=semilla)
    oraculo = OraculoIngenuo(seg, pila)
    for item in traza:
        assert step(rapido, item) == naive_oracle_step(oraculo, item)
    assert rapido.rho() == oraculo.rho


@given(distribuciones(min_V=2, max_V=12), st.data())
@settings(max_examples=100, deadline=None)
def test_motor_rapido_en_frio(dist, data):
    seg = segmentation(dist)
    accesos = data.draw(trazas(dist.V, max_size=200))
    rapido = new_simulator(seg)
    oraculo = OraculoIngenuo(seg)
    salidas = []
    for item in accesos:
        salida = step(rapido, item)
        assert salida == naive_oracle_step(oraculo, item)
        salidas.append(salida)
    assert salidas.count(dist.V + 1) == len(set(accesos))


@pytest.mark.slow
def test_motor_rapido_grande():
    rng = make_rng(77)
    for V in (64, 256, 512):
        dist = build_distribution(rng.random(V) + 1e-3, normalize=True)
        seg = segmentation(dist)
        pila = LruStack.identity(V)
        traza = generate_trace(dist, pila, 10 ** 5, rng)
        rapido = new_simulator(seg, pila)
        oraculo = OraculoIngenuo(seg, pila)
        for item in traza:
            assert step(rapido, item) == naive_oracle_step(oraculo, item)


@pytest.mark.slow
def test_motor_rapido_cien_pares():
    rng = make_rng(512)
    for _ in range(100):
        V = int(rng.integers(2, 513))
        masas = rng.random(V) * (rng.random(V) < 0.8)
        masas[-1] += 1e-3
        dist = build_distribution(masas, normalize=True)
        seg = segmentation(dist)
        pila = LruStack([int(x) for x in rng.permutation(dist.V)])
        traza = generate_trace(dist, pila, 10 ** 5, rng)
        rapido = new_simulator(seg, pila, seed=int(rng.integers(2 ** 32)))
        oraculo = OraculoIngenuo(seg, pila)
        for item in traza:
            assert step(rapido, item) == naive_oracle_step(oraculo, item)
        assert rapido.rho() == oraculo.rho


# ============ CURVA DE FALLOS ============

@given(distribuciones(min_V=2, max_V=10), st.data())
@settings(max_examples=40, deadline=None)
def test_curva_contra_simulacion(dist, data):
    seg = segmentation(dist)
    accesos = data.draw(trazas(dist.V, min_size=1, max_size=150))
    traza = Trace(accesos, V=dist.V)
    curva = miss_curve(seg, traza)
    for C in range(1, dist.V + 1):
        assert curva.misses(C) == simulate(PoliticaLPR(seg), traza, C).misses
    assert curva.misses(dist.V) == traza.distinct()
    assert all(a >= b for a, b in zip(curva.fallos[1:], curva.fallos[2:]))


@given(distribuciones_reales(max_V=10), st.data())
@settings(max_examples=40, deadline=None)
def test_curva_contra_simulacion_no_diadica(dist, data):
    seg = segmentation(dist)
    pila = data.draw(pilas(dist.V))
    traza = generate_trace(dist, pila, 200, make_rng(data.draw(st.integers(0, 2 ** 32))))
    curva = miss_curve(seg, traza)
    for C in range(1, dist.V + 1):
        assert curva.misses(C) == simulate(PoliticaLPR(seg), traza, C).misses


@pytest.mark.slow
@given(distribuciones_reales(min_V=8, max_V=32), st.integers(0, 2 ** 32))
@settings(max_examples=20, deadline=None)
def test_curva_contra_simulacion_hasta_32(dist, semilla):
    seg = segmentation(dist)
    pila = LruStack.identity(dist.V)
    traza = generate_trace(dist, pila, 3000, make_rng(semilla))
    curva = miss_curve(seg, traza)
    for C in range(1, dist.V + 1):
        assert curva.misses(C) == simulate(PoliticaLPR(seg), traza, C).misses


def test_curva_estacionaria_igual_a_kl(dist_contraejemplo, seg_contraejemplo):
    pila = LruStack.identity(8)
    traza = generate_trace(dist_contraejemplo, pila, 40_000, make_rng(12))
    curva = miss_curve(seg_contraejemplo, traza, initial_stack=pila)
    for C in range(2, 8):
        K, L = kl_for_capacity(seg_contraejemplo, C)
        assert curva.miss_rate(C) == pytest.approx(kl_miss_rate(dist_contraejemplo, K, L, C), abs=0.015)
    assert curva.misses(8) == 0


def test_curva_traza_vacia(seg_contraejemplo):
    curva = miss_curve(seg_contraejemplo, Trace([], V=8))
    assert curva.accesses == 0
    assert [curva.misses(C) for C in range(1, 9)] == [0] * 8
    assert curva.miss_rate(3) == 0.0


def test_curva_en_tope():
    # tres accesos en frío y uno a profundidad 2; el resto en el tope
    accesos = [0, 0, 0, 1, 1, 0, 0, 2, 2, 2]
    dist = build_distribution([0.5, 0.3, 0.2])
    curva = miss_curve(segmentation(dist), Trace(accesos, V=3))
    assert [curva.misses(C) for C in range(1, 4)] == [4, 3, 3]


def test_curva_desde_profundidades():
    curva = MissCurve.from_depths([1, 2, 2, 5, 4], V=4)
    assert [curva.misses(C) for C in range(1, 5)] == [4, 2, 2, 1]
    assert curva.to_dict()['misses'] == [4, 2, 2, 1]
    assert curva.rows()[0] == [1, 4, repr(0.8)]
