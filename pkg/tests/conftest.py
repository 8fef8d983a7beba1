"""
Fixtures compartidas
"""

import pytest

import configuracion
from modules.moddist import build_distribution, LruStack
from modules.modsegmentos import segmentation
from modules.modcontrol import DISTRIBUCION_CONTRAEJEMPLO


@pytest.fixture
def dist_contraejemplo():
    """s = [1, 3, 3, 0, 4, 0, 0, 5] / 16"""
    return build_distribution(DISTRIBUCION_CONTRAEJEMPLO)


@pytest.fixture
def seg_contraejemplo(dist_contraejemplo):
    return segmentation(dist_contraejemplo)


@pytest.fixture
def dist_decreciente():
    return build_distribution([5, 4, 3, 2, 1], normalize=True)


@pytest.fixture
def dist_creciente():
    return build_distribution([1, 2, 3, 4, 5], normalize=True)


@pytest.fixture
def dist_uniforme():
    return build_distribution([0.25] * 4)


@pytest.fixture
def pila_identidad():
    return LruStack.identity(8)


@pytest.fixture
def ruta_contraejemplo():
    return configuracion.RUTA_CONTRAEJEMPLO
