"""Shared fixtures for the quartica test suite"""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))

from quartica.config import EngineConfig
from quartica.numberfield import NumberField
from quartica.polyring import HomPoly

DATA = Path(__file__).parent / "data"


@pytest.fixture
def config():
    """Deterministic single-threaded engine settings"""
    return EngineConfig(rank_method="auto", exact_cells=12000, threads=1, seed=20240601, tol=1e-8)


@pytest.fixture
def qq():
    return NumberField.rationals()


@pytest.fixture
def klein_nf():
    return NumberField((2, 1, 1), label="Q(e)", root_index=1, symbol="e")


@pytest.fixture
def fermat_qq(qq):
    return HomPoly(qq, 4, {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})


@pytest.fixture
def data_dir():
    return DATA
