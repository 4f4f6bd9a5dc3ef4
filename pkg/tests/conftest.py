"""Fixtures compartidas"""

import json

import pytest

from src.models.labeling import BudgetLedger, Example
from src.services.oracle_service import UniformNoiseOracle
from src.services.poker_service import parse_cards
from src.utils.random_streams import derive_stream


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow", action="store_true", default=False,
        help="Correr tambien las reproducciones largas (10^5-10^6 muestras)"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: reproducciones largas, requieren --run-slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="usar --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def stream():
    return derive_stream(1234, 0)


@pytest.fixture
def uniform_oracle():
    return UniformNoiseOracle(10, 0.2)


@pytest.fixture
def example():
    return Example(id=0, true_label=3)


@pytest.fixture
def ample_budget():
    return BudgetLedger(1_000_000)


@pytest.fixture
def reference_matchup():
    """Qh Js vs 7s 7d con flop 2s 9s Ts"""
    return parse_cards("Qh Js"), parse_cards("7s 7d"), parse_cards("2s 9s Ts")


@pytest.fixture
def write_config(tmp_path):
    """Escribir un RunConfig JSON y devolver su ruta"""
    def _write(**fields):
        data = {
            "oracle": {"kind": "uniform", "l": 10, "w": 0.2},
            "policy": "fixed:v=3",
            "s_max": 9,
            "examples": 10,
            "seed": 42,
            "out_dir": str(tmp_path / "out"),
        }
        data.update(fields)
        path = tmp_path / "run.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        return path
    return _write
