import os

import numpy as np
import pytest

import app
from src.field.factory import FieldFactory
from src.theta import ThetaSource


class ConstantTheta(ThetaSource):
    """Dependence probability fixed to one value, for exact transition checks"""

    def __init__(self, w: int, q: int = 1, value: float = 0.25):
        super().__init__(w=w, q=q)
        self.value = value

    def theta(self, r: int, c: int) -> float:
        return 1.0 if r == c else self.value

    def get_source_name(self) -> str:
        return "constant"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[1, 2, 3, 4, 8], ids=lambda q: f"q{q}")
def field(request):
    return FieldFactory.create_field(request.param)


@pytest.fixture
def constant_theta():
    return ConstantTheta


@pytest.fixture
def run_cli(tmp_path):
    """Invoke the command line with logs kept inside the test directory"""
    log_file = str(tmp_path / 'logs' / 'snc.log')

    def _run(*argv):
        return app.main(['--log-file', log_file, *[str(a) for a in argv]])

    return _run


@pytest.fixture
def read_text():
    def _read(path):
        with open(os.fspath(path)) as f:
            return f.read()
    return _read
