import numpy as np
import pytest

from jlvt import OracleParams, ParameterRanges, fit, label_with_oracle, monomial_basis, random_training_set
from jlvt.regressors import InputScaler


@pytest.fixture(scope="session")
def params():
    return OracleParams()


@pytest.fixture(scope="session")
def ranges():
    return ParameterRanges()


@pytest.fixture(scope="session")
def scaler(ranges):
    return InputScaler.from_bounds(ranges.bounds())


@pytest.fixture(scope="session")
def train_small(params, ranges):
    return label_with_oracle(random_training_set(ranges, 1000, seed=7), params)


@pytest.fixture(scope="session")
def model_small(train_small, scaler):
    return fit(train_small, monomial_basis(6), scaler)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Log one PASS/FAIL line for the acceptance summary, then assert."""

    def _record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
